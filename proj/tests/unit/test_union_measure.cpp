#include <doctest.h>

#include "../oracles.hpp"
#include "helpers.hpp"
#include "varifold_lab/union_measure.hpp"

using namespace vlab;
using test::v3;

namespace {

Triangle2 tri(double ax, double ay, double bx, double by, double cx, double cy) {
  return {Eigen::Vector2d(ax, ay), Eigen::Vector2d(bx, by), Eigen::Vector2d(cx, cy)};
}

}  // namespace

TEST_SUITE("union_measure") {
  TEST_CASE("interval unions") {
    CHECK(interval_union_length({}) == 0.0);
    CHECK(interval_union_length({{0, 1}, {2, 3}}) == doctest::Approx(2.0));
    CHECK(interval_union_length({{0, 1}, {0.5, 2}, {1.5, 1.7}}) == doctest::Approx(2.0));
    CHECK(interval_union_length({{1, 0}, {0, 1}}) == doctest::Approx(1.0));
    CHECK(interval_union_length({{0, 1}, {1, 2}}) == doctest::Approx(2.0));
  }

  TEST_CASE("interval unions agree with a grid count") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 10);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Interval> iv;
      for (int i = 0; i < 8; ++i) {
        const double a = u(rng);
        iv.push_back({a, a + 0.3 * u(rng)});
      }
      CHECK(interval_union_length(iv) == doctest::Approx(oracle::raster_interval_union(iv, 200000)).epsilon(1e-3));
    }
  }

  TEST_CASE("triangle unions count overlaps once") {
    auto t = tri(0, 0, 1, 0, 0, 1);
    CHECK(triangle_union_area({t}) == doctest::Approx(0.5));
    CHECK(triangle_union_area({t, t, t}) == doctest::Approx(0.5));
    CHECK(triangle_union_area({t, tri(2, 0, 3, 0, 2, 1)}) == doctest::Approx(1.0));
    // two unit squares overlapping in a quarter
    std::vector<Triangle2> sq{tri(0, 0, 1, 0, 1, 1), tri(0, 0, 1, 1, 0, 1), tri(0.5, 0.5, 1.5, 0.5, 1.5, 1.5),
                              tri(0.5, 0.5, 1.5, 1.5, 0.5, 1.5)};
    CHECK(triangle_union_area(sq) == doctest::Approx(1.75));
    // hexagram from two triangles inscribed in the unit circle: 4/3 of one triangle
    const double s = std::sqrt(3.0) / 2.0;
    auto up = tri(0, 1, -s, -0.5, s, -0.5);
    auto down = tri(0, -1, -s, 0.5, s, 0.5);
    CHECK(triangle_union_area({up, down}) == doctest::Approx(std::sqrt(3.0)));
  }

  TEST_CASE("triangle unions agree with rasterization") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 8; ++trial) {
      std::vector<Triangle2> tris;
      std::vector<oracle::Tri> otris;
      for (int i = 0; i < 6; ++i) {
        auto t = tri(u(rng), u(rng), u(rng), u(rng), u(rng), u(rng));
        tris.push_back(t);
        otris.push_back({t[0], t[1], t[2]});
      }
      const double exact = triangle_union_area(tris);
      CHECK(exact == doctest::Approx(oracle::raster_triangle_union(otris, 1000)).epsilon(5e-3));
    }
  }

  TEST_CASE("image measure merges collinear and coplanar pieces") {
    std::vector<std::vector<Vec>> segs{{v3(0, 0, 0), v3(1, 1, 1)}, {v3(0.5, 0.5, 0.5), v3(2, 2, 2)}};
    CHECK(image_measure(1, segs) == doctest::Approx(2.0 * std::sqrt(3.0)));
    segs.push_back({v3(0, 0, 1), v3(0, 0, 2)});
    CHECK(image_measure(1, segs) == doctest::Approx(2.0 * std::sqrt(3.0) + 1.0));
    std::vector<std::vector<Vec>> tris{{v3(0, 0, 1), v3(1, 0, 1), v3(0, 1, 1)},
                                       {v3(0, 0, 1), v3(1, 0, 1), v3(0, 1, 1)},
                                       {v3(0, 0, 0), v3(1, 0, 0), v3(0, 0, 1)}};
    CHECK(image_measure(2, tris) == doctest::Approx(1.0));
    // degenerate pieces contribute nothing
    CHECK(image_measure(1, {{v3(1, 1, 1), v3(1, 1, 1)}}) == 0.0);
  }
}
