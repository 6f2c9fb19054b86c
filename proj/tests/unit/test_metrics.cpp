#include <doctest.h>

#include <cmath>

#include "../oracles.hpp"
#include "helpers.hpp"
#include "varifold_lab/errors.hpp"
#include "varifold_lab/metrics.hpp"
#include "varifold_lab/scenarios.hpp"

using namespace vlab;
using test::v2;
using test::v3;

namespace {

DiscreteVarifold random_varifold(std::mt19937_64& rng, int atoms) {
  std::uniform_real_distribution<double> mass(0.05, 1.0);
  std::vector<Atom> out;
  for (int i = 0; i < atoms; ++i) {
    out.push_back({test::random_vec(2, rng), Plane(test::gaussian_frame(2, 1, rng)), mass(rng)});
  }
  return DiscreteVarifold(2, 1, out);
}

DiscreteVarifold single(const Vec& x, const Plane& t, double m = 1.0) {
  return DiscreteVarifold(static_cast<int>(x.size()), t.dim(), {{x, t, m}});
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("two-atom closed forms") {
    auto h = Plane::coordinate(2, {0});
    CHECK(bl_distance(single(v2(0, 0), h), single(v2(0.3, 0), h), BLMethod::ExactLP).value ==
          doctest::Approx(0.3).epsilon(1e-9));
    auto s = Plane::line(v2(1, 2));
    CHECK(bl_distance(single(v2(0, 0), h), single(v2(0, 0), s), BLMethod::ExactLP).value ==
          doctest::Approx(grassmann_distance(h, s)).epsilon(1e-9));
    // beyond distance 2 the mass is destroyed and recreated
    CHECK(bl_distance(single(v2(0, 0), h), single(v2(5, 0), h), BLMethod::ExactLP).value == doctest::Approx(2.0));
    // unequal masses at one point
    CHECK(bl_distance(single(v2(0, 0), h, 1.0), single(v2(0, 0), h, 0.4), BLMethod::ExactLP).value ==
          doctest::Approx(0.6));
  }

  TEST_CASE("BL is a metric on random atom lists") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
      auto a = random_varifold(rng, 5), b = random_varifold(rng, 4), c = random_varifold(rng, 6);
      const double ab = bl_distance(a, b, BLMethod::ExactLP).value;
      CHECK(ab == doctest::Approx(bl_distance(b, a, BLMethod::ExactLP).value).epsilon(1e-9));
      CHECK(std::abs(bl_distance(a, a, BLMethod::ExactLP).value) < 1e-7);
      CHECK(ab <= bl_distance(a, c, BLMethod::ExactLP).value + bl_distance(c, b, BLMethod::ExactLP).value + 1e-7);
      CHECK(bl_distance(a, b, BLMethod::Dictionary).value <= ab + 1e-9);
    }
  }

  TEST_CASE("dictionary functions are bounded and 1-Lipschitz") {
    TestDictionary dict(2, 1, Ball(v2(0.5, 0), 0.75));
    CHECK(dict.size() >= 200);
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
      Vec x = test::random_vec(2, rng, 1.5), y = x + test::random_vec(2, rng, 0.2);
      Plane s(test::gaussian_frame(2, 1, rng)), t(test::gaussian_frame(2, 1, rng));
      const double d = (x - y).norm() + grassmann_distance(s, t);
      for (std::size_t k = 0; k < dict.size(); k += 7) {
        const double fx = dict.evaluate(k, x, s), fy = dict.evaluate(k, y, t);
        CHECK(std::abs(fx) <= 1.0 + 1e-12);
        CHECK(std::abs(fx - fy) <= d + 1e-12);
      }
    }
  }

  TEST_CASE("dictionary witness separates zigzag from the segment") {
    auto seg = var_of_set(scenario_limit("segment"), 1);
    auto domain = family_info("zigzag").domain;
    for (int k : {4, 16, 64}) {
      auto z = var_of_set(scenario_sequence("zigzag", k), 1);
      auto r = bl_distance(z, seg, BLMethod::Dictionary, domain);
      CHECK(r.value >= 0.25);
      CHECK(r.witness == "one|dist_e0");
      CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  TEST_CASE("method names") {
    CHECK(bl_method_from_string("lp") == BLMethod::ExactLP);
    CHECK(bl_method_from_string("dictionary") == BLMethod::Dictionary);
    CHECK(to_string(BLMethod::ExactLP) == "lp");
    CHECK_THROWS_AS(bl_method_from_string("simplex"), ConfigError);
    CHECK_THROWS_AS(bl_distance(DiscreteVarifold(2, 1), DiscreteVarifold(3, 1), BLMethod::ExactLP), InputError);
  }

  TEST_CASE("local Hausdorff examples") {
    SampledSet x = SimplicialSet::segment(v2(0, 0), v2(1, 0));
    SampledSet y = SimplicialSet::segment(v2(0, 0.1), v2(1, 0.1));
    CHECK(hausdorff_local(x, x, v2(0.5, 0), 0.5).value == 0.0);
    CHECK(hausdorff_local(x, y, v2(0.5, 0), 0.5).value == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(hausdorff_local(y, x, v2(0.5, 0), 0.5).value == doctest::Approx(0.4).epsilon(1e-9));
    SampledSet far = SimplicialSet::segment(v2(0, 5), v2(1, 5));
    // sup over an empty clip is 0; the other side still sees distance 5
    CHECK(hausdorff_local(x, far, v2(0.5, 0), 0.5).value == doctest::Approx(10.0));
    CHECK_THROWS_AS(hausdorff_local(x, y, v2(0.5, 0), 0.0), InputError);
  }

  TEST_CASE("local Hausdorff of zigzags agrees with dense sampling") {
    auto seg = scenario_limit("segment");
    SampledSet s = seg;
    const Vec x = v2(0.5, 0);
    for (int k : {1, 4, 16}) {
      auto z = scenario_sequence("zigzag", k);
      SampledSet zs = z;
      auto rep = hausdorff_local(zs, s, x, 0.5);
      std::vector<std::vector<oracle::Vec>> zsoup, ssoup;
      for (std::size_t i = 0; i < z.size(); ++i) zsoup.push_back(z.corners(i));
      for (std::size_t i = 0; i < seg.size(); ++i) ssoup.push_back(seg.corners(i));
      const double ref = oracle::sampled_local_hausdorff(oracle::dense_samples(zsoup, 64),
                                                         oracle::dense_samples(ssoup, 64), x, 0.5);
      CHECK(rep.value == doctest::Approx(ref).epsilon(0.02));
      CHECK(rep.value <= 2.0 / (k * 0.5) + 1e-9);
      CHECK(hausdorff_local(s, zs, x, 0.5).value == doctest::Approx(rep.value).epsilon(1e-3));
    }
  }

  TEST_CASE("projected mass examples") {
    auto horiz = Plane::coordinate(2, {0});
    auto line = SimplicialSet::segment(v2(-2, 0), v2(2, 0), 3);
    CHECK(projected_mass(line, v2(0.1, 0), 0.5, horiz) == doctest::Approx(2.0).epsilon(1e-12));
    const double th = M_PI / 3;
    auto tilted = SimplicialSet::segment(v2(-2 * std::cos(th), -2 * std::sin(th)), v2(2 * std::cos(th), 2 * std::sin(th)));
    CHECK(projected_mass(tilted, v2(0, 0), 1.0, horiz) == doctest::Approx(1.0).epsilon(1e-12));
    for (int k : {1, 3, 16}) {
      CHECK(projected_mass(scenario_sequence("zigzag", k), v2(0.5, 0), 0.5, horiz) ==
            doctest::Approx(2.0).epsilon(1e-9));
    }
    auto flat = surface_graph(-2, -2, 4, 8, [](double, double) { return 0.0; });
    CHECK(projected_mass(flat, v3(0.1, 0.2, 0), 0.5, Plane::coordinate(3, {0, 1})) ==
          doctest::Approx(M_PI).epsilon(1e-3));
    CHECK(projected_mass(SimplicialSet::segment(v2(3, 3), v2(4, 3)), v2(0, 0), 1.0, horiz) == 0.0);
    CHECK_THROWS_AS(projected_mass(line, v2(0, 0), 0.0, horiz), InputError);
    CHECK_THROWS_AS(projected_mass(line, v2(0, 0), 1.0, Plane::coordinate(2, {0, 1})), InputError);
  }

  TEST_CASE("projection does not increase measure") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Vec> pts;
      for (int i = 0; i < 10; ++i) pts.push_back(test::random_vec(2, rng));
      auto e = SimplicialSet::polyline(pts);
      Vec x = test::random_vec(2, rng, 0.5);
      const double r = 0.1 + 0.05 * trial;
      Plane t(test::gaussian_frame(2, 1, rng));
      CHECK(projected_mass(e, x, r, t) <= measure(restrict(e, Ball(x, r))) / r + 1e-9);
    }
    auto bump = surface_graph(0, 0, 1, 8, [](double a, double b) { return std::sin(6 * a) * b; });
    CHECK(projected_mass(bump, v3(0.5, 0.5, 0.2), 0.4, Plane::coordinate(3, {0, 1})) <=
          measure(restrict(bump, Ball(v3(0.5, 0.5, 0.2), 0.4))) / 0.16 + 1e-9);
  }

  TEST_CASE("tangent filling verdicts") {
    const std::vector<double> radii{0.25, 0.125, 0.0625};
    const auto horiz = Plane::coordinate(2, {0});
    auto seq = [](const std::string& f) { return [f](int k) { return scenario_sequence(f, k); }; };
    CHECK(strcon_check(seq("graph_decay"), v2(0.5, 0), horiz, radii, 64).verdict == StrConVerdict::Holds);
    CHECK(strcon_check(seq("zigzag"), v2(0.5, 0), horiz, radii, 64).verdict == StrConVerdict::Holds);
    auto esc = strcon_check(seq("escape"), v2(0.5, 0), horiz, radii, 64);
    CHECK(esc.verdict == StrConVerdict::Fails);
    for (const auto& c : esc.cells) CHECK(c.value == 0.0);
    CHECK(to_string(StrConVerdict::Holds) == "HOLDS");
  }

  TEST_CASE("tail length") {
    CHECK(tail_length(1) == 1);
    CHECK(tail_length(2) == 2);
    CHECK(tail_length(7) == 2);
    CHECK(tail_length(9) == 3);
    CHECK(tail_length(16) == 4);
  }
}
