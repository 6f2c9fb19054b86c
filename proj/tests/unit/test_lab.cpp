#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "varifold_lab/errors.hpp"
#include "varifold_lab/io.hpp"
#include "varifold_lab/lab.hpp"
#include "varifold_lab/scenarios.hpp"

using namespace vlab;
using test::v2;

namespace {

ScenarioSpec spec_for(const std::string& family, std::vector<int> ks) {
  Json j = {{"schema", 1}, {"name", family}, {"family", family}, {"ks", ks}};
  return parse_scenario_spec(j);
}

}  // namespace

TEST_SUITE("lab") {
  TEST_CASE("spec parsing defaults and errors") {
    auto s = parse_scenario_spec(Json{{"family", "graph_decay"}});
    CHECK(s.ks == std::vector<int>{1, 2, 4, 8, 16, 32, 64});
    CHECK(s.integrand == "area");
    CHECK(s.M == 1.0);
    CHECK(parse_scenario_spec(Json{{"family", "zigzag"}, {"k_max", 8}}).ks == std::vector<int>{1, 2, 4, 8});

    CHECK_THROWS_AS(parse_scenario_spec(Json{{"family", "spiral"}}), ConfigError);
    CHECK_THROWS_AS(parse_scenario_spec(Json{{"family", "zigzag"}, {"ks", {1, 4, 2}}}), ConfigError);
    CHECK_THROWS_AS(parse_scenario_spec(Json{{"family", "zigzag"}, {"ks", {1, 1}}}), ConfigError);
    CHECK_THROWS_AS(parse_scenario_spec(Json{{"family", "zigzag"}, {"colour", "red"}}), ConfigError);
    CHECK_THROWS_AS(parse_scenario_spec(Json{{"family", "zigzag"}, {"integrand", "soap"}}), ConfigError);
    CHECK_THROWS_AS(parse_scenario_spec(Json{{"family", "zigzag"}, {"ks", {1}}, {"k_max", 4}}), ConfigError);
    CHECK_THROWS_AS(parse_scenario_spec(Json{{"family", "zigzag"}, {"M", 0.5}}), ConfigError);
    CHECK_THROWS_AS(parse_scenario_spec(Json{{"family", "zigzag"}, {"radii", {0.1, -0.1}}}), ConfigError);
    CHECK_THROWS_AS(parse_scenario_spec(Json{{"family", "zigzag"}, {"base_point", {3.0, 0.0}}}), ConfigError);
    CHECK_THROWS_AS(parse_scenario_spec(Json{{"family", "zigzag"}, {"schema", 2}}), ConfigError);
    CHECK_THROWS_AS(parse_scenario_spec(Json{{"family", "zigzag"}, {"ks", "many"}}), ConfigError);
    CHECK_THROWS_AS(load_scenario_spec("/nonexistent/spec.json"), ConfigError);
  }

  TEST_CASE("spec round trip") {
    auto s = parse_scenario_spec(Json{{"family", "graph_decay"}, {"ks", {1, 3, 9}}, {"M", 1.5},
                                      {"gauge", {{"kind", "power"}, {"h0", 0.1}, {"param", 0.5}}}});
    auto again = parse_scenario_spec(to_json(s));
    CHECK(dump(to_json(again)) == dump(to_json(s)));
  }

  TEST_CASE("spearman ranks") {
    CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
    CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
    CHECK(spearman({1, 2, 3}, {5, 5, 5}) == 0.0);
    CHECK(spearman({1, 2, 2, 3}, {1, 2, 3, 4}) == doctest::Approx(0.9486832980505138));
    CHECK_THROWS_AS(spearman({1, 2}, {1}), InputError);
  }

  TEST_CASE("graph_decay run is consistent") {
    auto r = run_scenario(spec_for("graph_decay", {1, 2, 4, 8, 16, 32, 64}));
    CHECK(r.flags.hausdorff);
    CHECK(r.flags.mass);
    CHECK(r.flags.energy);
    CHECK(r.flags.strcon);
    CHECK(r.conclusion);
    CHECK(r.verdict == "consistent");
    CHECK(r.bl_method == "lp");
    CHECK(r.spearman == doctest::Approx(1.0));
    CHECK(r.rows.back().bl < 0.02);
    CHECK(std::abs(r.rows.back().measure - 1.0) < 0.01);
  }

  TEST_CASE("zigzag run fails the mass hypothesis") {
    auto r = run_scenario(spec_for("zigzag", {1, 4, 16, 64}));
    CHECK(r.flags.hausdorff);
    CHECK_FALSE(r.flags.mass);
    CHECK(r.flags.strcon);
    CHECK(r.verdict == "hypothesis_failure");
    for (const auto& row : r.rows) CHECK(row.measure == doctest::Approx(std::sqrt(2.0)));
  }

  TEST_CASE("escape run is inconclusive") {
    auto r = run_scenario(spec_for("escape", {1, 2, 4}));
    CHECK_FALSE(r.flags.hausdorff);
    CHECK(r.verdict == "inconclusive");
  }

  TEST_CASE("reports are deterministic") {
    auto s = spec_for("ycone_approx", {1, 2, 4, 8});
    const std::string a = dump(to_json(run_scenario(s)));
    const std::string b = dump(to_json(run_scenario(s)));
    CHECK(a == b);
    auto r = run_scenario(s);
    CHECK(to_csv(r) == to_csv(run_scenario(s)));
    CHECK(strcon_csv(r.strcon).rfind("k,r,value,flag\n", 0) == 0);
  }

  TEST_CASE("warnings") {
    Json j{{"family", "graph_decay"}, {"ks", {1, 2}}, {"bl_target", 1e-6}};
    auto r = run_scenario(parse_scenario_spec(j));
    bool found = false;
    for (const auto& w : r.warnings) found = found || w.find("floor") != std::string::npos;
    CHECK(found);
    auto cloud = run_scenario(spec_for("cantor4", {1, 2}));
    CHECK_FALSE(cloud.strcon_applicable);
    CHECK(cloud.bl_method == "dictionary");
    CHECK_FALSE(cloud.warnings.empty());
  }
}

TEST_SUITE("io") {
  TEST_CASE("set and varifold documents round trip") {
    auto e = scenario_sequence("zigzag", 3, 12);
    auto back = simplicial_set_from_json(to_json(e));
    CHECK(dump(to_json(back)) == dump(to_json(e)));
    auto v = var_of_set(e, 2);
    auto vb = varifold_from_json(to_json(v));
    REQUIRE(vb.size() == v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK((vb.atoms()[i].position - v.atoms()[i].position).norm() == 0.0);
      CHECK(grassmann_distance(vb.atoms()[i].plane, v.atoms()[i].plane) < 1e-12);
      CHECK(vb.atoms()[i].mass == v.atoms()[i].mass);
    }
    auto c = scenario_cloud("cantor4", 2);
    auto cb = point_cloud_from_json(to_json(c));
    CHECK(cb.points.size() == c.points.size());
    CHECK(varifold_or_set_from_json(to_json(c)).size() == 16 * c.points.size());
    CHECK(varifold_or_set_from_json(to_json(e)).size() == e.size());
  }

  TEST_CASE("malformed documents") {
    CHECK_THROWS_AS(simplicial_set_from_json(Json{{"type", "simplicial_set"}}), ConfigError);
    CHECK_THROWS_AS(simplicial_set_from_json(Json::parse(R"({"schema":1,"type":"simplicial_set","ambient_dim":2,"dim":1,
      "vertices":[[0,0],[1,0]],"simplices":[[0,5]]})")),
                    ConfigError);
    CHECK_THROWS_AS(sampled_set_from_json(Json{{"schema", 1}, {"type", "teapot"}}), ConfigError);
    CHECK_THROWS_AS(plane_from_json(Json::parse("[[1,0],[2,0]]")), ConfigError);
  }
}
