// Command-line front end. Reports go to standard output (or --json/--csv
// files), diagnostics to standard error. Exit codes: 0 success, 1 internal
// failure, 2 configuration or input error, 3 warning under --strict.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "varifold_lab/errors.hpp"
#include "varifold_lab/integrands.hpp"
#include "varifold_lab/io.hpp"
#include "varifold_lab/lab.hpp"
#include "varifold_lab/metrics.hpp"
#include "varifold_lab/quasimin.hpp"
#include "varifold_lab/scenarios.hpp"

using namespace vlab;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitWarning = 3;

Vec parse_vec(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("cannot read '" + text + "' as a comma-separated vector");
    }
  }
  if (vals.empty()) throw ConfigError("empty vector");
  return Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

// Spanning vectors separated by ';', coordinates by ','.
Plane parse_plane(const std::string& text) {
  std::vector<Vec> cols;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) cols.push_back(parse_vec(item));
  if (cols.empty()) throw ConfigError("empty plane");
  Mat span(cols[0].size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != cols[0].size()) throw ConfigError("plane vectors differ in length");
    span.col(static_cast<Eigen::Index>(c)) = cols[c];
  }
  try {
    return Plane(span);
  } catch (const InputError& e) {
    throw ConfigError(std::string("invalid plane: ") + e.what());
  }
}

std::vector<double> parse_list(const std::string& text) {
  const Vec v = parse_vec(text);
  return std::vector<double>(v.data(), v.data() + v.size());
}

struct Output {
  std::string json_path;
  bool strict = false;
  std::vector<std::string> warnings;

  int finish(const Json& report) const {
    if (json_path.empty()) {
      std::cout << dump(report);
    } else {
      write_text_file(json_path, dump(report));
    }
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    return (strict && !warnings.empty()) ? kExitWarning : 0;
  }
};

Ball domain_of(const Json& doc, const SimplicialSet& e) {
  if (doc.contains("domain")) {
    const Json& d = doc.at("domain");
    return Ball(vec_from_json(d.at("center")), d.at("radius").get<double>());
  }
  Vec lo = e.vertices().front(), hi = lo;
  for (const auto& v : e.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return Ball(0.5 * (lo + hi), std::max(0.5 * (hi - lo).norm(), 1e-9));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"varifold_lab: discrete varifolds, convergence metrics and hypothesis audits"};
  app.require_subcommand(1);
  Output out;

  // run
  auto* run = app.add_subcommand("run", "Run a scenario spec and emit its convergence report");
  std::string spec_path, csv_path, strcon_path;
  run->add_option("spec", spec_path, "Scenario spec (JSON)")->required();
  run->add_option("--json", out.json_path, "Write the JSON report here instead of standard output");
  run->add_option("--csv", csv_path, "Write the per-k row table here");
  run->add_option("--strcon-csv", strcon_path, "Write the tangent-filling table here");
  run->add_flag("--strict", out.strict, "Exit 3 when the report carries resolution warnings");

  // distance
  auto* dist = app.add_subcommand("distance", "Local Hausdorff or bounded-Lipschitz distance between two files");
  std::string kind = "hausdorff", file_a, file_b, center_text, method = "lp";
  double radius = 1.0;
  int samples = 1000;
  dist->add_option("--kind", kind, "hausdorff or bl")->check(CLI::IsMember({"hausdorff", "bl"}));
  dist->add_option("a", file_a, "First set or varifold (JSON)")->required();
  dist->add_option("b", file_b, "Second set or varifold (JSON)")->required();
  dist->add_option("--center", center_text, "Ball centre for hausdorff, e.g. 0.5,0");
  dist->add_option("--radius", radius, "Ball radius for hausdorff");
  dist->add_option("--samples", samples, "Minimum samples per sup");
  dist->add_option("--method", method, "bl method: lp or dictionary")->check(CLI::IsMember({"lp", "dictionary"}));
  dist->add_option("--json", out.json_path, "Write the JSON report here");
  dist->add_flag("--strict", out.strict, "Exit 3 on resolution warnings");

  // density
  auto* dens = app.add_subcommand("density", "Density ratios of a varifold over a radius schedule");
  std::string var_path, radii_text;
  dens->add_option("varifold", var_path, "Varifold or set (JSON)")->required();
  dens->add_option("--center", center_text, "Centre, e.g. 0,0")->required();
  dens->add_option("--radii", radii_text, "Decreasing radii, e.g. 0.2,0.1,0.05")->required();
  dens->add_option("--json", out.json_path, "Write the JSON report here");
  dens->add_flag("--strict", out.strict, "Exit 3 when the smallest radius is under-resolved");

  // audit-ellipticity
  auto* ell = app.add_subcommand("audit-ellipticity", "Semi-ellipticity margins of an integrand");
  std::string integrand, competitors = "registry", plane_text, c_grid_text;
  int ambient = 2, dim = 1, haar = 16;
  std::uint64_t seed = 11;
  ell->add_option("integrand", integrand, "Registry name or tabulated integrand (JSON)")->required();
  ell->add_option("--competitors", competitors, "'registry' or a JSON file of competitors for --plane");
  ell->add_option("--ambient-dim", ambient, "n for a registry integrand");
  ell->add_option("--dim", dim, "m for a registry integrand");
  ell->add_option("--center", center_text, "Point x at which F is frozen (default 0)");
  ell->add_option("--plane", plane_text, "Plane T, spanning vectors separated by ';'");
  ell->add_option("--haar", haar, "Extra Haar planes scanned with the registry");
  ell->add_option("--seed", seed, "Seed of the Haar planes");
  ell->add_option("--c-grid", c_grid_text, "Candidate ellipticity constants, e.g. 0,0.5,1");
  ell->add_option("--json", out.json_path, "Write the JSON report here");
  ell->add_flag("--strict", out.strict, "Accepted for uniformity; audits raise no warnings");

  // audit-qm
  auto* qm = app.add_subcommand("audit-qm", "Quasiminimality gaps over the deformation registry");
  qm->set_help_flag("--help", "Print this help message and exit");
  std::string set_path, gauge_kind = "constant", domain_center;
  double M = 1.0, h0 = 0.0, gauge_param = 0.0, domain_radius = 0.0;
  qm->add_option("set", set_path, "Simplicial set (JSON)")->required();
  qm->add_option("--M", M, "Constant M >= 1");
  qm->add_option("--h", h0, "Gauge level h0");
  qm->add_option("--gauge", gauge_kind, "constant, step or power")->check(CLI::IsMember({"constant", "step", "power"}));
  qm->add_option("--gauge-param", gauge_param, "delta (step) or alpha (power)");
  qm->add_option("--domain-center", domain_center, "Centre of U (default: from the file or the bounding ball)");
  qm->add_option("--domain-radius", domain_radius, "Radius of U");
  qm->add_option("--json", out.json_path, "Write the JSON report here");
  qm->add_flag("--strict", out.strict, "Accepted for uniformity; audits raise no warnings");

  // projected-mass
  auto* pm = app.add_subcommand("projected-mass", "Measure of the projected blow-up of E near x");
  pm->add_option("set", set_path, "Simplicial set (JSON)")->required();
  pm->add_option("--center", center_text, "Centre x")->required();
  pm->add_option("--radius", radius, "Radius r")->required();
  pm->add_option("--plane", plane_text, "Plane T, spanning vectors separated by ';'")->required();
  pm->add_option("--json", out.json_path, "Write the JSON report here");
  pm->add_flag("--strict", out.strict, "Exit 3 when the ball clip error bound exceeds 1e-3");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a member (or the limit) of a built-in family as JSON");
  std::string family;
  int k = 1, resolution = 256;
  bool limit = false;
  gen->add_option("family", family, "Family name")->required();
  gen->add_option("--k", k, "Index k (level for point clouds)");
  gen->add_option("--resolution", resolution, "Segments per unit length / grid squares");
  gen->add_flag("--limit", limit, "Write the documented limit instead");
  gen->add_option("--json", out.json_path, "Write here instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      const ScenarioSpec spec = load_scenario_spec(spec_path);
      const ConvergenceReport rep = run_scenario(spec);
      if (out.json_path.empty()) out.json_path = spec.json_output;
      const std::string csv = csv_path.empty() ? spec.csv_output : csv_path;
      if (!csv.empty()) write_text_file(csv, to_csv(rep));
      if (!strcon_path.empty() && rep.strcon_applicable) write_text_file(strcon_path, strcon_csv(rep.strcon));
      out.warnings = rep.warnings;
      return out.finish(to_json(rep));
    }
    if (*dist) {
      const Json a = read_json_file(file_a);
      const Json b = read_json_file(file_b);
      Json rep;
      rep["schema"] = kSchemaVersion;
      rep["kind"] = kind;
      if (kind == "hausdorff") {
        const SampledSet sa = sampled_set_from_json(a);
        const SampledSet sb = sampled_set_from_json(b);
        const int n = std::visit([](const auto& s) {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, SimplicialSet>) {
            return s.ambient_dim();
          } else {
            return s.ambient_dim;
          }
        }, sa);
        const Vec c = center_text.empty() ? Vec(Vec::Zero(n)) : parse_vec(center_text);
        const HausdorffReport h = hausdorff_local(sa, sb, c, radius, samples);
        rep["center"] = to_json(c);
        rep["radius"] = radius;
        rep["value"] = h.value;
        rep["resolution"] = h.resolution;
        rep["samples"] = h.samples;
        if (h.resolution > 0.01) out.warnings.push_back("Hausdorff sampling resolution exceeds 0.01");
      } else {
        const BLDistanceReport r =
            bl_distance(varifold_or_set_from_json(a), varifold_or_set_from_json(b), bl_method_from_string(method));
        rep["method"] = to_string(r.method);
        rep["value"] = r.value;
        if (!r.witness.empty()) rep["witness"] = r.witness;
        if (r.method == BLMethod::Dictionary) out.warnings.push_back("dictionary value is a lower bound");
      }
      return out.finish(rep);
    }
    if (*dens) {
      const DiscreteVarifold v = varifold_or_set_from_json(read_json_file(var_path));
      const DensityReport d = density_report(v, parse_vec(center_text), parse_list(radii_text));
      Json rep;
      rep["schema"] = kSchemaVersion;
      rep["center"] = to_json(d.center);
      rep["radii"] = d.radii;
      rep["ratios"] = d.ratios;
      rep["atom_counts"] = d.atom_counts;
      rep["density"] = d.density;
      rep["reliable_radius"] = d.reliable_radius;
      rep["smallest_radius_reliable"] = d.smallest_radius_reliable;
      if (!d.smallest_radius_reliable) out.warnings.push_back("smallest radius holds too few atoms");
      return out.finish(rep);
    }
    if (*ell) {
      const bool from_file = integrand.size() > 5 && integrand.substr(integrand.size() - 5) == ".json";
      Integrand F = make_integrand("area", 2, 1);
      if (from_file) {
        const Json tj = read_json_file(integrand);
        IntegrandTable tab;
        tab.name = tj.value("name", std::string("tabulated"));
        tab.ambient_dim = tj.at("ambient_dim").get<int>();
        tab.dim = tj.at("dim").get<int>();
        tab.lo = vec_from_json(tj.at("lo"));
        tab.hi = vec_from_json(tj.at("hi"));
        tab.counts = tj.at("counts").get<std::vector<int>>();
        tab.angle_count = tj.value("angle_count", 0);
        if (tj.contains("planes")) {
          for (const auto& p : tj.at("planes")) tab.planes.push_back(plane_from_json(p));
        }
        tab.values = tj.at("values").get<std::vector<double>>();
        F = tabulated_integrand(tab);
      } else {
        F = make_integrand(integrand, ambient, dim);
      }
      const Vec x = center_text.empty() ? Vec(Vec::Zero(F.ambient_dim())) : parse_vec(center_text);
      std::optional<Plane> t;
      if (!plane_text.empty()) t = parse_plane(plane_text);
      EllipticityReport rep;
      if (competitors == "registry") {
        rep = ellipticity_scan(F, x, t, haar, seed);
      } else {
        if (!t) throw ConfigError("--plane is required with a competitor file");
        std::vector<Competitor> list;
        for (const auto& c : read_json_file(competitors).at("competitors")) {
          list.push_back({c.at("id").get<std::string>(), simplicial_set_from_json(c.at("set"))});
        }
        rep = semi_ellipticity_audit(F, x, *t, list);
      }
      Json j;
      j["schema"] = kSchemaVersion;
      j["integrand"] = rep.integrand;
      j["center"] = to_json(rep.x);
      Json planes = Json::array();
      for (const auto& p : rep.planes) planes.push_back(to_json(p));
      j["planes"] = std::move(planes);
      Json rows = Json::array();
      for (const auto& r : rep.rows) {
        Json rj;
        rj["competitor"] = r.competitor;
        rj["plane"] = r.plane_index;
        rj["measure_s"] = r.measure_s;
        rj["measure_d"] = r.measure_d;
        rj["phi_s"] = r.phi_s;
        rj["phi_d"] = r.phi_d;
        rj["margin"] = r.margin;
        if (std::isnan(r.elliptic_margin)) {
          rj["elliptic_margin"] = nullptr;
        } else {
          rj["elliptic_margin"] = r.elliptic_margin;
        }
        rj["certificate"] = r.certificate;
        rows.push_back(std::move(rj));
      }
      j["rows"] = std::move(rows);
      j["min_margin"] = rep.min_margin;
      if (std::isnan(rep.min_elliptic_margin)) {
        j["min_elliptic_margin"] = nullptr;
      } else {
        j["min_elliptic_margin"] = rep.min_elliptic_margin;
      }
      j["certificates"] = rep.certificates;
      if (!c_grid_text.empty()) {
        const auto best = best_ellipticity_constant(rep, parse_list(c_grid_text));
        if (best) {
          j["best_c"] = *best;
        } else {
          j["best_c"] = nullptr;
        }
      }
      return out.finish(j);
    }
    if (*qm) {
      const Json doc = read_json_file(set_path);
      const SimplicialSet e = simplicial_set_from_json(doc);
      if (e.empty()) throw ConfigError("audit-qm needs a nonempty set");
      Ball domain = domain_of(doc, e);
      if (!domain_center.empty()) domain.center = parse_vec(domain_center);
      if (domain_radius > 0.0) domain.radius = domain_radius;
      if (!(M >= 1.0)) throw ConfigError("M must be at least 1");
      const GaugeFunction h = make_gauge({gauge_kind, h0, gauge_param});
      const QMAuditReport rep = qm_audit(e, M, h, domain);
      Json j;
      j["schema"] = kSchemaVersion;
      j["M"] = rep.M;
      j["gauge"] = rep.gauge;
      j["domain"] = Json{{"center", to_json(domain.center)}, {"radius", domain.radius}};
      j["balls_x_deformations"] = rep.rows.size();
      j["min_gap"] = rep.min_gap;
      if (!rep.rows.empty()) {
        j["worst"] = Json{{"deformation", rep.worst_deformation},
                          {"center", to_json(rep.worst_center)},
                          {"radius", rep.worst_radius}};
      }
      j["passed"] = rep.passed;
      return out.finish(j);
    }
    if (*pm) {
      const SimplicialSet e = simplicial_set_from_json(read_json_file(set_path));
      const Vec c = parse_vec(center_text);
      const Plane t = parse_plane(plane_text);
      const double value = projected_mass(e, c, radius, t);
      const double clip = restrict(e, Ball(c, radius)).diagnostics().area_error_bound / std::pow(radius, e.dim());
      Json j;
      j["schema"] = kSchemaVersion;
      j["center"] = to_json(c);
      j["radius"] = radius;
      j["plane"] = to_json(t);
      j["value"] = value;
      j["omega"] = unit_ball_volume(e.dim());
      j["clip_error_bound"] = clip;
      if (clip > 1e-3) out.warnings.push_back("ball clip error bound exceeds 1e-3");
      return out.finish(j);
    }
    if (*gen) {
      const FamilyInfo& info = family_info(family);
      Json j;
      if (info.point_cloud) {
        j = to_json(scenario_cloud(family, limit ? 6 : k));
      } else {
        j = to_json(limit ? scenario_limit(family, resolution) : scenario_sequence(family, k, resolution));
      }
      j["domain"] = Json{{"center", to_json(info.domain.center)}, {"radius", info.domain.radius}};
      return out.finish(j);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
