#include "varifold_lab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "varifold_lab/errors.hpp"
#include "varifold_lab/integrands.hpp"
#include "varifold_lab/parallel.hpp"
#include "varifold_lab/scenarios.hpp"

namespace vlab {

namespace {

constexpr std::size_t kMaxLpAtoms = 600;
constexpr double kHausdorffTol = 0.05;
constexpr double kHausdorffDecay = 0.25;
constexpr double kRelativeTol = 0.01;
constexpr double kMinFloor = 1e-3;
constexpr double kResolutionWarn = 0.01;

template <class T>
T get_as(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

Json ball_json(const Ball& b) {
  Json j;
  j["center"] = to_json(b.center);
  j["radius"] = b.radius;
  return j;
}

Ball ball_from(const Json& j) {
  if (!j.is_object() || !j.contains("center") || !j.contains("radius")) {
    throw ConfigError("a ball needs 'center' and 'radius'");
  }
  const double r = get_as<double>(j, "radius");
  if (!(r > 0.0)) throw ConfigError("ball radius must be positive");
  return Ball(vec_from_json(j.at("center")), r);
}

// Top-m eigenvectors of the mean tangent projector of `e` near x.
Plane principal_plane(const SimplicialSet& e, const Vec& x, double r) {
  const SimplicialSet local = restrict(e, Ball(x, r));
  const int n = e.ambient_dim();
  const int m = e.dim();
  if (local.empty()) {
    std::vector<int> axes(static_cast<std::size_t>(m));
    std::iota(axes.begin(), axes.end(), 0);
    return Plane::coordinate(n, axes);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(mean_projector(var_of_set(local, 1)));
  return Plane(es.eigenvectors().rightCols(m));
}

BLMethod choose_method(const std::string& requested, std::size_t a, std::size_t b) {
  if (requested == "auto") return (a <= kMaxLpAtoms && b <= kMaxLpAtoms) ? BLMethod::ExactLP : BLMethod::Dictionary;
  return bl_method_from_string(requested);
}

}  // namespace

GaugeFunction make_gauge(const GaugeSpec& g) {
  try {
    if (g.kind == "constant") return GaugeFunction::constant(g.h0);
    if (g.kind == "step") return GaugeFunction::step(g.h0, g.param);
    if (g.kind == "power") return GaugeFunction::power(g.h0, g.param);
  } catch (const InputError& e) {
    throw ConfigError(std::string("invalid gauge: ") + e.what());
  }
  throw ConfigError("unknown gauge kind '" + g.kind + "'");
}

ScenarioSpec parse_scenario_spec(const Json& j) {
  if (!j.is_object()) throw ConfigError("a scenario spec is a JSON object");
  static const std::set<std::string> known{"schema", "name", "family", "ks", "k_max", "resolution", "domain",
                                           "base_point", "radii", "tangent", "integrand", "M", "gauge", "seed",
                                           "bl_method", "quadrature", "hausdorff_samples", "limit_level",
                                           "bl_target", "output"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown spec field '" + key + "'");
  }
  if (j.contains("schema") && get_as<int>(j, "schema") != kSchemaVersion) {
    throw ConfigError("unsupported spec schema version");
  }
  ScenarioSpec s;
  if (!j.contains("family")) throw ConfigError("spec needs a 'family'");
  s.family = get_as<std::string>(j, "family");
  const FamilyInfo& info = family_info(s.family);
  s.name = j.contains("name") ? get_as<std::string>(j, "name") : s.family;
  if (j.contains("ks") && j.contains("k_max")) throw ConfigError("give either 'ks' or 'k_max', not both");
  if (j.contains("ks")) s.ks = get_as<std::vector<int>>(j, "ks");
  if (j.contains("k_max")) {
    const int k_max = get_as<int>(j, "k_max");
    if (k_max < 1) throw ConfigError("k_max must be at least 1");
    s.ks.clear();
    for (int k = 1; k <= k_max; k *= 2) s.ks.push_back(k);
  }
  if (s.ks.empty()) throw ConfigError("empty k schedule");
  for (std::size_t i = 0; i < s.ks.size(); ++i) {
    if (s.ks[i] < 1) throw ConfigError("k values must be at least 1");
    if (i > 0 && s.ks[i] <= s.ks[i - 1]) throw ConfigError("k schedule must be strictly increasing");
  }
  if (j.contains("resolution")) s.resolution = get_as<int>(j, "resolution");
  if (s.resolution < 1) throw ConfigError("resolution must be at least 1");
  if (j.contains("domain")) s.domain = ball_from(j.at("domain"));
  if (j.contains("base_point")) s.base_point = vec_from_json(j.at("base_point"));
  if (j.contains("radii")) s.radii = get_as<std::vector<double>>(j, "radii");
  for (double r : s.radii) {
    if (!(r > 0.0)) throw ConfigError("radii must be positive");
  }
  if (j.contains("tangent")) s.tangent = plane_from_json(j.at("tangent"));
  if (j.contains("integrand")) s.integrand = get_as<std::string>(j, "integrand");
  if (std::find(integrand_names().begin(), integrand_names().end(), s.integrand) == integrand_names().end()) {
    throw ConfigError("unknown integrand '" + s.integrand + "'");
  }
  if (j.contains("M")) s.M = get_as<double>(j, "M");
  if (!(s.M >= 1.0)) throw ConfigError("M must be at least 1");
  if (j.contains("gauge")) {
    const Json& g = j.at("gauge");
    if (!g.is_object()) throw ConfigError("gauge must be an object");
    if (g.contains("kind")) s.gauge.kind = get_as<std::string>(g, "kind");
    if (g.contains("h0")) s.gauge.h0 = get_as<double>(g, "h0");
    if (g.contains("param")) s.gauge.param = get_as<double>(g, "param");
    make_gauge(s.gauge);
  }
  if (j.contains("seed")) s.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("bl_method")) s.bl_method = get_as<std::string>(j, "bl_method");
  if (s.bl_method != "auto") bl_method_from_string(s.bl_method);
  if (j.contains("quadrature")) s.quadrature = get_as<int>(j, "quadrature");
  if (s.quadrature < 1) throw ConfigError("quadrature must be at least 1");
  if (j.contains("hausdorff_samples")) s.hausdorff_samples = get_as<int>(j, "hausdorff_samples");
  if (s.hausdorff_samples < 1) throw ConfigError("hausdorff_samples must be at least 1");
  if (j.contains("limit_level")) s.limit_level = get_as<int>(j, "limit_level");
  if (j.contains("bl_target")) s.bl_target = get_as<double>(j, "bl_target");
  if (j.contains("output")) {
    const Json& o = j.at("output");
    if (o.contains("json")) s.json_output = get_as<std::string>(o, "json");
    if (o.contains("csv")) s.csv_output = get_as<std::string>(o, "csv");
  }

  const Ball domain = s.domain.value_or(info.domain);
  const Vec x = s.base_point.value_or(info.base_point);
  if (domain.center.size() != info.ambient_dim || x.size() != info.ambient_dim) {
    throw ConfigError("domain and base point must live in R^" + std::to_string(info.ambient_dim));
  }
  if (!((x - domain.center).norm() < domain.radius)) throw ConfigError("base point lies outside the domain");
  if (s.tangent && (s.tangent->ambient_dim() != info.ambient_dim || s.tangent->dim() != info.dim)) {
    throw ConfigError("tangent plane has the wrong dimensions");
  }
  if (info.point_cloud && (s.limit_level < 0 || s.limit_level > 7)) throw ConfigError("limit_level must lie in [0, 7]");
  return s;
}

ScenarioSpec load_scenario_spec(const std::string& path) { return parse_scenario_spec(read_json_file(path)); }

Json to_json(const ScenarioSpec& s) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["name"] = s.name;
  j["family"] = s.family;
  j["ks"] = s.ks;
  j["resolution"] = s.resolution;
  if (s.domain) j["domain"] = ball_json(*s.domain);
  if (s.base_point) j["base_point"] = to_json(*s.base_point);
  if (!s.radii.empty()) j["radii"] = s.radii;
  if (s.tangent) j["tangent"] = to_json(*s.tangent);
  j["integrand"] = s.integrand;
  j["M"] = s.M;
  j["gauge"] = Json{{"kind", s.gauge.kind}, {"h0", s.gauge.h0}, {"param", s.gauge.param}};
  j["seed"] = s.seed;
  j["bl_method"] = s.bl_method;
  j["quadrature"] = s.quadrature;
  j["hausdorff_samples"] = s.hausdorff_samples;
  j["limit_level"] = s.limit_level;
  if (s.bl_target) j["bl_target"] = *s.bl_target;
  return j;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InputError("spearman: length mismatch");
  const std::size_t n = a.size();
  if (n < 2) return 0.0;
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / static_cast<double>(n);
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

ConvergenceReport run_scenario(const ScenarioSpec& spec) {
  const FamilyInfo& info = family_info(spec.family);
  const Integrand F = make_integrand(spec.integrand, info.ambient_dim, info.dim);
  ConvergenceReport rep;
  rep.spec = spec;
  rep.domain = spec.domain.value_or(info.domain);
  rep.base_point = spec.base_point.value_or(info.base_point);
  rep.radii = spec.radii;
  if (rep.radii.empty()) {
    for (double f : {1.0, 0.5, 0.25}) rep.radii.push_back(f * rep.domain.radius);
  }
  std::sort(rep.radii.begin(), rep.radii.end(), std::greater<>());
  rep.radii.erase(std::unique(rep.radii.begin(), rep.radii.end()), rep.radii.end());
  const Vec& x = rep.base_point;
  const std::size_t nr = rep.radii.size();

  // The limit object and its varifold at two quadrature levels.
  std::optional<SimplicialSet> limit_set;
  std::optional<PointCloudSet> limit_cloud;
  DiscreteVarifold limit_var(info.ambient_dim, info.dim);
  DiscreteVarifold limit_fine(info.ambient_dim, info.dim);
  if (info.point_cloud) {
    rep.strcon_applicable = false;
    limit_cloud = scenario_cloud(spec.family, spec.limit_level);
    limit_var = var_of_pointcloud(*limit_cloud, haar_sample(info.ambient_dim, info.dim, 16, spec.seed));
    limit_fine = var_of_pointcloud(*limit_cloud, haar_sample(info.ambient_dim, info.dim, 32, spec.seed + 1));
    rep.limit_measure = limit_cloud->total_mass();
    rep.tangent = Plane::coordinate(info.ambient_dim, {0});
  } else {
    limit_set = scenario_limit(spec.family, spec.resolution);
    limit_var = var_of_set(*limit_set, spec.quadrature);
    limit_fine = var_of_set(*limit_set, 2 * spec.quadrature);
    rep.limit_measure = measure(*limit_set);
    rep.tangent = spec.tangent ? *spec.tangent : principal_plane(*limit_set, x, rep.radii.back());
  }
  rep.limit_energy = phi(F, limit_var);
  rep.limit_atoms = limit_var.size();

  auto var_of_k = [&](int k) {
    if (info.point_cloud) {
      return var_of_pointcloud(scenario_cloud(spec.family, k), haar_sample(info.ambient_dim, info.dim, 16, spec.seed));
    }
    return var_of_set(scenario_sequence(spec.family, k, spec.resolution), spec.quadrature);
  };
  // Method fixed once for the whole schedule from the largest atom count.
  std::size_t max_atoms = limit_var.size();
  for (int k : spec.ks) {
    if (info.point_cloud) {
      max_atoms = std::max(max_atoms, (std::size_t{1} << (2 * std::min(k, 10))) * 16);
    } else {
      max_atoms = std::max(max_atoms, scenario_sequence(spec.family, k, spec.resolution).size() *
                                          static_cast<std::size_t>(spec.quadrature));
    }
  }
  const BLMethod method = choose_method(spec.bl_method, max_atoms, max_atoms);
  rep.bl_method = to_string(method);
  std::optional<Ball> dict_domain;
  if (method == BLMethod::Dictionary) dict_domain = rep.domain;

  const BLDistanceReport floor_rep = bl_distance(limit_var, limit_fine, method, dict_domain);
  rep.bl_floor = std::max(kMinFloor, floor_rep.value);

  rep.rows.resize(spec.ks.size());
  parallel_for(spec.ks.size(), [&](std::size_t i) {
    const int k = spec.ks[i];
    ConvergenceRow row;
    row.k = k;
    SampledSet ek = info.point_cloud ? SampledSet(scenario_cloud(spec.family, k))
                                     : SampledSet(scenario_sequence(spec.family, k, spec.resolution));
    const SampledSet lim = info.point_cloud ? SampledSet(*limit_cloud) : SampledSet(*limit_set);
    for (double r : rep.radii) {
      const HausdorffReport h = hausdorff_local(ek, lim, x, r, spec.hausdorff_samples);
      row.hausdorff.push_back(h.value);
      row.hausdorff_resolution.push_back(h.resolution);
    }
    row.measure = info.point_cloud ? std::get<PointCloudSet>(ek).total_mass() : measure(std::get<SimplicialSet>(ek));
    const DiscreteVarifold vk = var_of_k(k);
    row.atoms = vk.size();
    row.energy = phi(F, vk);
    const BLDistanceReport b = bl_distance(vk, limit_var, method, dict_domain);
    row.bl = b.value;
    row.bl_witness = b.witness;
    rep.rows[i] = std::move(row);
  });

  if (!info.point_cloud) {
    rep.strcon = strcon_check([&](int k) { return scenario_sequence(spec.family, k, spec.resolution); }, x,
                              rep.tangent, rep.radii, spec.ks);
  }

  // Hypothesis flags, from the table only.
  const std::size_t nk = rep.rows.size();
  const std::size_t tail_first = nk - tail_length(nk);
  bool hausdorff_ok = true;
  for (std::size_t ri = 0; ri < nr; ++ri) {
    double largest = 0.0;
    for (const auto& row : rep.rows) largest = std::max(largest, row.hausdorff[ri]);
    const double final_d = rep.rows.back().hausdorff[ri];
    bool tail_monotone = true;
    for (std::size_t i = tail_first + 1; i < nk; ++i) {
      const double slack = rep.rows[i].hausdorff_resolution[ri] + rep.rows[i - 1].hausdorff_resolution[ri];
      tail_monotone = tail_monotone && rep.rows[i].hausdorff[ri] <= rep.rows[i - 1].hausdorff[ri] + slack;
    }
    const bool ok = std::isfinite(final_d) &&
                    (final_d <= kHausdorffTol || (final_d <= kHausdorffDecay * largest && tail_monotone));
    hausdorff_ok = hausdorff_ok && ok;
  }
  rep.flags.hausdorff = hausdorff_ok;
  rep.flags.mass = std::abs(rep.rows.back().measure - rep.limit_measure) <= kRelativeTol * rep.limit_measure;
  rep.flags.energy = std::abs(rep.rows.back().energy - rep.limit_energy) <= kRelativeTol * rep.limit_energy;
  rep.flags.strcon = rep.strcon_applicable && rep.strcon.verdict == StrConVerdict::Holds;

  rep.bl_monotone = true;
  for (std::size_t i = 1; i < nk; ++i) {
    if (rep.rows[i].bl < rep.rows[i - 1].bl) ++rep.bl_decreases;
    rep.bl_monotone = rep.bl_monotone && rep.rows[i].bl <= rep.rows[i - 1].bl + rep.bl_floor;
  }
  rep.conclusion = rep.bl_monotone && rep.rows.back().bl < 3.0 * rep.bl_floor;

  std::vector<double> dsum, bls;
  for (const auto& row : rep.rows) {
    dsum.push_back(std::accumulate(row.hausdorff.begin(), row.hausdorff.end(), 0.0));
    bls.push_back(row.bl);
  }
  rep.spearman = spearman(dsum, bls);

  if (!rep.flags.hausdorff) {
    rep.verdict = "inconclusive";
  } else if (rep.flags.mass && rep.flags.strcon && rep.flags.energy) {
    rep.verdict = rep.conclusion ? "consistent" : "violation";
  } else {
    rep.verdict = "hypothesis_failure";
  }

  if (spec.bl_target && *spec.bl_target < rep.bl_floor) {
    std::ostringstream w;
    w << "requested bl accuracy " << *spec.bl_target << " is below the resolution floor " << rep.bl_floor;
    rep.warnings.push_back(w.str());
  }
  double worst_res = 0.0;
  for (const auto& row : rep.rows) {
    for (double r : row.hausdorff_resolution) worst_res = std::max(worst_res, r);
  }
  if (worst_res > kResolutionWarn) {
    std::ostringstream w;
    w << "Hausdorff sampling resolution " << worst_res << " exceeds " << kResolutionWarn;
    rep.warnings.push_back(w.str());
  }
  if (method == BLMethod::Dictionary) rep.warnings.push_back("bl values are dictionary lower bounds");
  return rep;
}

Json to_json(const ConvergenceReport& r) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["type"] = "convergence_report";
  j["scenario"] = to_json(r.spec);
  j["domain"] = ball_json(r.domain);
  j["base_point"] = to_json(r.base_point);
  j["radii"] = r.radii;
  j["tangent"] = to_json(r.tangent);
  j["bl_method"] = r.bl_method;
  j["limit"] = Json{{"measure", r.limit_measure}, {"energy", r.limit_energy}, {"atoms", r.limit_atoms}};
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json rj;
    rj["k"] = row.k;
    rj["hausdorff"] = row.hausdorff;
    rj["hausdorff_resolution"] = row.hausdorff_resolution;
    rj["measure"] = row.measure;
    rj["energy"] = row.energy;
    rj["bl"] = row.bl;
    if (!row.bl_witness.empty()) rj["bl_witness"] = row.bl_witness;
    rj["atoms"] = row.atoms;
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  Json sc;
  sc["applicable"] = r.strcon_applicable;
  if (r.strcon_applicable) {
    sc["verdict"] = to_string(r.strcon.verdict);
    sc["omega"] = r.strcon.omega;
    sc["tol"] = r.strcon.tol;
    sc["tail"] = r.strcon.tail;
    sc["tail_infimum"] = r.strcon.tail_infimum;
    Json cells = Json::array();
    for (const auto& c : r.strcon.cells) cells.push_back(Json{{"k", c.k}, {"r", c.r}, {"value", c.value}});
    sc["cells"] = std::move(cells);
  }
  j["strcon"] = std::move(sc);
  j["flags"] = Json{{"hausdorff", r.flags.hausdorff},
                    {"mass", r.flags.mass},
                    {"energy", r.flags.energy},
                    {"strcon", r.flags.strcon}};
  j["conclusion"] = Json{{"varifold_convergence", r.conclusion},
                         {"bl_floor", r.bl_floor},
                         {"bl_threshold", 3.0 * r.bl_floor},
                         {"bl_final", r.rows.empty() ? 0.0 : r.rows.back().bl},
                         {"bl_monotone", r.bl_monotone},
                         {"bl_decreases", r.bl_decreases}};
  j["spearman"] = r.spearman;
  j["verdict"] = r.verdict;
  j["warnings"] = r.warnings;
  return j;
}

std::string to_csv(const ConvergenceReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "k,measure,energy,bl";
  for (double rad : r.radii) out << ",d_r" << rad << ",res_r" << rad;
  out << "\n";
  for (const auto& row : r.rows) {
    out << row.k << ',' << row.measure << ',' << row.energy << ',' << row.bl;
    for (std::size_t i = 0; i < row.hausdorff.size(); ++i) {
      out << ',' << row.hausdorff[i] << ',' << row.hausdorff_resolution[i];
    }
    out << "\n";
  }
  return out.str();
}

std::string strcon_csv(const StrConReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "k,r,value,flag\n";
  const double threshold = (1.0 - r.tol) * r.omega;
  for (const auto& c : r.cells) out << c.k << ',' << c.r << ',' << c.value << ',' << (c.value >= threshold ? 1 : 0) << "\n";
  return out.str();
}

}  // namespace vlab
