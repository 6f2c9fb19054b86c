// Acceptance run: one PASS/FAIL line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "varifold_lab/integrands.hpp"
#include "varifold_lab/lab.hpp"
#include "varifold_lab/metrics.hpp"
#include "varifold_lab/quasimin.hpp"
#include "varifold_lab/scenarios.hpp"

using namespace vlab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Mat gaussian(int n, int m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat a(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = g(rng);
  return a;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

ScenarioSpec graph_spec(const std::string& integrand) {
  return parse_scenario_spec(
      Json{{"family", "graph_decay"}, {"ks", {1, 2, 4, 8, 16, 32, 64}}, {"resolution", 256}, {"integrand", integrand}});
}

// 1. Grassmannian identities
void grassmann_suite(Outcome& o) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> dim(2, 5);
  double worst = 0.0, worst_jac = -1e300;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = dim(rng);
    const int m = (trial % 2 == 1 && n > 2) ? 2 : 1;
    Plane p(gaussian(n, m, rng)), q(gaussian(n, m, rng));
    const double d = grassmann_distance(p, q);
    worst = std::max(worst, std::abs(d - oracle::grassmann_sup(p.frame(), q.frame(), 10000)));
    const double j = projection_jacobian(p, q);
    worst_jac = std::max({worst_jac, j * j - (1.0 - d * d), d * d - 2.0 * (1.0 - j)});
  }
  o.require(worst <= 1e-3, "distance vs brute-force sup");
  o.require(worst_jac <= 1e-9, "Jacobian inequalities");
  o.detail << "max |d - sup| = " << worst << ", max Jacobian violation = " << worst_jac;
}

// 2. Projected mass identity and upper bound
void projected_mass_suite(Outcome& o) {
  const auto line = SimplicialSet::segment(vec2(-3, 0), vec2(3, 0), 5);
  const double w1 = projected_mass(line, vec2(0.2, 0), 0.7, Plane::coordinate(2, {0}));
  const auto plane = surface_graph(-2, -2, 4, 6, [](double, double) { return 0.0; });
  Vec x3(3);
  x3 << 0.1, -0.3, 0.0;
  const double w2 = projected_mass(plane, x3, 0.6, Plane::coordinate(3, {0, 1}));
  o.require(std::abs(w1 - 2.0) <= 1e-3, "line identity");
  o.require(std::abs(w2 - M_PI) <= 1e-3, "plane identity");

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = -1e300;
  for (int trial = 0; trial < 200; ++trial) {
    const double r = 0.1 + 0.9 * (0.5 + 0.5 * u(rng));
    if (trial % 2 == 0) {
      std::vector<Vec> pts;
      for (int i = 0; i < 12; ++i) pts.push_back(vec2(u(rng), u(rng)));
      auto e = SimplicialSet::polyline(pts);
      const Vec x = vec2(0.5 * u(rng), 0.5 * u(rng));
      Plane t(gaussian(2, 1, rng));
      worst = std::max(worst, projected_mass(e, x, r, t) - measure(restrict(e, Ball(x, r))) / r);
    } else {
      const double a = 3 * u(rng), b = 3 * u(rng), c = 0.5 * u(rng);
      auto e = surface_graph(-1, -1, 2, 6, [=](double s, double t) { return c * std::sin(a * s + b * t); });
      Vec x(3);
      x << 0.5 * u(rng), 0.5 * u(rng), 0.2 * u(rng);
      Plane t(gaussian(3, 2, rng));
      worst = std::max(worst, projected_mass(e, x, r, t) - measure(restrict(e, Ball(x, r))) / (r * r));
    }
  }
  o.require(worst <= 1e-9, "projection bound");
  o.detail << "line " << w1 << ", plane " << w2 << ", max excess over r^-m measure = " << worst;
}

// 3 and 6 share the graph_decay check
void positive_scenario(Outcome& o, const ConvergenceReport& r, bool report_energy) {
  const auto& last = r.rows.back();
  double d_last = 0.0, d_first = 0.0;
  for (double d : last.hausdorff) d_last = std::max(d_last, d);
  for (double d : r.rows.front().hausdorff) d_first = std::max(d_first, d);
  std::vector<double> bl;
  for (const auto& row : r.rows) bl.push_back(row.bl);
  o.require(r.flags.hausdorff && d_last < d_first, "Hausdorff convergence");
  o.require(std::abs(last.measure - 1.0) < 0.01, "mass at k=64");
  o.require(r.strcon.verdict == StrConVerdict::Holds, "tangent filling");
  o.require(strictly_decreasing(bl), "bl decreasing");
  o.require(last.bl < 0.02, "final bl");
  o.require(last.atoms >= 256, "atom count");
  o.detail << "max d_{x,r} " << d_first << " -> " << d_last << ", measure " << last.measure << ", StrCon "
           << to_string(r.strcon.verdict) << ", bl " << bl.front() << " -> " << last.bl << " (" << last.atoms
           << " atoms)";
  if (report_energy) o.detail << ", energy " << last.energy << " vs " << r.limit_energy;
}

void graph_decay_suite(Outcome& o) { positive_scenario(o, run_scenario(graph_spec("area")), false); }

// 4. zigzag: Hausdorff convergence without varifold convergence
void zigzag_suite(Outcome& o) {
  const Vec x = vec2(0.5, 0);
  const auto seg = scenario_limit("segment");
  const auto segv = var_of_set(seg, 1);
  const auto domain = family_info("zigzag").domain;
  std::vector<double> ds;
  double min_bl = 1e300;
  bool measure_ok = true;
  for (int k : {1, 2, 4, 8, 16, 32, 64}) {
    const auto z = scenario_sequence("zigzag", k);
    measure_ok = measure_ok && std::abs(measure(z) - std::sqrt(2.0)) < 1e-9;
    ds.push_back(hausdorff_local(SampledSet(z), SampledSet(seg), x, 0.5).value);
    if (k >= 4) min_bl = std::min(min_bl, bl_distance(var_of_set(z, 1), segv, BLMethod::Dictionary, domain).value);
  }
  o.require(strictly_decreasing(ds) && ds.back() < 0.1, "Hausdorff convergence");
  o.require(measure_ok, "measure sqrt 2");
  o.require(min_bl >= 0.25, "dictionary lower bound");
  o.detail << "d_{x,r} " << ds.front() << " -> " << ds.back() << ", measure sqrt 2 for all k, min dictionary bl (k>=4) = "
           << min_bl;
}

// 5. densities
void density_suite(Outcome& o) {
  const std::vector<double> radii{0.2, 0.1, 0.05};
  double worst_flat = 0.0, worst_y = 0.0;
  auto seg = var_of_set(scenario_limit("segment", 4096), 1);
  for (double q : density_report(seg, vec2(0.5, 0), radii).ratios) worst_flat = std::max(worst_flat, std::abs(q - 1));
  auto plane = var_of_set(surface_graph(-1, -1, 2, 64, [](double, double) { return 0.0; }), 9);
  Vec x3(3);
  x3 << 0.013, -0.021, 0.0;
  for (double q : density_report(plane, x3, radii).ratios) worst_flat = std::max(worst_flat, std::abs(q - 1));
  auto y = var_of_set(y_cone(vec2(0, 0), 2048), 1);
  for (double q : density_report(y, vec2(0, 0), radii).ratios) worst_y = std::max(worst_y, std::abs(q - 1.5));
  o.require(worst_flat <= 0.02, "segment/plane density");
  o.require(worst_y <= 0.03, "Y-cone vertex density");
  o.detail << "max |ratio - 1| = " << worst_flat << ", max |ratio - 1.5| at the vertex = " << worst_y;
}

// 6. anisotropic energies
void energy_suite(Outcome& o) {
  auto elliptic = ellipticity_scan(make_integrand("aniso_quadratic", 2, 1), vec2(0.5, 0), std::nullopt);
  o.require(elliptic.certificates == 0 && elliptic.min_margin > 0.0 && elliptic.min_elliptic_margin >= -1e-12,
            "elliptic audit");
  auto r = run_scenario(graph_spec("aniso_quadratic"));
  const double gap = std::abs(r.rows.back().energy - r.limit_energy);
  o.require(gap <= 0.01, "energy convergence");
  positive_scenario(o, r, true);
  auto bad = ellipticity_scan(make_integrand("aniso_nonelliptic", 2, 1), vec2(0.5, 0), std::nullopt);
  o.require(bad.certificates >= 1, "nonelliptic certificate");
  o.detail << "; audit min margin " << elliptic.min_margin << " (elliptic " << elliptic.min_elliptic_margin
           << "), nonelliptic certificates " << bad.certificates << " (min margin " << bad.min_margin << ")";
}

// 7. QM audits
void qm_suite(Outcome& o) {
  const auto zero = GaugeFunction::constant(0.0);
  auto seg = qm_audit(scenario_limit("segment"), 1.0, zero, family_info("segment").domain);
  auto y = qm_audit(scenario_limit("ycone"), 1.0, zero, family_info("ycone").domain);
  const auto zig = scenario_sequence("zigzag", 4, 64);
  const auto domain = family_info("zigzag").domain;
  auto z1 = qm_audit(zig, 1.0, zero, domain);
  auto z2 = qm_audit(zig, 2.0, zero, domain);
  o.require(seg.min_gap >= -1e-9, "segment");
  o.require(y.min_gap >= -1e-9, "Y cone");
  o.require(z1.min_gap < -1e-9, "zigzag M=1 fails");
  o.require(z2.min_gap >= -1e-9, "zigzag M=2 passes");

  bool monotone = true;
  const std::vector<double> Ms{1.0, 1.25, 1.5, 2.0, 3.0};
  const std::vector<double> hs{0.0, 0.01, 0.1, 1.0};
  for (const Vec& c : {vec2(0.5, 0), vec2(0.35, 0.05), vec2(0.6, 0)}) {
    const Ball b(c, 0.2);
    for (const auto& name : deformation_names()) {
      const auto d = make_deformation(name, zig, b);
      for (double h : hs) {
        double prev = -INFINITY;
        for (double M : Ms) {
          const double g = qm_gap(zig, M, GaugeFunction::constant(h), d, domain);
          monotone = monotone && g >= prev;
          prev = g;
        }
      }
      for (double M : Ms) {
        double prev = -INFINITY;
        for (double h : hs) {
          const double g = qm_gap(zig, M, GaugeFunction::constant(h), d, domain);
          monotone = monotone && g >= prev;
          prev = g;
        }
      }
    }
  }
  o.require(monotone, "monotone in M and h");
  o.detail << "segment " << seg.min_gap << ", Y cone " << y.min_gap << ", zigzag M=1 " << z1.min_gap << " ("
           << z1.worst_deformation << "), M=2 " << z2.min_gap;
}

// 8. BL metric sanity
void bl_suite(Outcome& o) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1, 1), mass(0.05, 1.0);
  std::uniform_int_distribution<int> count(1, 6);
  auto random_v = [&]() {
    std::vector<Atom> atoms;
    const int k = count(rng);
    for (int i = 0; i < k; ++i) atoms.push_back({vec2(u(rng), u(rng)), Plane(gaussian(2, 1, rng)), mass(rng)});
    return DiscreteVarifold(2, 1, atoms);
  };
  double sym = 0.0, tri = -1e300, ident = 0.0, closed = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_v(), b = random_v(), c = random_v();
    const double ab = bl_distance(a, b, BLMethod::ExactLP).value;
    sym = std::max(sym, std::abs(ab - bl_distance(b, a, BLMethod::ExactLP).value));
    tri = std::max(tri, ab - bl_distance(a, c, BLMethod::ExactLP).value - bl_distance(c, b, BLMethod::ExactLP).value);
    ident = std::max(ident, bl_distance(a, a, BLMethod::ExactLP).value);

    const Vec x = vec2(u(rng), u(rng)), y = vec2(u(rng), u(rng));
    const Plane s(gaussian(2, 1, rng)), t(gaussian(2, 1, rng));
    auto one = [](const Vec& p, const Plane& q) { return DiscreteVarifold(2, 1, {{p, q, 1.0}}); };
    closed = std::max(closed, std::abs(bl_distance(one(x, t), one(y, t), BLMethod::ExactLP).value -
                                       std::min(2.0, (x - y).norm())));
    closed = std::max(closed, std::abs(bl_distance(one(x, s), one(x, t), BLMethod::ExactLP).value -
                                       grassmann_distance(s, t)));
  }
  o.require(sym <= 1e-7, "symmetry");
  o.require(tri <= 1e-7, "triangle inequality");
  o.require(ident <= 1e-7, "identity");
  o.require(closed <= 1e-7, "two-atom closed forms");
  o.detail << "asymmetry " << sym << ", triangle excess " << tri << ", self-distance " << ident
           << ", closed-form error " << closed;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    std::function<void(Outcome&)> run;
    double budget_s;  // 0: no runtime bound
  };
  const std::vector<Criterion> criteria{
      {1, "Grassmannian identities", grassmann_suite, 10.0},
      {2, "projected-mass identity and bound", projected_mass_suite, 0.0},
      {3, "graph_decay: all hypotheses and BL convergence", graph_decay_suite, 60.0},
      {4, "zigzag: Hausdorff convergence without varifold convergence", zigzag_suite, 0.0},
      {5, "densities of segment, plane and Y-cone vertex", density_suite, 0.0},
      {6, "anisotropic energy convergence and ellipticity audits", energy_suite, 0.0},
      {7, "quasiminimality audits", qm_suite, 0.0},
      {8, "bounded-Lipschitz metric sanity", bl_suite, 0.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      o.pass = false;
      o.detail << " [over the " << c.budget_s << " s budget]";
    }
    if (!o.pass) ++failures;
    std::printf("[%s] criterion %d: %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
