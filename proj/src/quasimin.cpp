#include "varifold_lab/quasimin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "varifold_lab/errors.hpp"
#include "varifold_lab/parallel.hpp"
#include "varifold_lab/union_measure.hpp"
#include "varifold_lab/varifold.hpp"

namespace vlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMoveTol = 1e-12;
constexpr double kPassTol = 1e-9;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

GaugeFunction::GaugeFunction(Kind k, double h0, double param) : kind_(k), h0_(h0), param_(param) {
  if (!(h0 >= 0.0) || !std::isfinite(h0)) throw InputError("gauge: h0 must be finite and nonnegative");
}

GaugeFunction GaugeFunction::constant(double h0) { return GaugeFunction(Kind::Constant, h0, 0.0); }

GaugeFunction GaugeFunction::step(double h0, double delta) {
  if (!(delta > 0.0)) throw InputError("gauge: step needs delta > 0");
  return GaugeFunction(Kind::Step, h0, delta);
}

GaugeFunction GaugeFunction::power(double h0, double alpha) {
  if (!(alpha > 0.0)) throw InputError("gauge: power needs alpha > 0");
  return GaugeFunction(Kind::Power, h0, alpha);
}

double GaugeFunction::operator()(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return h0_;
    case Kind::Step:
      return t < param_ ? h0_ : kInf;
    case Kind::Power:
      return h0_ * std::pow(t, param_);
  }
  return h0_;
}

double GaugeFunction::at_zero_plus() const { return kind_ == Kind::Power ? 0.0 : h0_; }

std::string GaugeFunction::describe() const {
  switch (kind_) {
    case Kind::Constant:
      return "constant(" + fmt(h0_) + ")";
    case Kind::Step:
      return "step(" + fmt(h0_) + "," + fmt(param_) + ")";
    case Kind::Power:
      return "power(" + fmt(h0_) + "," + fmt(param_) + ")";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Deformations

const std::vector<std::string>& deformation_names() {
  static const std::vector<std::string> names{"identity", "radial_collapse", "tangent_project", "vertex_snap",
                                              "tooth_flatten"};
  return names;
}

namespace {

// Top-m principal directions of E cap B, from a fine quadrature of its
// positions, as a projector. Falls back to the mean tangent projector when
// the positions do not spread (a single atom, say).
Mat principal_projector(const SimplicialSet& local, const Vec& origin) {
  const int n = local.ambient_dim();
  const int m = local.dim();
  const DiscreteVarifold v = var_of_set(local, 9);
  Mat cov = Mat::Zero(n, n);
  double mass = 0.0;
  for (const auto& a : v.atoms()) {
    const Vec d = a.position - origin;
    cov += a.mass * d * d.transpose();
    mass += a.mass;
  }
  if (mass <= 0.0) return Mat::Zero(n, n);
  Eigen::SelfAdjointEigenSolver<Mat> es(cov / mass);
  if (es.eigenvalues()[n - m] <= 1e-14) return mean_projector(v);
  const Mat top = es.eigenvectors().rightCols(m);
  return top * top.transpose();
}

Vec centroid_of(const SimplicialSet& local) {
  Vec c = Vec::Zero(local.ambient_dim());
  double mass = 0.0;
  for (std::size_t i = 0; i < local.size(); ++i) {
    c += local.simplex_measure(i) * local.centroid(i);
    mass += local.simplex_measure(i);
  }
  return mass > 0.0 ? Vec(c / mass) : c;
}

}  // namespace

Deformation make_deformation(const std::string& name, const SimplicialSet& e, const Ball& ball) {
  if (ball.center.size() != e.ambient_dim()) throw InputError("deformation: ball dimension mismatch");
  const Vec x = ball.center;
  const double r = ball.radius;
  Deformation d{name, ball, Deformation::Mode::Pointwise, nullptr, 1.0, true};
  if (name == "identity") {
    d.map = [](const Vec& y) { return y; };
    return d;
  }
  if (name == "radial_collapse") {
    d.map = [x, r](const Vec& y) -> Vec {
      const Vec v = y - x;
      const double s = v.norm();
      if (s >= r) return y;
      if (s <= 0.5 * r) return x;
      return x + ((2.0 * s - r) / s) * v;
    };
    d.lipschitz = 2.0;
    return d;
  }
  const SimplicialSet local = restrict(e, ball);
  if (name == "tangent_project" || name == "tooth_flatten") {
    const bool tangent = name == "tangent_project";
    const Mat p = local.empty() ? Mat::Identity(e.ambient_dim(), e.ambient_dim()) : principal_projector(local, tangent ? x : centroid_of(local));
    const Vec base = tangent ? x : centroid_of(local);
    const double inner = tangent ? 0.5 * r : 0.875 * r;
    const Mat q = Mat::Identity(e.ambient_dim(), e.ambient_dim()) - p;
    d.map = [x, r, p, q, base, inner](const Vec& y) -> Vec {
      const double s = (y - x).norm();
      if (s >= r) return y;
      const double w = s <= inner ? 1.0 : (r - s) / (r - inner);
      return y - w * (q * (y - base));
    };
    const double offset = (q * (x - base)).norm();
    d.lipschitz = 1.0 + (offset + r) / (r - inner);
    return d;
  }
  if (name == "vertex_snap") {
    const int n = e.ambient_dim();
    const double h = 0.25 * r;
    const double reach = r - r * std::sqrt(static_cast<double>(n)) / 8.0;
    d.mode = Deformation::Mode::VertexAffine;
    d.map = [x, r, h, reach](const Vec& y) -> Vec {
      if ((y - x).norm() >= r * (1.0 - 1e-9)) return y;
      const Vec node = x + h * ((y - x) / h).array().round().matrix();
      return (node - x).norm() <= reach ? node : y;
    };
    double lip = 1.0;
    for (std::size_t i = 0; i < local.size(); ++i) {
      const auto c = local.corners(i);
      for (std::size_t a = 0; a < c.size(); ++a) {
        for (std::size_t b = a + 1; b < c.size(); ++b) {
          const double len = (c[a] - c[b]).norm();
          if (len > 0.0) lip = std::max(lip, (d.map(c[a]) - d.map(c[b])).norm() / len);
        }
      }
    }
    d.lipschitz = lip;
    return d;
  }
  throw ConfigError("unknown deformation '" + name + "'");
}

// ---------------------------------------------------------------------------
// The gap

namespace {

std::vector<std::vector<Vec>> refine(const SimplicialSet& local, double r) {
  std::vector<std::vector<Vec>> out;
  for (std::size_t i = 0; i < local.size(); ++i) {
    const auto c = local.corners(i);
    if (local.dim() == 1) {
      const int pieces = std::max(1, static_cast<int>(std::ceil(local.simplex_measure(i) / (r / 64.0))));
      for (int j = 0; j < pieces; ++j) {
        const double t0 = static_cast<double>(j) / pieces;
        const double t1 = static_cast<double>(j + 1) / pieces;
        out.push_back({(1 - t0) * c[0] + t0 * c[1], (1 - t1) * c[0] + t1 * c[1]});
      }
    } else {
      const double longest = std::max({(c[1] - c[0]).norm(), (c[2] - c[0]).norm(), (c[2] - c[1]).norm()});
      const int s = std::max(1, static_cast<int>(std::ceil(longest / (r / 16.0))));
      auto node = [&](int a, int b) -> Vec {
        return c[0] + (static_cast<double>(a) / s) * (c[1] - c[0]) + (static_cast<double>(b) / s) * (c[2] - c[0]);
      };
      for (int a = 0; a < s; ++a) {
        for (int b = 0; a + b < s; ++b) {
          out.push_back({node(a, b), node(a + 1, b), node(a, b + 1)});
          if (a + b + 2 <= s) out.push_back({node(a + 1, b), node(a + 1, b + 1), node(a, b + 1)});
        }
      }
    }
  }
  return out;
}

}  // namespace

QMGap qm_evaluate(const SimplicialSet& e, double M, const GaugeFunction& h, const Deformation& d, const Ball& domain) {
  if (!(M >= 0.0)) throw InputError("qm_gap: M must be nonnegative");
  if (d.ball.center.size() != e.ambient_dim() || domain.center.size() != e.ambient_dim()) {
    throw InputError("qm_gap: dimension mismatch");
  }
  if (!((d.ball.center - domain.center).norm() + d.ball.radius < domain.radius)) {
    throw InputError("qm_gap: closed deformation ball is not inside the domain");
  }
  const double r = d.ball.radius;
  const SimplicialSet local = restrict(e, d.ball);
  std::vector<std::vector<Vec>> pieces;
  if (d.mode == Deformation::Mode::Pointwise) {
    pieces = refine(local, r);
  } else {
    for (std::size_t i = 0; i < local.size(); ++i) pieces.push_back(local.corners(i));
  }
  QMGap g;
  std::vector<std::vector<Vec>> images;
  for (const auto& s : pieces) {
    std::vector<Vec> img;
    bool moved = false;
    for (const auto& p : s) {
      img.push_back(d.map(p));
      moved = moved || (img.back() - p).norm() > kMoveTol;
    }
    if (!moved) continue;
    g.moved_measure += simplex_measure(s);
    images.push_back(std::move(img));
  }
  g.image_measure = images.empty() ? 0.0 : image_measure(e.dim(), images);
  const double hr = h(r);
  g.gauge_term = std::isinf(hr) ? kInf : hr * std::pow(r, e.dim());
  g.gap = M * g.image_measure + g.gauge_term - g.moved_measure;
  return g;
}

double qm_gap(const SimplicialSet& e, double M, const GaugeFunction& h, const Deformation& d, const Ball& domain) {
  return qm_evaluate(e, M, h, d, domain).gap;
}

QMAuditReport qm_audit(const SimplicialSet& e, double M, const GaugeFunction& h, const Ball& domain,
                       const QMAuditOptions& options) {
  const int n = e.ambient_dim();
  if (domain.center.size() != n) throw InputError("qm_audit: domain dimension mismatch");
  for (const auto& name : options.registry) {
    if (std::find(deformation_names().begin(), deformation_names().end(), name) == deformation_names().end()) {
      throw ConfigError("unknown deformation '" + name + "'");
    }
  }
  struct Job {
    std::size_t ball;
    std::size_t deformation;
  };
  std::vector<Ball> balls;
  for (double frac : options.radius_fractions) {
    const double r = frac * domain.radius;
    if (!(r > 0.0)) throw InputError("qm_audit: radius fractions must be positive");
    const double step = options.spacing * r;
    const int reach = static_cast<int>(std::ceil(domain.radius / step));
    std::vector<Ball> level;
    std::vector<int> idx(static_cast<std::size_t>(n), -reach);
    for (;;) {
      Vec c(n);
      for (int i = 0; i < n; ++i) c[i] = domain.center[i] + step * idx[static_cast<std::size_t>(i)];
      if ((c - domain.center).norm() + r < domain.radius * (1.0 - 1e-12) && distance(c, e) <= 0.5 * r) {
        level.emplace_back(c, r);
      }
      int i = 0;
      while (i < n && ++idx[static_cast<std::size_t>(i)] > reach) idx[static_cast<std::size_t>(i++)] = -reach;
      if (i == n) break;
    }
    if (level.size() > options.max_balls_per_radius && options.max_balls_per_radius > 0) {
      std::vector<Ball> kept;
      const double stride = static_cast<double>(level.size()) / static_cast<double>(options.max_balls_per_radius);
      for (std::size_t j = 0; j < options.max_balls_per_radius; ++j) {
        kept.push_back(level[static_cast<std::size_t>(std::floor(j * stride))]);
      }
      level = std::move(kept);
    }
    balls.insert(balls.end(), level.begin(), level.end());
  }

  QMAuditReport rep;
  rep.M = M;
  rep.gauge = h.describe();
  const std::size_t nd = options.registry.size();
  rep.rows.resize(balls.size() * nd, QMAuditRow{"", Vec(), 0.0, {}});
  parallel_for(rep.rows.size(), [&](std::size_t j) {
    const Ball& b = balls[j / nd];
    const std::string& name = options.registry[j % nd];
    const Deformation d = make_deformation(name, e, b);
    rep.rows[j] = {name, b.center, b.radius, qm_evaluate(e, M, h, d, domain)};
  });
  rep.min_gap = kInf;
  for (const auto& row : rep.rows) {
    if (row.gap.gap < rep.min_gap) {
      rep.min_gap = row.gap.gap;
      rep.worst_deformation = row.deformation;
      rep.worst_center = row.center;
      rep.worst_radius = row.radius;
    }
  }
  if (rep.rows.empty()) rep.min_gap = 0.0;
  rep.passed = rep.min_gap >= -kPassTol;
  return rep;
}

SemicontinuityReport semicontinuity_check(const SetSequence& sequence, const SimplicialSet& limit,
                                          const std::vector<Ball>& opens, const std::vector<Ball>& compacts,
                                          const std::vector<int>& ks, double M, const GaugeFunction& h, double C,
                                          double tol) {
  if (ks.empty()) throw InputError("semicontinuity_check: empty k schedule");
  SemicontinuityReport rep;
  const std::size_t first = ks.size() - tail_length(ks.size());
  rep.tail.assign(ks.begin() + static_cast<std::ptrdiff_t>(first), ks.end());
  std::vector<SimplicialSet> tail_sets;
  for (int k : rep.tail) tail_sets.push_back(sequence(k));

  for (const auto& o : opens) {
    double lo = kInf;
    for (const auto& s : tail_sets) lo = std::min(lo, measure(restrict(s, o)));
    const double lim = measure(restrict(limit, o));
    rep.rows.push_back({"open", o, lim, lo, lo + tol, lim <= lo + tol});
    rep.lower_passed = rep.lower_passed && rep.rows.back().passed;
  }
  const double factor = (1.0 + C * h.at_zero_plus()) * M;
  for (const auto& k : compacts) {
    double hi = 0.0;
    for (const auto& s : tail_sets) hi = std::max(hi, measure(restrict(s, k)));
    const double lim = measure(restrict(limit, k));
    const double bound = factor * lim + tol;
    rep.rows.push_back({"compact", k, lim, hi, bound, hi <= bound});
    rep.upper_passed = rep.upper_passed && rep.rows.back().passed;
  }
  return rep;
}

}  // namespace vlab
