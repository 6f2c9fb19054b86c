#include "varifold_lab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "varifold_lab/errors.hpp"
#include "varifold_lab/parallel.hpp"
#include "varifold_lab/union_measure.hpp"

namespace vlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int ambient_of(const SampledSet& s) {
  return std::visit([](const auto& e) -> int {
    if constexpr (std::is_same_v<std::decay_t<decltype(e)>, SimplicialSet>) {
      return e.ambient_dim();
    } else {
      return e.ambient_dim;
    }
  }, s);
}

// Flattened corner lists so the inner distance loop does not allocate.
struct DistanceTarget {
  int dim = 0;
  std::vector<std::vector<Vec>> simplices;
  std::vector<Vec> points;

  explicit DistanceTarget(const SampledSet& s) {
    if (const auto* e = std::get_if<SimplicialSet>(&s)) {
      dim = e->dim();
      simplices.reserve(e->size());
      for (std::size_t i = 0; i < e->size(); ++i) simplices.push_back(e->corners(i));
    } else {
      points = std::get<PointCloudSet>(s).points;
    }
  }

  double operator()(const Vec& p) const {
    double best = kInf;
    if (dim == 1) {
      for (const auto& c : simplices) {
        const Vec d = c[1] - c[0];
        const double len2 = d.squaredNorm();
        const double t = std::clamp((p - c[0]).dot(d) / len2, 0.0, 1.0);
        best = std::min(best, (p - c[0] - t * d).squaredNorm());
      }
      return std::sqrt(best);
    }
    if (dim == 2) {
      for (const auto& c : simplices) best = std::min(best, distance_to_simplex(p, c));
      return best;
    }
    for (const auto& q : points) best = std::min(best, (p - q).squaredNorm());
    return std::sqrt(best);
  }
};

// Sample points of the part of `s` inside the ball at the given refinement
// level, together with the sampling gap: every point of the clipped set lies
// within `gap` of a sample.
struct SampleSet {
  std::vector<Vec> points;
  double gap = 0.0;
};

SampleSet sample_inside(const SimplicialSet& clipped, int samples, int level) {
  SampleSet out;
  const double total = measure(clipped);
  if (clipped.empty()) return out;
  for (std::size_t i = 0; i < clipped.size(); ++i) {
    const auto c = clipped.corners(i);
    const double share = clipped.simplex_measure(i) / total;
    if (clipped.dim() == 1) {
      const int pieces = std::max(1, static_cast<int>(std::ceil(samples * share))) << level;
      for (int j = 0; j <= pieces; ++j) {
        const double t = static_cast<double>(j) / pieces;
        out.points.push_back((1.0 - t) * c[0] + t * c[1]);
      }
      out.gap = std::max(out.gap, 0.5 * clipped.simplex_measure(i) / pieces);
    } else {
      const int s = std::max(1, static_cast<int>(std::ceil(std::sqrt(2.0 * samples * share)))) << level;
      for (int a = 0; a <= s; ++a) {
        for (int b = 0; a + b <= s; ++b) {
          const double u = static_cast<double>(a) / s;
          const double v = static_cast<double>(b) / s;
          out.points.push_back(c[0] + u * (c[1] - c[0]) + v * (c[2] - c[0]));
        }
      }
      const double longest =
          std::max({(c[1] - c[0]).norm(), (c[2] - c[0]).norm(), (c[2] - c[1]).norm()}) / s;
      out.gap = std::max(out.gap, longest);
    }
  }
  return out;
}

struct OneSided {
  double sup = 0.0;
  double gap = 0.0;
  std::size_t samples = 0;
};

OneSided one_sided(const SampledSet& from, const DistanceTarget& to, const Ball& ball, int samples) {
  OneSided out;
  if (const auto* pc = std::get_if<PointCloudSet>(&from)) {
    for (const auto& p : pc->points) {
      if (!ball.contains(p)) continue;
      out.sup = std::max(out.sup, to(p));
      ++out.samples;
    }
    return out;
  }
  const SimplicialSet clipped = restrict(std::get<SimplicialSet>(from), ball);
  if (clipped.empty()) return out;
  double previous = -1.0;
  constexpr int kMaxLevel = 6;
  for (int level = 0; level <= kMaxLevel; ++level) {
    const SampleSet s = sample_inside(clipped, samples, level);
    std::vector<double> d(s.points.size());
    parallel_for(s.points.size(), [&](std::size_t i) { d[i] = to(s.points[i]); });
    const double sup = d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
    out.sup = sup;
    out.gap = s.gap;
    out.samples = s.points.size();
    if (previous >= 0.0 && std::abs(sup - previous) < 1e-4 * ball.radius) break;
    previous = sup;
  }
  return out;
}

}  // namespace

HausdorffReport hausdorff_local(const SampledSet& x_set, const SampledSet& y_set, const Vec& x, double r,
                                int samples) {
  if (!(r > 0.0)) throw InputError("hausdorff_local: radius must be positive");
  if (samples < 1) throw InputError("hausdorff_local: samples must be positive");
  const int n = ambient_of(x_set);
  if (ambient_of(y_set) != n || x.size() != n) throw InputError("hausdorff_local: dimension mismatch");
  const Ball ball(x, r);
  const DistanceTarget to_y(y_set), to_x(x_set);
  const OneSided a = one_sided(x_set, to_y, ball, samples);
  const OneSided b = one_sided(y_set, to_x, ball, samples);
  HausdorffReport rep;
  // An empty second set makes dist infinite; report that honestly.
  rep.value = (a.sup + b.sup) / r;
  rep.resolution = (a.gap + b.gap) / r;
  rep.samples = a.samples + b.samples;
  return rep;
}

std::string to_string(BLMethod m) { return m == BLMethod::ExactLP ? "lp" : "dictionary"; }

BLMethod bl_method_from_string(const std::string& s) {
  if (s == "lp" || s == "exact" || s == "exact_lp") return BLMethod::ExactLP;
  if (s == "dictionary") return BLMethod::Dictionary;
  throw ConfigError("unknown bl method '" + s + "' (expected lp or dictionary)");
}

// ---------------------------------------------------------------------------
// Test dictionary

TestDictionary::TestDictionary(int ambient_dim, int dim, const Ball& domain) : ambient_dim_(ambient_dim), dim_(dim) {
  if (dim < 1 || dim > ambient_dim) throw InputError("TestDictionary: need 1 <= m <= n");
  if (domain.center.size() != ambient_dim) throw InputError("TestDictionary: domain dimension mismatch");
  const int n = ambient_dim;
  const double big = domain.radius;
  const double small = 0.5 * domain.radius;
  const double window_lip = 8.0 / (3.0 * std::sqrt(3.0));

  position_.push_back({"one", domain.center, 0.0, -1, -1, 1.0, 0.0});
  position_.push_back({"w", domain.center, big, -1, -1, 1.0, window_lip / big});
  for (int i = 0; i < n; ++i) {
    position_.push_back({"w*y" + std::to_string(i), domain.center, big, i, -1, 1.0, (window_lip + 1.0) / big});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      position_.push_back({"w*y" + std::to_string(i) + "y" + std::to_string(j), domain.center, big, i, j, 1.0,
                           (window_lip + 2.0) / big});
    }
  }
  position_.push_back({"w@c", domain.center, small, -1, -1, 1.0, window_lip / small});
  for (int i = 0; i < n; ++i) {
    for (int sign : {-1, 1}) {
      Vec c = domain.center;
      c[i] += sign * small;
      position_.push_back({"w@c" + std::string(sign < 0 ? "-" : "+") + "e" + std::to_string(i), c, small, -1, -1, 1.0,
                           window_lip / small});
    }
  }

  PlaneFeature one;
  one.name = "one";
  plane_.push_back(one);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      PlaneFeature f;
      f.name = "P" + std::to_string(i) + std::to_string(j);
      f.kind = PlaneFeature::Kind::Entry;
      f.i = i;
      f.j = j;
      f.lip = 1.0;
      plane_.push_back(f);
    }
  }
  // Coordinate m-planes, enumerated as increasing index subsets.
  std::vector<int> axes(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) axes[static_cast<std::size_t>(i)] = i;
  for (;;) {
    PlaneFeature f;
    f.name = "dist_e";
    for (int a : axes) f.name += std::to_string(a);
    f.kind = PlaneFeature::Kind::Distance;
    f.reference = Plane::coordinate(n, axes);
    f.lip = 1.0;
    plane_.push_back(f);
    int k = dim - 1;
    while (k >= 0 && axes[static_cast<std::size_t>(k)] == n - dim + k) --k;
    if (k < 0) break;
    ++axes[static_cast<std::size_t>(k)];
    for (int t = k + 1; t < dim; ++t) axes[static_cast<std::size_t>(t)] = axes[static_cast<std::size_t>(t - 1)] + 1;
  }
  const GrassmannSample refs = haar_sample(n, dim, 16, 20240611ULL);
  for (std::size_t k = 0; k < refs.planes.size(); ++k) {
    PlaneFeature f;
    f.name = "dist_haar" + std::to_string(k);
    f.kind = PlaneFeature::Kind::Distance;
    f.reference = refs.planes[k];
    f.lip = 1.0;
    plane_.push_back(f);
  }

  for (const auto& a : position_) {
    for (const auto& b : plane_) {
      ids_.push_back(a.name + "|" + b.name);
      const double denom = std::max({a.sup * b.sup, a.sup * b.lip, b.sup * a.lip});
      scale_.push_back(1.0 / denom);
    }
  }
}

double TestDictionary::position_value(const PositionFeature& f, const Vec& x) const {
  if (f.radius == 0.0) return 1.0;
  const Vec y = (x - f.center) / f.radius;
  const double s = y.squaredNorm();
  if (s >= 1.0) return 0.0;
  double v = (1.0 - s) * (1.0 - s);
  if (f.i >= 0) v *= y[f.i];
  if (f.j >= 0) v *= y[f.j];
  return v;
}

double TestDictionary::plane_value(const PlaneFeature& f, const Plane& t) const {
  switch (f.kind) {
    case PlaneFeature::Kind::One:
      return 1.0;
    case PlaneFeature::Kind::Entry:
      return t.projector()(f.i, f.j);
    case PlaneFeature::Kind::Distance:
      return grassmann_distance(t, *f.reference);
  }
  return 0.0;
}

double TestDictionary::evaluate(std::size_t k, const Vec& x, const Plane& t) const {
  if (k >= size()) throw InputError("TestDictionary: function index out of range");
  const std::size_t a = k / plane_.size();
  const std::size_t b = k % plane_.size();
  return scale_[k] * position_value(position_[a], x) * plane_value(plane_[b], t);
}

Eigen::VectorXd TestDictionary::integrate(const DiscreteVarifold& v) const {
  if (v.ambient_dim() != ambient_dim_ || v.dim() != dim_) throw InputError("TestDictionary: varifold dimension mismatch");
  const auto na = static_cast<Eigen::Index>(v.size());
  Mat pos(na, static_cast<Eigen::Index>(position_.size()));
  Mat pln(na, static_cast<Eigen::Index>(plane_.size()));
  parallel_for(v.size(), [&](std::size_t i) {
    const auto& atom = v.atoms()[i];
    const auto row = static_cast<Eigen::Index>(i);
    for (std::size_t a = 0; a < position_.size(); ++a) {
      pos(row, static_cast<Eigen::Index>(a)) = atom.mass * position_value(position_[a], atom.position);
    }
    for (std::size_t b = 0; b < plane_.size(); ++b) {
      pln(row, static_cast<Eigen::Index>(b)) = plane_value(plane_[b], atom.plane);
    }
  });
  const Mat prod = pos.transpose() * pln;  // position x plane
  Eigen::VectorXd out(static_cast<Eigen::Index>(size()));
  for (std::size_t a = 0; a < position_.size(); ++a) {
    for (std::size_t b = 0; b < plane_.size(); ++b) {
      const std::size_t k = a * plane_.size() + b;
      out[static_cast<Eigen::Index>(k)] =
          scale_[k] * prod(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// BL distance

Ball bounding_ball(const DiscreteVarifold& v, const DiscreteVarifold& w) {
  const int n = v.ambient_dim();
  Vec lo = Vec::Constant(n, kInf), hi = Vec::Constant(n, -kInf);
  for (const auto* var : {&v, &w}) {
    for (const auto& a : var->atoms()) {
      lo = lo.cwiseMin(a.position);
      hi = hi.cwiseMax(a.position);
    }
  }
  if (!std::isfinite(lo[0])) return Ball(Vec::Zero(n), 1.0);
  const Vec c = 0.5 * (lo + hi);
  return Ball(c, 1.05 * 0.5 * (hi - lo).norm() + 1e-9);
}

namespace {

// Distinct projectors among the atoms; atoms sharing a plane bit-for-bit
// share a column of the plane-distance table.
std::vector<int> plane_classes(const DiscreteVarifold& v, std::vector<const Plane*>& reps) {
  std::map<std::vector<double>, int> seen;
  std::vector<int> cls;
  cls.reserve(v.size());
  for (const auto& a : v.atoms()) {
    const Mat& p = a.plane.projector();
    std::vector<double> key(p.data(), p.data() + p.size());
    auto [it, inserted] = seen.emplace(std::move(key), static_cast<int>(reps.size()));
    if (inserted) reps.push_back(&a.plane);
    cls.push_back(it->second);
  }
  return cls;
}

BLDistanceReport bl_exact(const DiscreteVarifold& v, const DiscreteVarifold& w) {
  std::vector<const Plane*> pv, pw;
  const auto cv = plane_classes(v, pv);
  const auto cw = plane_classes(w, pw);
  Mat pd(static_cast<Eigen::Index>(pv.size()), static_cast<Eigen::Index>(pw.size()));
  parallel_for(pv.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < pw.size(); ++j) {
      pd(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = grassmann_distance(*pv[i], *pw[j]);
    }
  });
  const auto a = static_cast<Eigen::Index>(v.size());
  const auto b = static_cast<Eigen::Index>(w.size());
  Mat cost(a, b);
  for (Eigen::Index i = 0; i < a; ++i) {
    const auto& x = v.atoms()[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < b; ++j) {
      const auto& y = w.atoms()[static_cast<std::size_t>(j)];
      cost(i, j) = (x.position - y.position).norm() + pd(cv[static_cast<std::size_t>(i)], cw[static_cast<std::size_t>(j)]);
    }
  }
  std::vector<double> supply, demand;
  for (const auto& x : v.atoms()) supply.push_back(x.mass);
  for (const auto& y : w.atoms()) demand.push_back(y.mass);
  BLDistanceReport rep;
  rep.method = BLMethod::ExactLP;
  rep.plan = unbalanced_transport(supply, demand, cost, 1.0);
  rep.value = rep.plan.cost;
  return rep;
}

}  // namespace

BLDistanceReport bl_distance(const DiscreteVarifold& v, const DiscreteVarifold& w, BLMethod method,
                             const std::optional<Ball>& domain) {
  if (v.ambient_dim() != w.ambient_dim() || v.dim() != w.dim()) throw InputError("bl_distance: dimension mismatch");
  if (method == BLMethod::ExactLP) return bl_exact(v, w);
  const Ball ball = domain ? *domain : bounding_ball(v, w);
  const TestDictionary dict(v.ambient_dim(), v.dim(), ball);
  const Eigen::VectorXd diff = dict.integrate(v) - dict.integrate(w);
  BLDistanceReport rep;
  rep.method = BLMethod::Dictionary;
  Eigen::Index best = 0;
  rep.value = diff.cwiseAbs().maxCoeff(&best);
  rep.witness = dict.id(static_cast<std::size_t>(best));
  return rep;
}

// ---------------------------------------------------------------------------
// Projected mass and the tangent-filling check

double projected_mass(const SimplicialSet& e, const Vec& x, double r, const Plane& t) {
  if (!(r > 0.0)) throw InputError("projected_mass: radius must be positive");
  if (t.dim() != e.dim() || t.ambient_dim() != e.ambient_dim() || x.size() != e.ambient_dim()) {
    throw InputError("projected_mass: dimension mismatch");
  }
  const auto pieces = clip_pieces(e, Ball(x, r));
  auto coords = [&](const Vec& p) { return plane_coordinates(t, (p - x) / r); };
  if (e.dim() == 1) {
    std::vector<Interval> iv;
    iv.reserve(pieces.size());
    for (const auto& c : pieces) iv.emplace_back(coords(c[0])[0], coords(c[1])[0]);
    return interval_union_length(std::move(iv));
  }
  std::vector<std::vector<Eigen::Vector2d>> polys;
  polys.reserve(pieces.size());
  for (const auto& c : pieces) {
    std::vector<Eigen::Vector2d> poly;
    poly.reserve(c.size());
    for (const auto& p : c) poly.push_back(coords(p));
    polys.push_back(std::move(poly));
  }
  return convex_polygon_union_area(polys);
}

std::string to_string(StrConVerdict v) {
  switch (v) {
    case StrConVerdict::Holds:
      return "HOLDS";
    case StrConVerdict::Fails:
      return "FAILS";
    case StrConVerdict::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

std::size_t tail_length(std::size_t schedule_length) {
  return std::min(schedule_length, std::max<std::size_t>(2, (schedule_length + 3) / 4));
}

StrConReport strcon_check(const SetSequence& sequence, const Vec& x, const Plane& t, const std::vector<double>& radii,
                          const std::vector<int>& ks, double tol) {
  if (radii.empty() || ks.empty()) throw InputError("strcon_check: empty radius or k schedule");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] < radii[i - 1]))) {
      throw InputError("strcon_check: radii must be positive and strictly decreasing");
    }
  }
  if (!std::is_sorted(ks.begin(), ks.end())) throw InputError("strcon_check: k schedule must be increasing");

  StrConReport rep;
  rep.radii = radii;
  rep.tol = tol;
  rep.omega = unit_ball_volume(t.dim());

  std::vector<SimplicialSet> sets;
  sets.reserve(ks.size());
  for (int k : ks) sets.push_back(sequence(k));
  const std::size_t nr = radii.size();
  rep.cells.resize(ks.size() * nr);
  parallel_for(rep.cells.size(), [&](std::size_t c) {
    const std::size_t ki = c / nr;
    const std::size_t ri = c % nr;
    rep.cells[c] = {ks[ki], radii[ri], projected_mass(sets[ki], x, radii[ri], t)};
  });

  const std::size_t tail_len = tail_length(ks.size());
  const std::size_t first = ks.size() - tail_len;
  rep.tail.assign(ks.begin() + static_cast<std::ptrdiff_t>(first), ks.end());
  rep.tail_infimum.assign(nr, kInf);
  for (std::size_t ki = first; ki < ks.size(); ++ki) {
    for (std::size_t ri = 0; ri < nr; ++ri) {
      rep.tail_infimum[ri] = std::min(rep.tail_infimum[ri], rep.cells[ki * nr + ri].value);
    }
  }

  const double threshold = (1.0 - tol) * rep.omega;
  bool all_above = true;
  bool trend = true;
  for (std::size_t ri = 0; ri < nr; ++ri) {
    all_above = all_above && rep.tail_infimum[ri] >= threshold;
    if (ri > 0) trend = trend && rep.tail_infimum[ri] >= rep.tail_infimum[ri - 1] - tol * rep.omega;
  }
  if (all_above && trend) {
    rep.verdict = StrConVerdict::Holds;
  } else if (rep.tail_infimum.back() < threshold) {
    rep.verdict = StrConVerdict::Fails;
  } else {
    rep.verdict = StrConVerdict::Inconclusive;
  }
  return rep;
}

StrConReport strcon_check(const SetSequence& sequence, const Vec& x, const Plane& t, const std::vector<double>& radii,
                          int k_max, double tol) {
  if (k_max < 1) throw InputError("strcon_check: k_max must be at least 1");
  std::vector<int> ks;
  for (int k = 1; k <= k_max; k *= 2) ks.push_back(k);
  return strcon_check(sequence, x, t, radii, ks, tol);
}

}  // namespace vlab
