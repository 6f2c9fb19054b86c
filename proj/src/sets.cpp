#include "varifold_lab/sets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "varifold_lab/errors.hpp"

namespace vlab {

namespace {

constexpr double kMinSimplexMeasure = 1e-14;
constexpr double kClipRelativeError = 1e-6;

Plane span_of(const std::vector<Vec>& corners) {
  const auto m = static_cast<Eigen::Index>(corners.size() - 1);
  Mat edges(corners[0].size(), m);
  for (Eigen::Index j = 0; j < m; ++j) edges.col(j) = corners[static_cast<std::size_t>(j + 1)] - corners[0];
  return Plane(edges);
}

// Number of edges of an inscribed regular polygon whose area deficit
// against a disk of radius rho stays below kClipRelativeError * r^2.
int polygon_edges_for(double rho, double r) {
  const double budget = kClipRelativeError * r * r;
  const double deficit_coeff = 2.0 * std::pow(std::numbers::pi, 3) / 3.0;  // N^2 * deficit / rho^2
  int n = std::max(16, static_cast<int>(std::ceil(std::sqrt(deficit_coeff * rho * rho / budget))));
  auto deficit = [&](int k) {
    return std::numbers::pi * rho * rho - 0.5 * k * rho * rho * std::sin(2.0 * std::numbers::pi / k);
  };
  while (deficit(n) >= budget) n += 8;
  return n;
}

using Pt2 = Eigen::Vector2d;

// Sutherland-Hodgman step: keep the part of `poly` left of the directed
// edge a -> b.
std::vector<Pt2> clip_half_plane(const std::vector<Pt2>& poly, const Pt2& a, const Pt2& b) {
  std::vector<Pt2> out;
  if (poly.empty()) return out;
  const Pt2 d = b - a;
  auto side = [&](const Pt2& p) { return d.x() * (p.y() - a.y()) - d.y() * (p.x() - a.x()); };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Pt2& cur = poly[i];
    const Pt2& nxt = poly[(i + 1) % poly.size()];
    const double sc = side(cur);
    const double sn = side(nxt);
    if (sc >= 0.0) out.push_back(cur);
    if ((sc >= 0.0) != (sn >= 0.0)) {
      const double t = sc / (sc - sn);
      out.push_back(cur + t * (nxt - cur));
    }
  }
  return out;
}

void clip_segment(const std::vector<Vec>& c, const Ball& ball, std::vector<std::vector<Vec>>& out) {
  const Vec d = c[1] - c[0];
  const Vec f = c[0] - ball.center;
  const double a = d.squaredNorm();
  const double b = 2.0 * f.dot(d);
  const double cc = f.squaredNorm() - ball.radius * ball.radius;
  const double disc = b * b - 4.0 * a * cc;
  if (disc <= 0.0) return;
  const double sq = std::sqrt(disc);
  // Stable roots of a t^2 + b t + cc.
  const double qv = -0.5 * (b + std::copysign(sq, b));
  double t0 = qv / a;
  double t1 = (qv != 0.0) ? cc / qv : t0;
  if (t0 > t1) std::swap(t0, t1);
  const double lo = std::max(0.0, t0);
  const double hi = std::min(1.0, t1);
  if (hi <= lo) return;
  const Vec p = lo == 0.0 ? c[0] : Vec(c[0] + lo * d);
  const Vec q = hi == 1.0 ? c[1] : Vec(c[0] + hi * d);
  if ((q - p).norm() > kMinSimplexMeasure) out.push_back({p, q});
}

void clip_triangle(const std::vector<Vec>& c, const Plane& tangent, const Ball& ball,
                   std::vector<std::vector<Vec>>& out, ClipDiagnostics& diag, bool fan = true) {
  const Mat& frame = tangent.frame();
  const Vec rel = ball.center - c[0];
  const Pt2 center2 = frame.transpose() * rel;
  const double off_plane2 = std::max(0.0, rel.squaredNorm() - center2.squaredNorm());
  const double r2 = ball.radius * ball.radius;
  if (off_plane2 >= r2) return;
  const double rho = std::sqrt(r2 - off_plane2);

  std::vector<Pt2> tri = {Pt2::Zero(), frame.transpose() * (c[1] - c[0]), frame.transpose() * (c[2] - c[0])};

  const int edges = polygon_edges_for(rho, ball.radius);
  const double step = 2.0 * std::numbers::pi / edges;
  const double segment_area = 0.5 * rho * rho * (step - std::sin(step));
  std::vector<Pt2> poly = tri;
  int active = 0;
  for (int k = 0; k < edges && !poly.empty(); ++k) {
    const Pt2 a = center2 + rho * Pt2(std::cos(k * step), std::sin(k * step));
    const Pt2 b = center2 + rho * Pt2(std::cos((k + 1) * step), std::sin((k + 1) * step));
    // The polygon is convex: an edge matters only if it cuts a triangle corner off.
    const Pt2 d = b - a;
    bool all_inside = true;
    for (const auto& p : tri) {
      if (d.x() * (p.y() - a.y()) - d.y() * (p.x() - a.x()) < 0.0) {
        all_inside = false;
        break;
      }
    }
    if (all_inside) continue;
    ++active;
    poly = clip_half_plane(poly, a, b);
  }
  if (active > 0) {
    diag.boundary_polygon_edges = std::max(diag.boundary_polygon_edges, edges);
    diag.area_error_bound += active * segment_area;
  }
  if (poly.size() < 3) return;
  auto lift = [&](const Pt2& p) -> Vec { return c[0] + frame * p; };
  if (!fan) {
    std::vector<Vec> whole;
    whole.reserve(poly.size());
    for (const auto& p : poly) whole.push_back(lift(p));
    out.push_back(std::move(whole));
    return;
  }
  const Vec base = lift(poly[0]);
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    std::vector<Vec> t = {base, lift(poly[i]), lift(poly[i + 1])};
    if (simplex_measure(t) > kMinSimplexMeasure) out.push_back(std::move(t));
  }
}

}  // namespace

Ball::Ball(Vec c, double r) : center(std::move(c)), radius(r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InputError("ball radius must be positive");
}

double simplex_measure(const std::vector<Vec>& corners) {
  if (corners.size() == 2) return (corners[1] - corners[0]).norm();
  if (corners.size() == 3) {
    // Kahan's side-length formula; the Gram determinant cancels badly on the
    // slivers a fan triangulation of a clipped disk produces.
    std::array<double, 3> s{(corners[1] - corners[0]).norm(), (corners[2] - corners[1]).norm(),
                            (corners[0] - corners[2]).norm()};
    std::sort(s.begin(), s.end(), std::greater<>());
    const double a = s[0], b = s[1], c = s[2];
    const double p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    return 0.25 * std::sqrt(std::max(0.0, p));
  }
  throw InputError("only segments and triangles are supported");
}

SimplicialSet::SimplicialSet(int ambient_dim, int dim, std::vector<Vec> vertices, std::vector<Simplex> simplices)
    : ambient_dim_(ambient_dim), dim_(dim), vertices_(std::move(vertices)), simplices_(std::move(simplices)) {
  if (dim_ != 1 && dim_ != 2) throw InputError("simplicial sets support m = 1 or m = 2 only");
  if (ambient_dim_ < dim_) throw InputError("ambient dimension smaller than set dimension");
  for (const auto& v : vertices_) {
    if (v.size() != ambient_dim_) throw InputError("vertex has wrong length");
    if (!v.allFinite()) throw InputError("vertex has non-finite coordinate");
  }
  tangents_.reserve(simplices_.size());
  measures_.reserve(simplices_.size());
  for (std::size_t i = 0; i < simplices_.size(); ++i) {
    const auto& s = simplices_[i];
    if (static_cast<int>(s.size()) != dim_ + 1) throw InputError("simplex " + std::to_string(i) + " has wrong arity");
    for (int idx : s) {
      if (idx < 0 || idx >= static_cast<int>(vertices_.size())) {
        throw InputError("simplex " + std::to_string(i) + " references a missing vertex");
      }
    }
    const auto c = corners(i);
    const double mu = vlab::simplex_measure(c);
    if (!(mu > kMinSimplexMeasure)) throw InputError("simplex " + std::to_string(i) + " is degenerate");
    measures_.push_back(mu);
    tangents_.push_back(span_of(c));
  }
}

SimplicialSet SimplicialSet::empty(int ambient_dim, int dim) { return SimplicialSet(ambient_dim, dim, {}, {}); }

SimplicialSet SimplicialSet::polyline(const std::vector<Vec>& points) {
  if (points.size() < 2) throw InputError("polyline needs at least two points");
  std::vector<Simplex> s;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) s.push_back({static_cast<int>(i), static_cast<int>(i + 1)});
  return SimplicialSet(static_cast<int>(points[0].size()), 1, points, std::move(s));
}

SimplicialSet SimplicialSet::segment(const Vec& a, const Vec& b, int pieces) {
  if (pieces < 1) throw InputError("segment needs at least one piece");
  std::vector<Vec> pts;
  for (int i = 0; i <= pieces; ++i) {
    const double t = static_cast<double>(i) / pieces;
    pts.push_back(i == pieces ? b : Vec(a + t * (b - a)));
  }
  return polyline(pts);
}

SimplicialSet SimplicialSet::from_soup(int ambient_dim, int dim, const std::vector<std::vector<Vec>>& soup) {
  std::vector<Vec> verts;
  std::vector<Simplex> simp;
  for (const auto& s : soup) {
    if (static_cast<int>(s.size()) != dim + 1) throw InputError("soup simplex has wrong arity");
    if (!(vlab::simplex_measure(s) > kMinSimplexMeasure)) continue;
    Simplex idx;
    for (const auto& p : s) {
      idx.push_back(static_cast<int>(verts.size()));
      verts.push_back(p);
    }
    simp.push_back(std::move(idx));
  }
  return SimplicialSet(ambient_dim, dim, std::move(verts), std::move(simp));
}

std::vector<Vec> SimplicialSet::corners(std::size_t i) const {
  std::vector<Vec> c;
  c.reserve(simplices_[i].size());
  for (int idx : simplices_[i]) c.push_back(vertices_[static_cast<std::size_t>(idx)]);
  return c;
}

Vec SimplicialSet::centroid(std::size_t i) const {
  Vec c = Vec::Zero(ambient_dim_);
  for (int idx : simplices_[i]) c += vertices_[static_cast<std::size_t>(idx)];
  return c / static_cast<double>(simplices_[i].size());
}

PointCloudSet::PointCloudSet(int ambient_dim_, int dim_, std::vector<Vec> points_, std::vector<double> masses_)
    : ambient_dim(ambient_dim_), dim(dim_), points(std::move(points_)), masses(std::move(masses_)) {
  if (points.size() != masses.size()) throw InputError("point cloud needs one mass per point");
  if (dim < 1 || dim > ambient_dim) throw InputError("point cloud needs 1 <= m <= n");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != ambient_dim) throw InputError("point cloud point has wrong length");
    if (!(masses[i] > 0.0) || !std::isfinite(masses[i])) throw InputError("point cloud masses must be positive");
  }
}

double PointCloudSet::total_mass() const {
  double s = 0.0;
  for (double m : masses) s += m;
  return s;
}

double measure(const SimplicialSet& e) {
  double s = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) s += e.simplex_measure(i);
  return s;
}

SimplicialSet restrict(const SimplicialSet& e, const Ball& ball) {
  if (ball.center.size() != e.ambient_dim()) throw InputError("ball and set live in different dimensions");
  std::vector<Vec> verts;
  std::vector<SimplicialSet::Simplex> simp;
  std::vector<int> remap(e.vertices().size(), -1);
  std::vector<std::vector<Vec>> pieces;
  ClipDiagnostics diag;

  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto& s = e.simplices()[i];
    bool all_in = true;
    for (int idx : s) all_in = all_in && ball.contains(e.vertices()[static_cast<std::size_t>(idx)]);
    if (all_in) {
      SimplicialSet::Simplex ns;
      for (int idx : s) {
        auto& r = remap[static_cast<std::size_t>(idx)];
        if (r < 0) {
          r = static_cast<int>(verts.size());
          verts.push_back(e.vertices()[static_cast<std::size_t>(idx)]);
        }
        ns.push_back(r);
      }
      simp.push_back(std::move(ns));
      continue;
    }
    pieces.clear();
    if (e.dim() == 1) {
      clip_segment(e.corners(i), ball, pieces);
    } else {
      clip_triangle(e.corners(i), e.tangent(i), ball, pieces, diag);
    }
    for (auto& piece : pieces) {
      SimplicialSet::Simplex ns;
      for (auto& p : piece) {
        ns.push_back(static_cast<int>(verts.size()));
        verts.push_back(std::move(p));
      }
      simp.push_back(std::move(ns));
    }
  }
  SimplicialSet out(e.ambient_dim(), e.dim(), std::move(verts), std::move(simp));
  out.set_diagnostics(diag);
  return out;
}

std::vector<std::vector<Vec>> clip_pieces(const SimplicialSet& e, const Ball& ball, ClipDiagnostics* diag) {
  if (ball.center.size() != e.ambient_dim()) throw InputError("ball and set live in different dimensions");
  std::vector<std::vector<Vec>> pieces;
  ClipDiagnostics local;
  for (std::size_t i = 0; i < e.size(); ++i) {
    auto c = e.corners(i);
    bool all_in = true;
    for (const auto& p : c) all_in = all_in && ball.contains(p);
    if (all_in) {
      pieces.push_back(std::move(c));
    } else if (e.dim() == 1) {
      clip_segment(c, ball, pieces);
    } else {
      clip_triangle(c, e.tangent(i), ball, pieces, local, false);
    }
  }
  if (diag) *diag = local;
  return pieces;
}

SimplicialSet rescale(const SimplicialSet& e, const Vec& x, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InputError("rescale needs r > 0");
  if (x.size() != e.ambient_dim()) throw InputError("rescale center has wrong length");
  std::vector<Vec> verts;
  verts.reserve(e.vertices().size());
  for (const auto& v : e.vertices()) verts.push_back((v - x) / r);
  SimplicialSet out(e.ambient_dim(), e.dim(), std::move(verts), e.simplices());
  ClipDiagnostics d = e.diagnostics();
  d.area_error_bound /= std::pow(r, e.dim());
  out.set_diagnostics(d);
  return out;
}

SimplicialSet concat(const SimplicialSet& a, const SimplicialSet& b) {
  if (a.ambient_dim() != b.ambient_dim() || a.dim() != b.dim()) throw InputError("concat needs matching (n, m)");
  std::vector<Vec> verts = a.vertices();
  std::vector<SimplicialSet::Simplex> simp = a.simplices();
  const int shift = static_cast<int>(verts.size());
  verts.insert(verts.end(), b.vertices().begin(), b.vertices().end());
  for (auto s : b.simplices()) {
    for (int& idx : s) idx += shift;
    simp.push_back(std::move(s));
  }
  return SimplicialSet(a.ambient_dim(), a.dim(), std::move(verts), std::move(simp));
}

double distance_to_simplex(const Vec& p, const std::vector<Vec>& c) {
  auto to_segment = [&](const Vec& a, const Vec& b) {
    const Vec d = b - a;
    const double len2 = d.squaredNorm();
    double t = len2 > 0.0 ? (p - a).dot(d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + t * d)).norm();
  };
  if (c.size() == 1) return (p - c[0]).norm();
  if (c.size() == 2) return to_segment(c[0], c[1]);
  // Triangle: solve the 2x2 normal equations for the foot point.
  const Vec u = c[1] - c[0];
  const Vec v = c[2] - c[0];
  const Vec w = p - c[0];
  const double uu = u.dot(u), uv = u.dot(v), vv = v.dot(v);
  const double wu = w.dot(u), wv = w.dot(v);
  const double det = uu * vv - uv * uv;
  if (det > 0.0) {
    const double s = (vv * wu - uv * wv) / det;
    const double t = (uu * wv - uv * wu) / det;
    if (s >= 0.0 && t >= 0.0 && s + t <= 1.0) return (w - s * u - t * v).norm();
  }
  return std::min({to_segment(c[0], c[1]), to_segment(c[1], c[2]), to_segment(c[2], c[0])});
}

double distance(const Vec& p, const SimplicialSet& e) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < e.size(); ++i) best = std::min(best, distance_to_simplex(p, e.corners(i)));
  return best;
}

double distance(const Vec& p, const PointCloudSet& e) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : e.points) best = std::min(best, (p - q).norm());
  return best;
}

}  // namespace vlab
