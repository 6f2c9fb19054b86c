#include "varifold_lab/union_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varifold_lab/errors.hpp"

namespace vlab {

namespace {

using Pt2 = Eigen::Vector2d;

double cross(const Pt2& a, const Pt2& b) { return a.x() * b.y() - a.y() * b.x(); }

struct Edge2 {
  Pt2 p, q;
  double xmin, xmax;
  std::size_t tri;
};

double coordinate_scale(const std::vector<std::vector<Vec>>& simplices) {
  double s = 1.0;
  for (const auto& simplex : simplices) {
    for (const auto& p : simplex) s = std::max(s, p.cwiseAbs().maxCoeff());
  }
  return s;
}

double segment_union(const std::vector<std::vector<Vec>>& segments) {
  const double scale = coordinate_scale(segments);
  const double pos_tol = 1e-9 * scale;
  const double dir_tol = 1e-9;
  struct Line {
    Vec dir, foot;
    std::vector<Interval> spans;
  };
  std::vector<Line> lines;
  for (const auto& s : segments) {
    const Vec d = s[1] - s[0];
    const double len = d.norm();
    if (!(len > 1e-14 * scale)) continue;
    Vec u = d / len;
    Eigen::Index k = 0;
    u.cwiseAbs().maxCoeff(&k);
    if (u(k) < 0.0) u = -u;
    const Vec foot = s[0] - s[0].dot(u) * u;
    Line* home = nullptr;
    for (auto& l : lines) {
      if ((l.dir - u).norm() <= dir_tol && (l.foot - foot).norm() <= pos_tol) {
        home = &l;
        break;
      }
    }
    if (home == nullptr) {
      lines.push_back({u, foot, {}});
      home = &lines.back();
    }
    home->spans.emplace_back(s[0].dot(home->dir), s[1].dot(home->dir));
  }
  double total = 0.0;
  for (auto& l : lines) total += interval_union_length(std::move(l.spans));
  return total;
}

double triangle_union(const std::vector<std::vector<Vec>>& triangles) {
  const double scale = coordinate_scale(triangles);
  const double pos_tol = 1e-9 * scale;
  struct Sheet {
    Mat frame;
    Mat projector;
    Vec origin;
    std::vector<Triangle2> tris;
  };
  std::vector<Sheet> sheets;
  for (const auto& t : triangles) {
    const Vec u = t[1] - t[0];
    const Vec v = t[2] - t[0];
    const double area2 = std::sqrt(std::max(0.0, u.squaredNorm() * v.squaredNorm() - std::pow(u.dot(v), 2)));
    if (!(area2 > 1e-14 * scale * scale)) continue;
    Mat span(u.size(), 2);
    span.col(0) = u;
    span.col(1) = v;
    const Plane plane(span);
    const Vec origin = t[0] - plane.projector() * t[0];
    Sheet* home = nullptr;
    for (auto& sh : sheets) {
      if ((sh.projector - plane.projector()).cwiseAbs().maxCoeff() <= 1e-9 && (sh.origin - origin).norm() <= pos_tol) {
        home = &sh;
        break;
      }
    }
    if (home == nullptr) {
      sheets.push_back({plane.frame(), plane.projector(), origin, {}});
      home = &sheets.back();
    }
    Triangle2 flat;
    for (std::size_t i = 0; i < 3; ++i) flat[i] = home->frame.transpose() * (t[i] - home->origin);
    home->tris.push_back(flat);
  }
  double total = 0.0;
  for (const auto& sh : sheets) total += triangle_union_area(sh.tris);
  return total;
}

}  // namespace

double interval_union_length(std::vector<Interval> intervals) {
  for (auto& iv : intervals) {
    if (iv.first > iv.second) std::swap(iv.first, iv.second);
  }
  std::sort(intervals.begin(), intervals.end());
  double total = 0.0;
  bool open = false;
  double lo = 0.0, hi = 0.0;
  for (const auto& iv : intervals) {
    if (open && iv.first <= hi) {
      hi = std::max(hi, iv.second);
      continue;
    }
    if (open) total += hi - lo;
    lo = iv.first;
    hi = iv.second;
    open = true;
  }
  if (open) total += hi - lo;
  return total;
}

double triangle_union_area(const std::vector<Triangle2>& triangles) {
  std::vector<std::vector<Pt2>> polys;
  polys.reserve(triangles.size());
  for (const auto& t : triangles) polys.push_back({t[0], t[1], t[2]});
  return convex_polygon_union_area(polys);
}

double convex_polygon_union_area(const std::vector<std::vector<Eigen::Vector2d>>& polygons) {
  double scale = 1.0;
  for (const auto& poly : polygons) {
    for (const auto& p : poly) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  }
  // Lower and upper chains of each hull, both in increasing x (Andrew's
  // monotone chain), so a vertical section is two binary searches.
  struct Hull {
    std::vector<Pt2> lower, upper;
    double xmin, xmax;
  };
  std::vector<Hull> hulls;
  for (const auto& poly : polygons) {
    std::vector<Pt2> pts(poly.begin(), poly.end());
    std::sort(pts.begin(), pts.end(),
              [](const Pt2& a, const Pt2& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
    if (pts.size() < 3) continue;
    Hull h;
    for (const auto& p : pts) {
      while (h.lower.size() >= 2 &&
             cross(h.lower.back() - h.lower[h.lower.size() - 2], p - h.lower[h.lower.size() - 2]) <= 0.0)
        h.lower.pop_back();
      h.lower.push_back(p);
    }
    for (const auto& p : pts) {
      while (h.upper.size() >= 2 &&
             cross(h.upper.back() - h.upper[h.upper.size() - 2], p - h.upper[h.upper.size() - 2]) >= 0.0)
        h.upper.pop_back();
      h.upper.push_back(p);
    }
    double area2 = 0.0;
    for (std::size_t i = 0; i + 1 < h.upper.size(); ++i) area2 += cross(h.upper[i], h.upper[i + 1]);
    for (std::size_t i = h.lower.size() - 1; i > 0; --i) area2 += cross(h.lower[i], h.lower[i - 1]);
    if (!(std::abs(area2) > 2e-14 * scale * scale)) continue;
    h.xmin = pts.front().x();
    h.xmax = pts.back().x();
    hulls.push_back(std::move(h));
  }
  if (hulls.empty()) return 0.0;

  std::vector<Edge2> edges;
  std::vector<double> events;
  for (std::size_t i = 0; i < hulls.size(); ++i) {
    for (const auto* chain : {&hulls[i].lower, &hulls[i].upper}) {
      for (std::size_t k = 0; k + 1 < chain->size(); ++k) {
        const Pt2& a = (*chain)[k];
        const Pt2& b = (*chain)[k + 1];
        edges.push_back({a, b, a.x(), b.x(), i});
        events.push_back(a.x());
      }
      events.push_back(chain->back().x());
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge2& l, const Edge2& r) { return l.xmin < r.xmin; });
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge2& e1 = edges[i];
    const Pt2 d1 = e1.q - e1.p;
    for (std::size_t j = i + 1; j < edges.size() && edges[j].xmin <= e1.xmax; ++j) {
      const Edge2& e2 = edges[j];
      if (e1.tri == e2.tri) continue;
      const Pt2 d2 = e2.q - e2.p;
      const double den = cross(d1, d2);
      if (den == 0.0) continue;
      const Pt2 w = e2.p - e1.p;
      const double t = cross(w, d2) / den;
      const double s = cross(w, d1) / den;
      if (t > 0.0 && t < 1.0 && s > 0.0 && s < 1.0) events.push_back(e1.p.x() + t * d1.x());
    }
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  auto chain_y = [](const std::vector<Pt2>& chain, double x) {
    auto it = std::upper_bound(chain.begin(), chain.end(), x, [](double v, const Pt2& p) { return v < p.x(); });
    const Pt2& b = *it;
    const Pt2& a = *(it - 1);
    return a.y() + (x - a.x()) / (b.x() - a.x()) * (b.y() - a.y());
  };

  std::vector<std::size_t> order(hulls.size());
  for (std::size_t i = 0; i < hulls.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return hulls[a].xmin < hulls[b].xmin; });

  double area = 0.0;
  std::vector<Interval> sections;
  std::vector<std::size_t> active;
  std::size_t next = 0;
  for (std::size_t k = 0; k + 1 < events.size(); ++k) {
    const double x0 = events[k];
    const double x1 = events[k + 1];
    const double width = x1 - x0;
    if (!(width > 0.0)) continue;
    const double xm = 0.5 * (x0 + x1);
    while (next < order.size() && hulls[order[next]].xmin < xm) active.push_back(order[next++]);
    std::erase_if(active, [&](std::size_t i) { return hulls[i].xmax <= xm; });
    sections.clear();
    for (std::size_t i : active) sections.emplace_back(chain_y(hulls[i].lower, xm), chain_y(hulls[i].upper, xm));
    area += width * interval_union_length(sections);
  }
  return area;
}

double image_measure(int dim, const std::vector<std::vector<Vec>>& simplices) {
  for (const auto& s : simplices) {
    if (static_cast<int>(s.size()) != dim + 1) throw InputError("image_measure: simplex arity does not match m");
  }
  if (dim == 1) return segment_union(simplices);
  if (dim == 2) return triangle_union(simplices);
  throw InputError("image_measure supports m = 1 or m = 2 only");
}

}  // namespace vlab
