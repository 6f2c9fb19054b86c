#include "varifold_lab/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "varifold_lab/errors.hpp"

namespace vlab {

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
Vec v3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

// Polyline through (x, f(x)) for x on a uniform grid of [0, 1].
SimplicialSet graph_polyline(int pieces, const std::function<double(double)>& f) {
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(pieces) + 1);
  for (int i = 0; i <= pieces; ++i) {
    const double x = static_cast<double>(i) / pieces;
    pts.push_back(v2(x, f(x)));
  }
  return SimplicialSet::polyline(pts);
}

SimplicialSet zigzag(int k, int resolution) {
  // k teeth, each one up and one down segment of slope +-1 and width 1/(2k)
  const int segments = 2 * k;
  const int sub = std::max(1, resolution / segments);
  const double h = 1.0 / segments;
  std::vector<Vec> pts;
  for (int t = 0; t < segments; ++t) {
    const Vec a = v2(t * h, (t % 2 == 0) ? 0.0 : h);
    const Vec b = v2((t + 1) * h, (t % 2 == 0) ? h : 0.0);
    for (int j = (t == 0 ? 0 : 1); j <= sub; ++j) {
      const double s = static_cast<double>(j) / sub;
      pts.push_back((1.0 - s) * a + s * b);
    }
  }
  return SimplicialSet::polyline(pts);
}

SimplicialSet bump(int k, int resolution) {
  const double w = 0.5 / k;
  // Breakpoints of the tent must be grid nodes, so insert them explicitly.
  std::vector<double> xs;
  for (int i = 0; i <= resolution; ++i) xs.push_back(static_cast<double>(i) / resolution);
  xs.push_back(0.5 - w);
  xs.push_back(0.5 + w);
  xs.push_back(0.5);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }), xs.end());
  std::vector<Vec> pts;
  for (double x : xs) pts.push_back(v2(x, std::max(0.0, w - std::abs(x - 0.5))));
  return SimplicialSet::polyline(pts);
}

int grid_cells(int resolution) { return std::max(2, static_cast<int>(std::lround(std::sqrt(resolution)))); }

std::vector<FamilyInfo> build_registry() {
  const Ball unit_interval_ball(v2(0.5, 0.0), 0.5);
  std::vector<FamilyInfo> r;
  r.push_back({"segment", 2, 1, false, "segment [0,1]x{0}", unit_interval_ball, v2(0.5, 0.0), true, true, true});
  r.push_back({"zigzag", 2, 1, false, "segment [0,1]x{0}", unit_interval_ball, v2(0.5, 0.0), true, false, true});
  r.push_back({"graph_decay", 2, 1, false, "segment [0,1]x{0}", unit_interval_ball, v2(0.5, 0.0), true, true, true});
  r.push_back({"shrinking_bump", 2, 1, false, "segment [0,1]x{0}", unit_interval_ball, v2(0.5, 0.0), true, true, true});
  r.push_back({"escape", 2, 1, false, "segment [0,1]x{0}", unit_interval_ball, v2(0.5, 0.0), false, true, false});
  r.push_back({"ycone", 2, 1, false, "Y cone at 0 cut by B(0,1)", Ball(v2(0.0, 0.0), 1.0), v2(0.0, 0.0), true, true,
               false});
  r.push_back({"ycone_approx", 2, 1, false, "Y cone at 0 cut by B(0,1)", Ball(v2(0.0, 0.0), 1.0), v2(0.0, 0.0), true,
               true, false});
  r.push_back({"surface_decay", 3, 2, false, "square [0,1]^2x{0}", Ball(v3(0.5, 0.5, 0.0), 0.5), v3(0.5, 0.5, 0.0),
               true, true, true});
  r.push_back({"cantor4", 2, 1, true, "four-corner Cantor set", Ball(v2(0.5, 0.5), 0.75), v2(0.5, 0.5), true, true,
               false});
  return r;
}

}  // namespace

const std::vector<FamilyInfo>& family_registry() {
  static const std::vector<FamilyInfo> registry = build_registry();
  return registry;
}

const FamilyInfo& family_info(const std::string& family) {
  for (const auto& f : family_registry()) {
    if (f.name == family) return f;
  }
  throw ConfigError("unknown scenario family '" + family + "'");
}

SimplicialSet y_cone(const Vec& vertex, int pieces_per_arm) {
  if (vertex.size() != 2) throw InputError("y_cone: vertex must lie in R^2");
  std::vector<std::vector<Vec>> soup;
  for (double deg : {90.0, 210.0, 330.0}) {
    const double a = deg * std::numbers::pi / 180.0;
    const Vec end = v2(std::cos(a), std::sin(a));
    for (int j = 0; j < pieces_per_arm; ++j) {
      const double s0 = static_cast<double>(j) / pieces_per_arm;
      const double s1 = static_cast<double>(j + 1) / pieces_per_arm;
      soup.push_back({(1.0 - s0) * vertex + s0 * end, (1.0 - s1) * vertex + s1 * end});
    }
  }
  return SimplicialSet::from_soup(2, 1, soup);
}

SimplicialSet surface_graph(double x0, double y0, double side, int cells,
                            const std::function<double(double, double)>& f) {
  if (cells < 1) throw InputError("surface_graph: need at least one cell");
  std::vector<Vec> verts;
  for (int i = 0; i <= cells; ++i) {
    for (int j = 0; j <= cells; ++j) {
      const double x = x0 + side * i / cells;
      const double y = y0 + side * j / cells;
      verts.push_back(v3(x, y, f(x, y)));
    }
  }
  auto id = [cells](int i, int j) { return i * (cells + 1) + j; };
  std::vector<SimplicialSet::Simplex> tris;
  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < cells; ++j) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return SimplicialSet(3, 2, std::move(verts), std::move(tris));
}

SimplicialSet scenario_sequence(const std::string& family, int k, int resolution) {
  const FamilyInfo& info = family_info(family);
  if (info.point_cloud) throw ConfigError("family '" + family + "' is a point cloud; use scenario_cloud");
  if (k < 1) throw InputError("scenario index k must be at least 1");
  if (resolution < 1) throw InputError("scenario resolution must be at least 1");
  const double kd = k;
  if (family == "segment") return SimplicialSet::segment(v2(0, 0), v2(1, 0), resolution);
  if (family == "zigzag") return zigzag(k, resolution);
  if (family == "graph_decay") {
    return graph_polyline(resolution, [kd](double x) { return std::sin(2.0 * std::numbers::pi * x) / (kd * kd); });
  }
  if (family == "shrinking_bump") return bump(k, resolution);
  if (family == "escape") return SimplicialSet::segment(v2(0, 2), v2(1, 2), resolution);
  const int arm = std::max(1, resolution / 4);
  if (family == "ycone") return y_cone(v2(0, 0), arm);
  if (family == "ycone_approx") {
    const double a = std::numbers::pi / 5.0;
    return y_cone(v2(std::cos(a) / kd, std::sin(a) / kd), arm);
  }
  // surface_decay
  return surface_graph(0.0, 0.0, 1.0, grid_cells(resolution), [kd](double x, double y) {
    return std::sin(2.0 * std::numbers::pi * x) * std::sin(2.0 * std::numbers::pi * y) / (kd * kd);
  });
}

PointCloudSet scenario_cloud(const std::string& family, int k) {
  const FamilyInfo& info = family_info(family);
  if (!info.point_cloud) throw ConfigError("family '" + family + "' is simplicial; use scenario_sequence");
  if (k < 0 || k > 10) throw InputError("cantor4 level must lie in [0, 10]");
  // Level-k squares of the four-corner Cantor construction on [0,1]^2:
  // every square of side s keeps its four corner squares of side s/4.
  std::vector<Vec> corners{v2(0, 0)};
  double side = 1.0;
  for (int level = 0; level < k; ++level) {
    std::vector<Vec> next;
    next.reserve(corners.size() * 4);
    const double child = side / 4.0;
    for (const auto& c : corners) {
      for (double dx : {0.0, side - child}) {
        for (double dy : {0.0, side - child}) next.push_back(c + v2(dx, dy));
      }
    }
    corners = std::move(next);
    side = child;
  }
  std::vector<Vec> centers;
  centers.reserve(corners.size());
  for (const auto& c : corners) centers.push_back(c + v2(side / 2, side / 2));
  std::vector<double> masses(centers.size(), 1.0 / static_cast<double>(centers.size()));
  return PointCloudSet(2, 1, std::move(centers), std::move(masses));
}

SimplicialSet scenario_limit(const std::string& family, int resolution) {
  const FamilyInfo& info = family_info(family);
  if (info.point_cloud) throw ConfigError("family '" + family + "' has no simplicial limit");
  if (info.name == "ycone" || info.name == "ycone_approx") return y_cone(v2(0, 0), std::max(1, resolution / 4));
  if (info.name == "surface_decay") {
    return surface_graph(0.0, 0.0, 1.0, grid_cells(resolution), [](double, double) { return 0.0; });
  }
  return SimplicialSet::segment(v2(0, 0), v2(1, 0), resolution);
}

}  // namespace vlab
