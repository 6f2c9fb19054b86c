#pragma once

// Computable m-dimensional sets in R^n: weighted simplicial complexes for
// rectifiable sets (m in {1, 2}) and point clouds for irregular samples.

#include <vector>

#include "varifold_lab/geometry.hpp"

namespace vlab {

/// Closed ball B(center, radius), radius > 0.
struct Ball {
  Ball(Vec c, double r);
  Vec center;
  double radius;
  bool contains(const Vec& p) const { return (p - center).norm() <= radius; }
};

/// How a ball clip approximated the boundary sphere. Segment clips are
/// exact and leave both fields at zero.
struct ClipDiagnostics {
  int boundary_polygon_edges = 0;  // largest inscribed polygon used on a triangle
  double area_error_bound = 0.0;   // upper bound on m-measure lost to polygonization
};

/// Vertices plus (m+1)-tuples of vertex indices. Every simplex carries its
/// tangent plane and m-measure, computed at construction. Simplices with
/// m-measure <= 1e-14 are rejected.
class SimplicialSet {
 public:
  using Simplex = std::vector<int>;

  SimplicialSet(int ambient_dim, int dim, std::vector<Vec> vertices, std::vector<Simplex> simplices);

  static SimplicialSet empty(int ambient_dim, int dim);
  /// Polyline through `points` (m = 1).
  static SimplicialSet polyline(const std::vector<Vec>& points);
  /// Segment [a, b] cut into `pieces` equal segments.
  static SimplicialSet segment(const Vec& a, const Vec& b, int pieces = 1);
  /// Independent simplices, each given by its m+1 corner points. Corners
  /// that would give a degenerate simplex are dropped silently.
  static SimplicialSet from_soup(int ambient_dim, int dim, const std::vector<std::vector<Vec>>& soup);

  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return dim_; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  std::size_t size() const { return simplices_.size(); }
  bool empty() const { return simplices_.empty(); }

  const Plane& tangent(std::size_t i) const { return tangents_[i]; }
  double simplex_measure(std::size_t i) const { return measures_[i]; }
  /// Corner points of simplex i.
  std::vector<Vec> corners(std::size_t i) const;
  Vec centroid(std::size_t i) const;

  const ClipDiagnostics& diagnostics() const { return diagnostics_; }
  void set_diagnostics(const ClipDiagnostics& d) { diagnostics_ = d; }

 private:
  int ambient_dim_;
  int dim_;
  std::vector<Vec> vertices_;
  std::vector<Simplex> simplices_;
  std::vector<Plane> tangents_;
  std::vector<double> measures_;
  ClipDiagnostics diagnostics_;
};

/// Weighted samples of a purely unrectifiable set.
struct PointCloudSet {
  PointCloudSet(int ambient_dim, int dim, std::vector<Vec> points, std::vector<double> masses);
  int ambient_dim;
  int dim;
  std::vector<Vec> points;
  std::vector<double> masses;
  double total_mass() const;
};

/// m-measure of a simplex given by its corners (0 for degenerate input).
double simplex_measure(const std::vector<Vec>& corners);

/// Exact m-measure: the sum of simplex measures.
double measure(const SimplicialSet& e);

/// E intersected with the closed ball. Segments are cut exactly; triangles
/// are clipped against an inscribed polygon of the ball's trace on their
/// plane, fine enough that the area lost stays below 1e-6 r^2, then fan
/// triangulated. The bound actually incurred is in diagnostics().
SimplicialSet restrict(const SimplicialSet& e, const Ball& ball);

/// The same clipping as restrict, but one convex piece per simplex that meets
/// the ball: segment endpoints for curves, polygon corners in order for
/// surfaces (not triangulated).
std::vector<std::vector<Vec>> clip_pieces(const SimplicialSet& e, const Ball& ball, ClipDiagnostics* diag = nullptr);

/// Image under y -> (y - x) / r. Throws InputError for r <= 0.
SimplicialSet rescale(const SimplicialSet& e, const Vec& x, double r);

/// Union of the simplex lists (vertices are not merged).
SimplicialSet concat(const SimplicialSet& a, const SimplicialSet& b);

/// Euclidean distance from p to the simplex with the given corners.
double distance_to_simplex(const Vec& p, const std::vector<Vec>& corners);
/// Distance from p to the set; +infinity for an empty set.
double distance(const Vec& p, const SimplicialSet& e);
double distance(const Vec& p, const PointCloudSet& e);

}  // namespace vlab
