#pragma once

// Measure of image sets: unions of possibly overlapping segments or
// triangles where every point is counted once.

#include <array>
#include <utility>
#include <vector>

#include "varifold_lab/geometry.hpp"

namespace vlab {

using Interval = std::pair<double, double>;
using Triangle2 = std::array<Eigen::Vector2d, 3>;

/// Length of the union of closed intervals (endpoints in either order).
double interval_union_length(std::vector<Interval> intervals);

/// Area of the union of planar triangles, by a vertical slab sweep whose
/// breakpoints are all vertex abscissae and all pairwise edge crossings.
/// Inside a slab the union cross-section is an affine function of x, so
/// the midpoint rule is exact there.
double triangle_union_area(const std::vector<Triangle2>& triangles);

/// Area of the union of convex polygons (vertex lists in any order; the
/// convex hull of each list is used), by the same slab sweep.
double convex_polygon_union_area(const std::vector<std::vector<Eigen::Vector2d>>& polygons);

/// H^m of the union of the given simplices (m+1 corners each, m in {1,2})
/// in R^n. Collinear segments and coplanar triangles are merged before the
/// union is measured; degenerate simplices contribute nothing.
double image_measure(int dim, const std::vector<std::vector<Vec>>& simplices);

}  // namespace vlab
