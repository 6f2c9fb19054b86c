#pragma once

// Built-in set sequences E_k with documented limits and documented truth of
// each convergence hypothesis.

#include <functional>
#include <string>
#include <vector>

#include "varifold_lab/sets.hpp"

namespace vlab {

struct FamilyInfo {
  std::string name;
  int ambient_dim;
  int dim;
  bool point_cloud;         // sequence is a PointCloudSet (see scenario_cloud)
  std::string limit;        // human-readable limit set
  Ball domain;              // the open set U, modelled as a ball
  Vec base_point;           // natural x for local checks
  // Documented truth of the hypotheses along the sequence, at base_point
  // (the Y-cone vertex has no tangent line, so the tangent-filling check fails there).
  bool hausdorff_converges;
  bool mass_converges;
  bool strcon_holds;
};

/// Registry order: segment, zigzag, graph_decay, shrinking_bump, escape,
/// ycone, ycone_approx, surface_decay, cantor4.
const std::vector<FamilyInfo>& family_registry();
/// Throws ConfigError for an unknown name.
const FamilyInfo& family_info(const std::string& family);

/// E_k for a simplicial family. `resolution` is the number of segments over
/// unit length (m = 1) or the number of grid squares (m = 2, rounded to a
/// square). Deterministic. Throws ConfigError for an unknown or point-cloud
/// family and InputError for k < 1.
SimplicialSet scenario_sequence(const std::string& family, int k, int resolution = 256);

/// E_k for a point-cloud family.
PointCloudSet scenario_cloud(const std::string& family, int k);

/// The documented limit set of a simplicial family.
SimplicialSet scenario_limit(const std::string& family, int resolution = 256);

/// Three arms from `vertex` to the unit points at 90, 210 and 330 degrees,
/// each cut into `pieces_per_arm` segments.
SimplicialSet y_cone(const Vec& vertex, int pieces_per_arm);

/// Graph z = f(x, y) over [x0, x0 + side] x [y0, y0 + side] in R^3 on a
/// cells x cells grid, two triangles per cell.
SimplicialSet surface_graph(double x0, double y0, double side, int cells,
                            const std::function<double(double, double)>& f);

}  // namespace vlab
