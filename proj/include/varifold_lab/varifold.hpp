#pragma once

// Discrete varifolds: finite atomic measures on positions x G(n,m).

#include <vector>

#include "varifold_lab/geometry.hpp"
#include "varifold_lab/sets.hpp"

namespace vlab {

struct Atom {
  Vec position;
  Plane plane;
  double mass;
};

/// Atoms (position, plane, mass) with positive masses and planes in a
/// common G(n,m).
class DiscreteVarifold {
 public:
  DiscreteVarifold(int ambient_dim, int dim, std::vector<Atom> atoms = {});

  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return dim_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double total_mass() const;

  /// Atoms whose position lies in the closed ball.
  DiscreteVarifold restricted(const Ball& ball) const;
  /// Atom list concatenation (the sum of the two measures).
  DiscreteVarifold operator+(const DiscreteVarifold& other) const;
  /// Masses multiplied by s > 0.
  DiscreteVarifold scaled(double s) const;

 private:
  int ambient_dim_;
  int dim_;
  std::vector<Atom> atoms_;
};

/// var(E): atoms at quadrature points of every simplex carrying the simplex
/// tangent plane. For m = 1 each segment is cut into `quadrature_per_simplex`
/// equal pieces (composite midpoint rule). For m = 2, 1 gives the centroid,
/// 3 the symmetric three-point rule, any other q the centroids of the s^2
/// congruent subtriangles with s = ceil(sqrt(q)). Masses sum to the simplex
/// measure.
DiscreteVarifold var_of_set(const SimplicialSet& e, int quadrature_per_simplex = 1);

/// var(E) with roughly `atoms_per_unit_measure` atoms per unit m-measure
/// (at least one per simplex).
DiscreteVarifold var_of_set_by_density(const SimplicialSet& e, double atoms_per_unit_measure = 64.0);

/// Varifold of an irregular sample: every point spreads its mass over the
/// Grassmann sample according to the sample weights.
DiscreteVarifold var_of_pointcloud(const PointCloudSet& e, const GrassmannSample& haar);

/// ||V||(B) for the closed ball B.
double mass_in_ball(const DiscreteVarifold& v, const Ball& ball);

/// Mass-weighted mean projector of the atoms (zero matrix for an empty V).
Mat mean_projector(const DiscreteVarifold& v);

struct DensityReport {
  Vec center;
  std::vector<double> radii;            // strictly decreasing
  std::vector<double> ratios;           // ||V||(B(x,r)) / (omega_m r^m)
  std::vector<std::size_t> atom_counts;  // atoms inside each ball
  double density = 0.0;                 // ratio at the smallest reliable radius
  double reliable_radius = 0.0;
  bool smallest_radius_reliable = false;
};

/// Minimum atom count for a ball to count as resolved.
inline constexpr std::size_t kMinAtomsPerBall = 10;

/// Density ratios over a decreasing radius schedule. A ball holding fewer
/// than kMinAtomsPerBall atoms is unreliable; the extrapolated density is
/// the ratio at the smallest reliable radius. Throws InputError when radii
/// are not positive and strictly decreasing.
DensityReport density_report(const DiscreteVarifold& v, const Vec& x, const std::vector<double>& radii);

/// Pushforward under y -> (y - x) / r with masses multiplied by r^-m.
DiscreteVarifold blowup(const DiscreteVarifold& v, const Vec& x, double r);

}  // namespace vlab
