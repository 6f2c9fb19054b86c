#pragma once

// Integrands F(x, T) > 0 on R^n x G(n,m), the energies Phi_F, and numerical
// (semi-)ellipticity audits against a registry of spanning competitors.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "varifold_lab/sets.hpp"
#include "varifold_lab/varifold.hpp"

namespace vlab {

using IntegrandFn = std::function<double(const Vec& x, const Plane& t)>;
using PositionFn = std::function<double(const Vec& x)>;

class Integrand {
 public:
  /// `inf`/`sup` are the declared bounds inf F and sup F (0 < inf <= sup).
  /// `c` is the ellipticity constant function, when one is claimed.
  Integrand(std::string name, int ambient_dim, int dim, IntegrandFn f, double inf, double sup,
            std::optional<PositionFn> c = std::nullopt);

  const std::string& name() const { return name_; }
  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return dim_; }
  double inf() const { return inf_; }
  double sup() const { return sup_; }
  /// sup F / inf F < infinity.
  bool bounded() const;
  bool has_ellipticity_constant() const { return c_.has_value(); }
  /// Throws ConfigError when no constant was supplied.
  double ellipticity_constant(const Vec& x) const;

  double operator()(const Vec& x, const Plane& t) const { return f_(x, t); }

 private:
  std::string name_;
  int ambient_dim_;
  int dim_;
  IntegrandFn f_;
  double inf_;
  double sup_;
  std::optional<PositionFn> c_;
};

/// Phi_F(V) = sum over atoms of mass * F(position, plane).
double phi(const Integrand& f, const DiscreteVarifold& v);

/// F^x(y, T) = F(x, T).
Integrand frozen(const Integrand& f, const Vec& x);

/// F_{x,r}(y, T) = F(x + r y, T): F read in blow-up coordinates around x,
/// so that Phi_{F_{x,r}}(blowup(V, x, r)) = r^-m Phi_F(V). Throws InputError
/// for r <= 0.
Integrand rescaled(const Integrand& f, const Vec& x, double r);

struct ModulusReport {
  Vec center;
  std::vector<double> radii;
  std::vector<double> deviation;  // sup over the test grid of |F_{x,r} - F^x|
};

/// Continuity modulus of F at x: for each r, the sup of |F_{x,r}(y,T) - F^x(y,T)|
/// over y on a lattice of B(0,1) (spacing 1/4) and T over the coordinate
/// m-planes plus 16 Haar planes (seed 7).
ModulusReport modulus(const Integrand& f, const Vec& x, const std::vector<double>& radii);

/// Named integrands:
///   area               F = 1                                  (c = 1)
///   x_weighted         F = 1 + |x|^2 / (1 + |x|^2)            (c = 1)
///   aniso_quadratic    F = 1 + sqrt(det(Q^T A Q)), Q a frame of T,
///                      A = diag(1, 4, 9, ...)                 (c = 1)
///   aniso_nonelliptic  F = 1 + 9 (1 - J(T, Delta)), J the projection
///                      Jacobian onto Delta = span((e1 + e2)/sqrt 2, e3, ..., e_{m+1})
/// Throws ConfigError for an unknown name.
Integrand make_integrand(const std::string& name, int ambient_dim, int dim);
const std::vector<std::string>& integrand_names();

/// Tabulated integrand: values on a regular position grid times a plane
/// grid, interpolated multilinearly in position. For lines in R^2 the plane
/// grid is `angle_count` equally spaced angles in [0, pi), interpolated
/// linearly and periodically; otherwise `planes` lists the grid planes and
/// the value at the nearest listed plane (in grassmann_distance) is used.
struct IntegrandTable {
  std::string name = "tabulated";
  int ambient_dim = 2;
  int dim = 1;
  Vec lo, hi;
  std::vector<int> counts;   // nodes per axis, each >= 2
  int angle_count = 0;       // lines in R^2 only
  std::vector<Plane> planes; // everything else
  std::vector<double> values;  // [position node (row-major, last axis fastest)][plane]
};
Integrand tabulated_integrand(const IntegrandTable& table);

// ---------------------------------------------------------------------------
// Ellipticity audit

struct Competitor {
  std::string id;
  SimplicialSet set;
};

/// D = T cap B(0,1): the diameter segment (m = 1) or the inscribed
/// `polygon_sides`-gon fan (m = 2), whose boundary every registry competitor
/// of the same plane shares.
SimplicialSet flat_disk(const Plane& t, int polygon_sides = 64);

/// Registry of compact sets spanning the boundary of flat_disk(t), in id order.
/// m = 1: two-segment detours through h*nu (h in 0.1, 0.25, 0.5, 1, both
///   normal sides), tilted cones through a*t + h*nu, zigzags with 2 and 4 teeth
///   of slope 1 against T, and D with a normal spur of length 0.5.
/// m = 2: tent cones with apex h*nu (h in 0.1, 0.25, 0.5), two tilted tents
///   and paraboloid caps h (1 - rho^2) nu for h in 0.25, -0.5.
std::vector<Competitor> competitor_registry(const Plane& t);

struct EllipticityRow {
  std::string competitor;
  int plane_index;      // index into EllipticityReport::planes
  double measure_s;
  double measure_d;
  double phi_s;         // Phi_{F^x}(S)
  double phi_d;         // Phi_{F^x}(D)
  double margin;        // phi_s - phi_d
  double elliptic_margin;  // margin - c(x) (measure_s - measure_d); NaN without c
  bool certificate;     // either margin below -1e-12
};

struct EllipticityReport {
  std::string integrand;
  Vec x;
  std::vector<Plane> planes;
  std::vector<EllipticityRow> rows;  // plane-major, registry order within a plane
  double min_margin = 0.0;
  double min_elliptic_margin = 0.0;  // NaN without c
  std::size_t certificates = 0;
};

/// Margins Phi_{F^x}(S) - Phi_{F^x}(D) for the given competitors of plane t.
/// Throws InputError on a dimension mismatch.
EllipticityReport semi_ellipticity_audit(const Integrand& f, const Vec& x, const Plane& t,
                                         const std::vector<Competitor>& competitors);

/// Audit over `t` (when given) plus `haar_planes` Haar planes drawn with
/// `seed`, each against its competitor_registry.
EllipticityReport ellipticity_scan(const Integrand& f, const Vec& x, const std::optional<Plane>& t,
                                   int haar_planes = 16, std::uint64_t seed = 11);

/// Largest c in `grid` with margin - c (measure_s - measure_d) >= -1e-12 on
/// every row of the report; nullopt when none qualifies. Linear scan.
std::optional<double> best_ellipticity_constant(const EllipticityReport& report, const std::vector<double>& grid);

}  // namespace vlab
