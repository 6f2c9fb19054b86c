#pragma once

// The two convergence notions being compared: normalized local Hausdorff
// distance on sets and bounded-Lipschitz distance on discrete varifolds,
// plus the projected-mass functional used by the tangent-filling check.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "varifold_lab/sets.hpp"
#include "varifold_lab/transport.hpp"
#include "varifold_lab/varifold.hpp"

namespace vlab {

using SampledSet = std::variant<SimplicialSet, PointCloudSet>;

struct HausdorffReport {
  double value = 0.0;
  /// Upper bound on how far `value` may sit below the true distance: the
  /// normalized sampling gaps of both sups.
  double resolution = 0.0;
  std::size_t samples = 0;
};

/// d_{x,r}(X, Y) = sup_{z in X cap B} dist(z, Y) / r + sup_{y in Y cap B} dist(y, X) / r.
/// Distances to simplicial sets are exact; each sup runs over at least
/// `samples` points of the clipped set, refined by midpoint doubling until
/// the sup moves by less than 1e-4 r. The sup over an empty set is 0.
/// Throws InputError for r <= 0 or mismatched dimensions.
HausdorffReport hausdorff_local(const SampledSet& x_set, const SampledSet& y_set, const Vec& x, double r,
                                int samples = 1000);

enum class BLMethod { ExactLP, Dictionary };

std::string to_string(BLMethod m);
BLMethod bl_method_from_string(const std::string& s);

struct BLDistanceReport {
  double value = 0.0;
  BLMethod method = BLMethod::ExactLP;
  TransportPlan plan;   // exact-LP witness
  std::string witness;  // dictionary witness: id of the maximizing function
};

/// Fixed family of test functions phi(x, T) = s * a(x) * b(T) on
/// R^n x G(n,m), each normalized so that |phi| <= 1 and phi is 1-Lipschitz
/// for |x - y| + grassmann_distance(S, T).
///
/// Position factors a (y = (x - c) / rho, window w(y) = (1 - |y|^2)^2 on |y| < 1):
///   one; w; w*y_i; w*y_i*y_j (i <= j) on the domain ball (c, R); and w on the
///   balls of radius R/2 centred at c and c +- (R/2) e_i.
/// Plane factors b: one; projector entries P_ij (i <= j); grassmann_distance
///   to every coordinate m-plane and to 16 Haar planes drawn with seed 20240611.
/// Scale s = 1 / max(sup|a| sup|b|, sup|a| Lip b, sup|b| Lip a).
class TestDictionary {
 public:
  TestDictionary(int ambient_dim, int dim, const Ball& domain);

  std::size_t size() const { return ids_.size(); }
  const std::string& id(std::size_t k) const { return ids_[k]; }
  /// Value of function k at (x, T).
  double evaluate(std::size_t k, const Vec& x, const Plane& t) const;
  /// Integrals of every dictionary function against v.
  Eigen::VectorXd integrate(const DiscreteVarifold& v) const;

 private:
  struct PositionFeature {
    std::string name;
    Vec center;
    double radius = 0.0;  // 0 means the constant function
    int i = -1, j = -1;   // monomial indices, -1 for absent
    double sup = 1.0;
    double lip = 0.0;
  };
  struct PlaneFeature {
    std::string name;
    enum class Kind { One, Entry, Distance } kind = Kind::One;
    int i = 0, j = 0;
    std::optional<Plane> reference;
    double sup = 1.0;
    double lip = 0.0;
  };
  double position_value(const PositionFeature& f, const Vec& x) const;
  double plane_value(const PlaneFeature& f, const Plane& t) const;

  int ambient_dim_;
  int dim_;
  std::vector<PositionFeature> position_;
  std::vector<PlaneFeature> plane_;
  std::vector<std::string> ids_;
  std::vector<double> scale_;  // row-major (position, plane)
};

/// Smallest axis-aligned-box-centred ball holding every atom of both varifolds.
Ball bounding_ball(const DiscreteVarifold& v, const DiscreteVarifold& w);

/// Bounded-Lipschitz distance: sup of |int phi dV - int phi dW| over |phi| <= 1,
/// Lip(phi) <= 1 for |x - y| + grassmann_distance. ExactLP solves the
/// Kantorovich-Rubinstein transport with creation/destruction at price 1;
/// Dictionary maximizes over TestDictionary built on `domain` (or on the
/// bounding ball of the atoms) and is always a lower bound of ExactLP.
BLDistanceReport bl_distance(const DiscreteVarifold& v, const DiscreteVarifold& w, BLMethod method,
                             const std::optional<Ball>& domain = std::nullopt);

/// H^m of T_nat(eta_{x,r}(E cap B(x,r))), counting overlaps once. Exact for
/// m = 1 (interval union); for m = 2 exact up to the ball clip's polygon
/// error (slab sweep of the projected triangles).
double projected_mass(const SimplicialSet& e, const Vec& x, double r, const Plane& t);

enum class StrConVerdict { Holds, Fails, Inconclusive };
std::string to_string(StrConVerdict v);

struct StrConCell {
  int k;
  double r;
  double value;
};

struct StrConReport {
  std::vector<StrConCell> cells;       // k-major, then radius order
  std::vector<double> radii;
  std::vector<int> tail;               // k values entering the liminf estimate
  std::vector<double> tail_infimum;    // per radius
  double omega = 0.0;
  double tol = 0.0;
  StrConVerdict verdict = StrConVerdict::Inconclusive;
};

using SetSequence = std::function<SimplicialSet(int)>;

/// Number of trailing schedule entries standing in for "k large":
/// max(2, ceil(len / 4)), capped at len.
std::size_t tail_length(std::size_t schedule_length);

/// Tabulates projected_mass(E_k, x, r, T) over the schedule. The liminf in k
/// is estimated by the minimum over the tail: the last max(2, ceil(len/4))
/// entries of `ks`. Holds when every tail infimum exceeds (1 - tol) omega_m
/// and the infima do not drop by more than tol omega_m as r decreases; Fails
/// when the infimum at the smallest radius is below (1 - tol) omega_m.
StrConReport strcon_check(const SetSequence& sequence, const Vec& x, const Plane& t, const std::vector<double>& radii,
                          const std::vector<int>& ks, double tol = 0.02);

/// Same with the dyadic schedule 1, 2, 4, ..., k_max.
StrConReport strcon_check(const SetSequence& sequence, const Vec& x, const Plane& t, const std::vector<double>& radii,
                          int k_max, double tol = 0.02);

}  // namespace vlab
