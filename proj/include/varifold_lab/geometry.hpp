#pragma once

// Linear-algebra substrate: m-planes in R^n, orthogonal projections, the
// Grassmannian operator-norm metric and Haar sampling on G(n,m).

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace vlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Volume of the unit ball in R^m (omega_1 = 2, omega_2 = pi).
double unit_ball_volume(int m);

/// An m-dimensional linear subspace of R^n, stored as an orthonormal frame
/// (n x m, columns) together with its orthogonal projector frame * frame^T.
/// Immutable after construction.
class Plane {
 public:
  /// Orthonormalizes the columns of `spanning` with modified Gram-Schmidt
  /// (two passes). Throws InputError when the columns are within 1e-12 of
  /// linear dependence or m > n.
  explicit Plane(const Mat& spanning);

  /// Line through the origin spanned by `direction`.
  static Plane line(const Vec& direction);
  /// Span of the standard basis vectors e_i for i in `axes`.
  static Plane coordinate(int ambient_dim, const std::vector<int>& axes);
  /// The whole of R^n viewed as an element of G(n,n).
  static Plane full(int ambient_dim);

  int ambient_dim() const { return static_cast<int>(frame_.rows()); }
  int dim() const { return static_cast<int>(frame_.cols()); }
  const Mat& frame() const { return frame_; }
  const Mat& projector() const { return projector_; }

  /// Orthonormal basis of the orthogonal complement, n x (n - m).
  Mat normal_frame() const;

 private:
  Mat frame_;
  Mat projector_;
};

/// Orthogonal projection of `point` onto `plane`. Throws InputError on a
/// dimension mismatch.
Vec project(const Plane& plane, const Vec& point);

/// Coordinates of `point` in the frame of `plane` (length m).
Vec plane_coordinates(const Plane& plane, const Vec& point);

/// Operator norm of the difference of the two projectors. Lies in [0, 1]
/// and equals sup over unit v in Q of |P^perp v|.
double grassmann_distance(const Plane& p, const Plane& q);

/// m-dimensional Jacobian of target's projector restricted to `source`:
/// the product of singular values of target.projector() * source.frame().
double projection_jacobian(const Plane& target, const Plane& source);

/// Finite weighted sample of G(n,m); weights sum to one.
struct GrassmannSample {
  std::vector<Plane> planes;
  std::vector<double> weights;
};

/// One Haar-distributed plane: orthonormalized i.i.d. standard Gaussians.
Plane haar_plane(int n, int m, std::mt19937_64& rng);

/// `count` Haar-distributed planes with equal weights. Deterministic for a
/// fixed seed. Throws InputError when m > n, m < 1 or count < 1.
GrassmannSample haar_sample(int n, int m, int count, std::uint64_t seed);

}  // namespace vlab
