#include "varifold_lab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "varifold_lab/errors.hpp"

namespace vlab {

namespace {

constexpr double kDegenerateTol = 1e-12;

Mat orthonormalize(const Mat& spanning) {
  const Eigen::Index n = spanning.rows();
  const Eigen::Index m = spanning.cols();
  if (m < 1 || n < 1) throw InputError("plane needs at least one spanning vector");
  if (m > n) {
    throw InputError("plane dimension " + std::to_string(m) + " exceeds ambient dimension " +
                     std::to_string(n));
  }
  Mat q = spanning;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double original = spanning.col(j).norm();
    if (!(original > 0.0) || !std::isfinite(original)) {
      throw InputError("spanning vector " + std::to_string(j) + " is zero or non-finite");
    }
    // Two MGS sweeps against the already accepted columns.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
      }
    }
    const double residual = q.col(j).norm();
    if (residual <= kDegenerateTol * original) {
      throw InputError("spanning vectors are linearly dependent");
    }
    q.col(j) /= residual;
  }
  return q;
}

}  // namespace

double unit_ball_volume(int m) {
  return std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

Plane::Plane(const Mat& spanning)
    : frame_(orthonormalize(spanning)), projector_(frame_ * frame_.transpose()) {}

Plane Plane::line(const Vec& direction) {
  Mat m(direction.size(), 1);
  m.col(0) = direction;
  return Plane(m);
}

Plane Plane::coordinate(int ambient_dim, const std::vector<int>& axes) {
  Mat m = Mat::Zero(ambient_dim, static_cast<Eigen::Index>(axes.size()));
  for (std::size_t j = 0; j < axes.size(); ++j) {
    if (axes[j] < 0 || axes[j] >= ambient_dim) throw InputError("coordinate axis out of range");
    m(axes[j], static_cast<Eigen::Index>(j)) = 1.0;
  }
  return Plane(m);
}

Plane Plane::full(int ambient_dim) { return Plane(Mat::Identity(ambient_dim, ambient_dim)); }

Mat Plane::normal_frame() const {
  const int n = ambient_dim();
  const int m = dim();
  Eigen::SelfAdjointEigenSolver<Mat> eig(Mat::Identity(n, n) - projector_);
  // Eigenvalues ascend: the last n - m belong to the complement.
  return eig.eigenvectors().rightCols(n - m);
}

Vec project(const Plane& plane, const Vec& point) {
  if (point.size() != plane.ambient_dim()) {
    throw InputError("point of length " + std::to_string(point.size()) +
                     " projected onto plane in R^" + std::to_string(plane.ambient_dim()));
  }
  return plane.projector() * point;
}

Vec plane_coordinates(const Plane& plane, const Vec& point) {
  if (point.size() != plane.ambient_dim()) throw InputError("point/plane dimension mismatch");
  return plane.frame().transpose() * point;
}

double grassmann_distance(const Plane& p, const Plane& q) {
  if (p.ambient_dim() != q.ambient_dim() || p.dim() != q.dim()) {
    throw InputError("grassmann_distance needs planes in the same G(n,m)");
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(p.projector() - q.projector(), Eigen::EigenvaluesOnly);
  const double norm = eig.eigenvalues().cwiseAbs().maxCoeff();
  return std::clamp(norm, 0.0, 1.0);
}

double projection_jacobian(const Plane& target, const Plane& source) {
  if (target.ambient_dim() != source.ambient_dim() || target.dim() != source.dim()) {
    throw InputError("projection_jacobian needs planes in the same G(n,m)");
  }
  const Mat image = target.projector() * source.frame();
  Eigen::JacobiSVD<Mat> svd(image);
  return svd.singularValues().prod();
}

Plane haar_plane(int n, int m, std::mt19937_64& rng) {
  if (m < 1 || m > n) throw InputError("haar sampling needs 1 <= m <= n");
  std::normal_distribution<double> gauss(0.0, 1.0);
  // Gaussian columns are almost surely independent; redraw on the
  // vanishing chance they are not.
  for (;;) {
    Mat g(n, m);
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < n; ++i) g(i, j) = gauss(rng);
    }
    try {
      return Plane(g);
    } catch (const InputError&) {
    }
  }
}

GrassmannSample haar_sample(int n, int m, int count, std::uint64_t seed) {
  if (count < 1) throw InputError("haar_sample needs count >= 1");
  if (m < 1 || m > n) throw InputError("haar_sample needs 1 <= m <= n");
  GrassmannSample sample;
  sample.planes.reserve(static_cast<std::size_t>(count));
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    sample.planes.push_back(m == n ? Plane::full(n) : haar_plane(n, m, rng));
  }
  sample.weights.assign(static_cast<std::size_t>(count), 1.0 / count);
  return sample;
}

}  // namespace vlab
