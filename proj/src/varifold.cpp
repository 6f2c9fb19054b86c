#include "varifold_lab/varifold.hpp"

#include <cmath>
#include <string>

#include "varifold_lab/errors.hpp"

namespace vlab {

DiscreteVarifold::DiscreteVarifold(int ambient_dim, int dim, std::vector<Atom> atoms)
    : ambient_dim_(ambient_dim), dim_(dim), atoms_(std::move(atoms)) {
  if (dim_ < 1 || dim_ > ambient_dim_) throw InputError("varifold needs 1 <= m <= n");
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (a.position.size() != ambient_dim_) throw InputError("atom " + std::to_string(i) + " position has wrong length");
    if (a.plane.ambient_dim() != ambient_dim_ || a.plane.dim() != dim_) {
      throw InputError("atom " + std::to_string(i) + " plane is not in G(n,m)");
    }
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) throw InputError("atom " + std::to_string(i) + " mass must be positive");
  }
}

double DiscreteVarifold::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.mass;
  return s;
}

DiscreteVarifold DiscreteVarifold::restricted(const Ball& ball) const {
  std::vector<Atom> kept;
  for (const auto& a : atoms_) {
    if (ball.contains(a.position)) kept.push_back(a);
  }
  return DiscreteVarifold(ambient_dim_, dim_, std::move(kept));
}

DiscreteVarifold DiscreteVarifold::operator+(const DiscreteVarifold& other) const {
  if (other.ambient_dim_ != ambient_dim_ || other.dim_ != dim_) throw InputError("varifold sum needs matching (n, m)");
  std::vector<Atom> all = atoms_;
  all.insert(all.end(), other.atoms_.begin(), other.atoms_.end());
  return DiscreteVarifold(ambient_dim_, dim_, std::move(all));
}

DiscreteVarifold DiscreteVarifold::scaled(double s) const {
  if (!(s > 0.0)) throw InputError("varifold scaling factor must be positive");
  std::vector<Atom> out = atoms_;
  for (auto& a : out) a.mass *= s;
  return DiscreteVarifold(ambient_dim_, dim_, std::move(out));
}

DiscreteVarifold var_of_set(const SimplicialSet& e, int q) {
  if (q < 1) throw InputError("var_of_set needs at least one quadrature point per simplex");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto c = e.corners(i);
    const Plane& plane = e.tangent(i);
    const double mu = e.simplex_measure(i);
    if (e.dim() == 1) {
      for (int j = 0; j < q; ++j) {
        const double t = (j + 0.5) / q;
        atoms.push_back({c[0] + t * (c[1] - c[0]), plane, mu / q});
      }
    } else if (q == 3) {
      for (int j = 0; j < 3; ++j) {
        const Vec p = (2.0 / 3.0) * c[static_cast<std::size_t>(j)] +
                      (1.0 / 6.0) * (c[static_cast<std::size_t>((j + 1) % 3)] + c[static_cast<std::size_t>((j + 2) % 3)]);
        atoms.push_back({p, plane, mu / 3.0});
      }
    } else {
      const int s = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(q)) - 1e-12));
      const double w = mu / (s * s);
      const Vec u = (c[1] - c[0]) / s;
      const Vec v = (c[2] - c[0]) / s;
      // Upward subtriangles (a, b) and downward ones sharing the same lattice.
      for (int a = 0; a < s; ++a) {
        for (int b = 0; a + b < s; ++b) {
          atoms.push_back({c[0] + (a + 1.0 / 3.0) * u + (b + 1.0 / 3.0) * v, plane, w});
          if (a + b + 1 < s) atoms.push_back({c[0] + (a + 2.0 / 3.0) * u + (b + 2.0 / 3.0) * v, plane, w});
        }
      }
    }
  }
  return DiscreteVarifold(e.ambient_dim(), e.dim(), std::move(atoms));
}

DiscreteVarifold var_of_set_by_density(const SimplicialSet& e, double atoms_per_unit_measure) {
  if (!(atoms_per_unit_measure > 0.0)) throw InputError("atom density must be positive");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const int q = std::max(1, static_cast<int>(std::ceil(e.simplex_measure(i) * atoms_per_unit_measure - 1e-9)));
    const SimplicialSet one(e.ambient_dim(), e.dim(), e.corners(i), {e.dim() == 1 ? SimplicialSet::Simplex{0, 1} : SimplicialSet::Simplex{0, 1, 2}});
    const auto part = var_of_set(one, q);
    atoms.insert(atoms.end(), part.atoms().begin(), part.atoms().end());
  }
  return DiscreteVarifold(e.ambient_dim(), e.dim(), std::move(atoms));
}

DiscreteVarifold var_of_pointcloud(const PointCloudSet& e, const GrassmannSample& haar) {
  if (haar.planes.empty()) throw InputError("var_of_pointcloud needs a nonempty Grassmann sample");
  if (haar.planes.size() != haar.weights.size()) throw InputError("Grassmann sample needs one weight per plane");
  for (const auto& p : haar.planes) {
    if (p.ambient_dim() != e.ambient_dim || p.dim() != e.dim) throw InputError("Grassmann sample is not in G(n,m) of the cloud");
  }
  std::vector<Atom> atoms;
  atoms.reserve(e.points.size() * haar.planes.size());
  for (std::size_t i = 0; i < e.points.size(); ++i) {
    for (std::size_t j = 0; j < haar.planes.size(); ++j) {
      if (haar.weights[j] > 0.0) atoms.push_back({e.points[i], haar.planes[j], e.masses[i] * haar.weights[j]});
    }
  }
  return DiscreteVarifold(e.ambient_dim, e.dim, std::move(atoms));
}

double mass_in_ball(const DiscreteVarifold& v, const Ball& ball) {
  if (ball.center.size() != v.ambient_dim()) throw InputError("ball and varifold live in different dimensions");
  const double r2 = ball.radius * ball.radius;
  double s = 0.0;
  for (const auto& a : v.atoms()) {
    if ((a.position - ball.center).squaredNorm() <= r2) s += a.mass;
  }
  return s;
}

Mat mean_projector(const DiscreteVarifold& v) {
  Mat acc = Mat::Zero(v.ambient_dim(), v.ambient_dim());
  const double total = v.total_mass();
  if (total <= 0.0) return acc;
  for (const auto& a : v.atoms()) acc += a.mass * a.plane.projector();
  return acc / total;
}

DensityReport density_report(const DiscreteVarifold& v, const Vec& x, const std::vector<double>& radii) {
  if (radii.empty()) throw InputError("density_report needs at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw InputError("density radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw InputError("density radii must be strictly decreasing");
  }
  DensityReport rep;
  rep.center = x;
  rep.radii = radii;
  const double omega = unit_ball_volume(v.dim());
  for (double r : radii) {
    std::size_t count = 0;
    double mass = 0.0;
    for (const auto& a : v.atoms()) {
      if ((a.position - x).squaredNorm() <= r * r) {
        ++count;
        mass += a.mass;
      }
    }
    rep.atom_counts.push_back(count);
    rep.ratios.push_back(mass / (omega * std::pow(r, v.dim())));
    if (count >= kMinAtomsPerBall) {
      rep.density = rep.ratios.back();
      rep.reliable_radius = r;
    }
  }
  if (rep.reliable_radius == 0.0) {
    rep.density = rep.ratios.front();
    rep.reliable_radius = radii.front();
  }
  rep.smallest_radius_reliable = rep.atom_counts.back() >= kMinAtomsPerBall;
  return rep;
}

DiscreteVarifold blowup(const DiscreteVarifold& v, const Vec& x, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InputError("blowup needs r > 0");
  if (x.size() != v.ambient_dim()) throw InputError("blowup center has wrong length");
  const double factor = std::pow(r, -v.dim());
  std::vector<Atom> atoms;
  atoms.reserve(v.size());
  for (const auto& a : v.atoms()) atoms.push_back({(a.position - x) / r, a.plane, a.mass * factor});
  return DiscreteVarifold(v.ambient_dim(), v.dim(), std::move(atoms));
}

}  // namespace vlab
