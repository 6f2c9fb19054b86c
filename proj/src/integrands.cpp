#include "varifold_lab/integrands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "varifold_lab/errors.hpp"

namespace vlab {

namespace {

constexpr double kCertificateTol = 1e-12;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

Integrand::Integrand(std::string name, int ambient_dim, int dim, IntegrandFn f, double inf, double sup,
                     std::optional<PositionFn> c)
    : name_(std::move(name)), ambient_dim_(ambient_dim), dim_(dim), f_(std::move(f)), inf_(inf), sup_(sup),
      c_(std::move(c)) {
  if (dim < 1 || dim > ambient_dim) throw InputError("integrand: need 1 <= m <= n");
  if (!(inf > 0.0) || !(sup >= inf)) throw InputError("integrand: need 0 < inf F <= sup F");
  if (!f_) throw InputError("integrand: missing evaluator");
}

bool Integrand::bounded() const { return std::isfinite(sup_ / inf_); }

double Integrand::ellipticity_constant(const Vec& x) const {
  if (!c_) throw ConfigError("integrand '" + name_ + "' declares no ellipticity constant");
  return (*c_)(x);
}

double phi(const Integrand& f, const DiscreteVarifold& v) {
  if (v.ambient_dim() != f.ambient_dim() || v.dim() != f.dim()) throw InputError("phi: dimension mismatch");
  double total = 0.0;
  for (const auto& a : v.atoms()) total += a.mass * f(a.position, a.plane);
  return total;
}

Integrand frozen(const Integrand& f, const Vec& x) {
  if (x.size() != f.ambient_dim()) throw InputError("frozen: point dimension mismatch");
  std::optional<PositionFn> c;
  if (f.has_ellipticity_constant()) {
    const double cx = f.ellipticity_constant(x);
    c = [cx](const Vec&) { return cx; };
  }
  return Integrand(f.name() + "^x", f.ambient_dim(), f.dim(),
                   [f, x](const Vec&, const Plane& t) { return f(x, t); }, f.inf(), f.sup(), c);
}

Integrand rescaled(const Integrand& f, const Vec& x, double r) {
  if (!(r > 0.0)) throw InputError("rescaled: radius must be positive");
  if (x.size() != f.ambient_dim()) throw InputError("rescaled: point dimension mismatch");
  std::optional<PositionFn> c;
  if (f.has_ellipticity_constant()) {
    c = [f, x, r](const Vec& y) { return f.ellipticity_constant(Vec(x + r * y)); };
  }
  return Integrand(f.name() + "_x,r", f.ambient_dim(), f.dim(),
                   [f, x, r](const Vec& y, const Plane& t) { return f(Vec(x + r * y), t); }, f.inf(), f.sup(), c);
}

ModulusReport modulus(const Integrand& f, const Vec& x, const std::vector<double>& radii) {
  const int n = f.ambient_dim();
  const int m = f.dim();
  std::vector<Vec> lattice;
  const int side = 9;  // nodes -1, -3/4, ..., 1 per axis
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    Vec y(n);
    for (int i = 0; i < n; ++i) y[i] = -1.0 + 0.25 * idx[static_cast<std::size_t>(i)];
    if (y.norm() <= 1.0 + 1e-12) lattice.push_back(y);
    int i = 0;
    while (i < n && ++idx[static_cast<std::size_t>(i)] == side) idx[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
  }
  std::vector<Plane> planes;
  std::vector<int> axes(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) axes[static_cast<std::size_t>(i)] = i;
  for (;;) {
    planes.push_back(Plane::coordinate(n, axes));
    int k = m - 1;
    while (k >= 0 && axes[static_cast<std::size_t>(k)] == n - m + k) --k;
    if (k < 0) break;
    ++axes[static_cast<std::size_t>(k)];
    for (int t = k + 1; t < m; ++t) axes[static_cast<std::size_t>(t)] = axes[static_cast<std::size_t>(t - 1)] + 1;
  }
  for (auto& p : haar_sample(n, m, 16, 7).planes) planes.push_back(p);

  ModulusReport rep;
  rep.center = x;
  rep.radii = radii;
  const Integrand fx = frozen(f, x);
  for (double r : radii) {
    const Integrand fr = rescaled(f, x, r);
    double dev = 0.0;
    for (const auto& y : lattice) {
      for (const auto& t : planes) dev = std::max(dev, std::abs(fr(y, t) - fx(y, t)));
    }
    rep.deviation.push_back(dev);
  }
  return rep;
}

const std::vector<std::string>& integrand_names() {
  static const std::vector<std::string> names{"area", "x_weighted", "aniso_quadratic", "aniso_nonelliptic"};
  return names;
}

Integrand make_integrand(const std::string& name, int n, int m) {
  if (m < 1 || m > n) throw InputError("integrand: need 1 <= m <= n");
  const PositionFn one = [](const Vec&) { return 1.0; };
  if (name == "area") {
    return Integrand(name, n, m, [](const Vec&, const Plane&) { return 1.0; }, 1.0, 1.0, one);
  }
  if (name == "x_weighted") {
    return Integrand(name, n, m, [](const Vec& x, const Plane&) {
      const double s = x.squaredNorm();
      return 1.0 + s / (1.0 + s);
    }, 1.0, 2.0, one);
  }
  if (name == "aniso_quadratic") {
    Eigen::VectorXd diag(n);
    for (int i = 0; i < n; ++i) diag[i] = static_cast<double>((i + 1) * (i + 1));
    // sqrt(det(Q^T A Q)) is the m-Jacobian of A^{1/2} on T; its extremes
    // are the products of the m smallest and m largest sqrt(a_i).
    double lo = 1.0, hi = 1.0;
    for (int i = 0; i < m; ++i) {
      lo *= std::sqrt(diag[i]);
      hi *= std::sqrt(diag[n - 1 - i]);
    }
    return Integrand(name, n, m, [diag](const Vec&, const Plane& t) {
      const Mat& q = t.frame();
      const Mat g = q.transpose() * diag.asDiagonal() * q;
      return 1.0 + std::sqrt(std::max(0.0, g.determinant()));
    }, 1.0 + lo, 1.0 + hi, one);
  }
  if (name == "aniso_nonelliptic") {
    if (m >= n) throw InputError("aniso_nonelliptic needs m < n");
    Mat span = Mat::Zero(n, m);
    span(0, 0) = span(1, 0) = 1.0 / std::sqrt(2.0);
    for (int j = 1; j < m; ++j) span(j + 1, j) = 1.0;
    const Plane delta(span);
    return Integrand(name, n, m, [delta](const Vec&, const Plane& t) {
      return 1.0 + 9.0 * (1.0 - projection_jacobian(delta, t));
    }, 1.0, 10.0);
  }
  throw ConfigError("unknown integrand '" + name + "'");
}

Integrand tabulated_integrand(const IntegrandTable& tab) {
  const int n = tab.ambient_dim;
  const int m = tab.dim;
  if (m < 1 || m > n) throw InputError("tabulated integrand: need 1 <= m <= n");
  if (tab.lo.size() != n || tab.hi.size() != n || static_cast<int>(tab.counts.size()) != n) {
    throw InputError("tabulated integrand: grid must have one axis per ambient dimension");
  }
  std::size_t nodes = 1;
  for (int i = 0; i < n; ++i) {
    if (tab.counts[static_cast<std::size_t>(i)] < 2) throw InputError("tabulated integrand: need >= 2 nodes per axis");
    if (!(tab.hi[i] > tab.lo[i])) throw InputError("tabulated integrand: empty grid axis");
    nodes *= static_cast<std::size_t>(tab.counts[static_cast<std::size_t>(i)]);
  }
  const bool angular = (n == 2 && m == 1 && tab.angle_count > 0);
  const std::size_t plane_count = angular ? static_cast<std::size_t>(tab.angle_count) : tab.planes.size();
  if (plane_count == 0) throw InputError("tabulated integrand: empty plane grid");
  for (const auto& p : tab.planes) {
    if (p.ambient_dim() != n || p.dim() != m) throw InputError("tabulated integrand: plane dimension mismatch");
  }
  if (tab.values.size() != nodes * plane_count) throw InputError("tabulated integrand: wrong number of values");
  for (double v : tab.values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError("tabulated integrand: values must be positive and finite");
  }
  const double lo = *std::min_element(tab.values.begin(), tab.values.end());
  const double hi = *std::max_element(tab.values.begin(), tab.values.end());

  auto eval = [tab, angular, plane_count](const Vec& x, const Plane& t) {
    const int n = tab.ambient_dim;
    // Plane axis: two neighbours with weights (angular) or the nearest plane.
    std::size_t p0 = 0, p1 = 0;
    double wp = 0.0;
    if (angular) {
      const Vec d = t.frame().col(0);
      double theta = std::atan2(d[1], d[0]);
      if (theta < 0) theta += std::numbers::pi;
      if (theta >= std::numbers::pi) theta -= std::numbers::pi;
      const double s = theta / std::numbers::pi * static_cast<double>(plane_count);
      p0 = static_cast<std::size_t>(std::floor(s)) % plane_count;
      p1 = (p0 + 1) % plane_count;
      wp = s - std::floor(s);
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < tab.planes.size(); ++k) {
        const double d = grassmann_distance(t, tab.planes[k]);
        if (d < best) {
          best = d;
          p0 = p1 = k;
        }
      }
    }
    // Multilinear interpolation over the 2^n cell corners.
    std::vector<int> base(static_cast<std::size_t>(n));
    std::vector<double> frac(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const int cnt = tab.counts[static_cast<std::size_t>(i)];
      const double u = std::clamp((x[i] - tab.lo[i]) / (tab.hi[i] - tab.lo[i]), 0.0, 1.0) * (cnt - 1);
      const int b = std::min(cnt - 2, static_cast<int>(std::floor(u)));
      base[static_cast<std::size_t>(i)] = b;
      frac[static_cast<std::size_t>(i)] = u - b;
    }
    double value = 0.0;
    for (int corner = 0; corner < (1 << n); ++corner) {
      double w = 1.0;
      std::size_t node = 0;
      for (int i = 0; i < n; ++i) {
        const int bit = (corner >> i) & 1;
        w *= bit ? frac[static_cast<std::size_t>(i)] : 1.0 - frac[static_cast<std::size_t>(i)];
        node = node * static_cast<std::size_t>(tab.counts[static_cast<std::size_t>(i)]) +
               static_cast<std::size_t>(base[static_cast<std::size_t>(i)] + bit);
      }
      if (w == 0.0) continue;
      value += w * ((1.0 - wp) * tab.values[node * plane_count + p0] + wp * tab.values[node * plane_count + p1]);
    }
    return value;
  };
  return Integrand(tab.name, n, m, eval, lo, hi);
}

// ---------------------------------------------------------------------------
// Competitors

namespace {

Vec normal_of(const Plane& t) {
  const Mat nf = t.normal_frame();
  if (nf.cols() == 0) throw InputError("ellipticity audit needs m < n");
  return nf.col(0);
}

std::vector<Vec> boundary_polygon(const Plane& t, int sides) {
  std::vector<Vec> out;
  for (int i = 0; i < sides; ++i) {
    const double a = 2.0 * std::numbers::pi * i / sides;
    out.push_back(std::cos(a) * t.frame().col(0) + std::sin(a) * t.frame().col(1));
  }
  return out;
}

SimplicialSet fan(const Vec& apex, const std::vector<Vec>& ring) {
  std::vector<std::vector<Vec>> soup;
  for (std::size_t i = 0; i < ring.size(); ++i) soup.push_back({apex, ring[i], ring[(i + 1) % ring.size()]});
  return SimplicialSet::from_soup(static_cast<int>(apex.size()), 2, soup);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

SimplicialSet flat_disk(const Plane& t, int polygon_sides) {
  const int n = t.ambient_dim();
  if (t.dim() == 1) {
    const Vec d = t.frame().col(0);
    return SimplicialSet::polyline({-d, d});
  }
  if (t.dim() != 2) throw InputError("flat_disk supports m = 1 or m = 2");
  if (polygon_sides < 3) throw InputError("flat_disk needs at least 3 polygon sides");
  return fan(Vec::Zero(n), boundary_polygon(t, polygon_sides));
}

std::vector<Competitor> competitor_registry(const Plane& t) {
  const Vec nu = normal_of(t);
  std::vector<Competitor> out;
  if (t.dim() == 1) {
    const Vec d = t.frame().col(0);
    for (double h : {0.1, 0.25, 0.5, 1.0}) {
      for (int side : {1, -1}) {
        out.push_back({"detour_h" + fmt(side * h), SimplicialSet::polyline({-d, Vec(side * h * nu), d})});
      }
    }
    for (auto [a, h] : {std::pair{0.5, 0.5}, std::pair{-0.3, 0.2}, std::pair{0.8, 1.0}}) {
      out.push_back({"tilted_a" + fmt(a) + "_h" + fmt(h), SimplicialSet::polyline({-d, Vec(a * d + h * nu), d})});
    }
    for (int teeth : {2, 4}) {
      std::vector<Vec> pts;
      const double w = 2.0 / teeth;
      for (int j = 0; j <= teeth; ++j) pts.push_back(Vec((-1.0 + j * w) * d + ((j % 2) ? w : 0.0) * nu));
      // An odd tooth count would end off the boundary; both counts are even.
      out.push_back({"zigzag_" + std::to_string(teeth), SimplicialSet::polyline(pts)});
    }
    out.push_back({"spur", concat(flat_disk(t), SimplicialSet::polyline({Vec::Zero(t.ambient_dim()), Vec(0.5 * nu)}))});
    return out;
  }
  if (t.dim() != 2) throw InputError("competitor registry supports m = 1 or m = 2");
  const auto ring = boundary_polygon(t, 64);
  const Vec t1 = t.frame().col(0);
  const Vec t2 = t.frame().col(1);
  for (double h : {0.1, 0.25, 0.5}) out.push_back({"tent_h" + fmt(h), fan(h * nu, ring)});
  out.push_back({"tilted_tent_a", fan(0.4 * t1 + 0.3 * nu, ring)});
  out.push_back({"tilted_tent_b", fan(-0.5 * t2 + 0.5 * nu, ring)});
  for (double h : {0.25, -0.5}) {
    constexpr int kRings = 8;
    std::vector<std::vector<Vec>> soup;
    auto node = [&](int ringi, std::size_t k) -> Vec {
      const double rho = static_cast<double>(ringi) / kRings;
      return rho * ring[k % ring.size()] + h * (1.0 - rho * rho) * nu;
    };
    const Vec apex = h * nu;
    for (std::size_t k = 0; k < ring.size(); ++k) soup.push_back({apex, node(1, k), node(1, k + 1)});
    for (int ri = 1; ri < kRings; ++ri) {
      for (std::size_t k = 0; k < ring.size(); ++k) {
        soup.push_back({node(ri, k), node(ri + 1, k), node(ri + 1, k + 1)});
        soup.push_back({node(ri, k), node(ri + 1, k + 1), node(ri, k + 1)});
      }
    }
    out.push_back({"cap_h" + fmt(h), SimplicialSet::from_soup(t.ambient_dim(), 2, soup)});
  }
  return out;
}

namespace {

// Phi_{F^x}(S): F^x only sees planes, so one atom per simplex is exact.
double frozen_energy(const Integrand& f, const Vec& x, const SimplicialSet& s) {
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) total += s.simplex_measure(i) * f(x, s.tangent(i));
  return total;
}

void audit_plane(const Integrand& f, const Vec& x, const Plane& t, int plane_index,
                 const std::vector<Competitor>& competitors, EllipticityReport& rep) {
  const SimplicialSet d = flat_disk(t);
  const double md = measure(d);
  const double pd = frozen_energy(f, x, d);
  const double c = f.has_ellipticity_constant() ? f.ellipticity_constant(x) : kNaN;
  for (const auto& comp : competitors) {
    if (comp.set.ambient_dim() != t.ambient_dim() || comp.set.dim() != t.dim()) {
      throw InputError("ellipticity audit: competitor '" + comp.id + "' has the wrong dimensions");
    }
    EllipticityRow row;
    row.competitor = comp.id;
    row.plane_index = plane_index;
    row.measure_s = measure(comp.set);
    row.measure_d = md;
    row.phi_s = frozen_energy(f, x, comp.set);
    row.phi_d = pd;
    row.margin = row.phi_s - row.phi_d;
    row.elliptic_margin = std::isnan(c) ? kNaN : row.margin - c * (row.measure_s - row.measure_d);
    row.certificate = row.margin < -kCertificateTol || row.elliptic_margin < -kCertificateTol;
    rep.rows.push_back(row);
  }
}

void summarize(EllipticityReport& rep) {
  rep.min_margin = std::numeric_limits<double>::infinity();
  rep.min_elliptic_margin = std::numeric_limits<double>::infinity();
  rep.certificates = 0;
  bool any_elliptic = false;
  for (const auto& r : rep.rows) {
    rep.min_margin = std::min(rep.min_margin, r.margin);
    if (!std::isnan(r.elliptic_margin)) {
      any_elliptic = true;
      rep.min_elliptic_margin = std::min(rep.min_elliptic_margin, r.elliptic_margin);
    }
    if (r.certificate) ++rep.certificates;
  }
  if (rep.rows.empty()) rep.min_margin = 0.0;
  if (!any_elliptic) rep.min_elliptic_margin = kNaN;
}

}  // namespace

EllipticityReport semi_ellipticity_audit(const Integrand& f, const Vec& x, const Plane& t,
                                         const std::vector<Competitor>& competitors) {
  if (t.ambient_dim() != f.ambient_dim() || t.dim() != f.dim() || x.size() != f.ambient_dim()) {
    throw InputError("ellipticity audit: dimension mismatch");
  }
  EllipticityReport rep;
  rep.integrand = f.name();
  rep.x = x;
  rep.planes.push_back(t);
  audit_plane(f, x, t, 0, competitors, rep);
  summarize(rep);
  return rep;
}

EllipticityReport ellipticity_scan(const Integrand& f, const Vec& x, const std::optional<Plane>& t, int haar_planes,
                                   std::uint64_t seed) {
  if (x.size() != f.ambient_dim()) throw InputError("ellipticity audit: dimension mismatch");
  if (t && (t->ambient_dim() != f.ambient_dim() || t->dim() != f.dim())) {
    throw InputError("ellipticity audit: plane dimension mismatch");
  }
  EllipticityReport rep;
  rep.integrand = f.name();
  rep.x = x;
  if (t) rep.planes.push_back(*t);
  if (haar_planes > 0) {
    for (auto& p : haar_sample(f.ambient_dim(), f.dim(), haar_planes, seed).planes) rep.planes.push_back(p);
  }
  for (std::size_t i = 0; i < rep.planes.size(); ++i) {
    audit_plane(f, x, rep.planes[i], static_cast<int>(i), competitor_registry(rep.planes[i]), rep);
  }
  summarize(rep);
  return rep;
}

std::optional<double> best_ellipticity_constant(const EllipticityReport& report, const std::vector<double>& grid) {
  std::optional<double> best;
  for (double c : grid) {
    bool ok = true;
    for (const auto& r : report.rows) {
      if (r.margin - c * (r.measure_s - r.measure_d) < -kCertificateTol) {
        ok = false;
        break;
      }
    }
    if (ok && (!best || c > *best)) best = c;
  }
  return best;
}

}  // namespace vlab
