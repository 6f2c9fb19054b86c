#pragma once

// The QM(U, M, h) inequality
//   H^m(E cap W_1) <= M H^m(phi_1(E cap W_1)) + h(r) r^m
// audited against a registry of explicit deformations, plus the mass
// semicontinuity and upper-bound checks along a sequence.

#include <functional>
#include <string>
#include <vector>

#include "varifold_lab/metrics.hpp"
#include "varifold_lab/sets.hpp"

namespace vlab {

/// Nondecreasing h: (0, inf) -> [0, inf].
///   constant: h = h0
///   step:     h = h0 for t < delta, +inf from delta on (only balls of
///             radius below delta are constrained)
///   power:    h = h0 t^alpha, alpha > 0, so h(0+) = 0
class GaugeFunction {
 public:
  enum class Kind { Constant, Step, Power };

  static GaugeFunction constant(double h0);
  static GaugeFunction step(double h0, double delta);
  static GaugeFunction power(double h0, double alpha);

  double operator()(double t) const;
  double at_zero_plus() const;
  Kind kind() const { return kind_; }
  double h0() const { return h0_; }
  double parameter() const { return param_; }  // delta or alpha
  std::string describe() const;

 private:
  GaugeFunction(Kind k, double h0, double param);
  Kind kind_;
  double h0_;
  double param_;
};

/// Endpoint map phi_1 of a deformation in the ball, fixing its complement.
/// Pointwise maps are applied to a refinement of E cap B (segments of length
/// <= r/64, triangles of diameter <= r/16) and the image is the piecewise
/// linear interpolant; VertexAffine maps are defined on the vertices of
/// E cap B and extended affinely over each simplex. The homotopy phi_t is
/// the straight line from the identity and is not represented further.
struct Deformation {
  enum class Mode { Pointwise, VertexAffine };
  std::string id;
  Ball ball;
  Mode mode = Mode::Pointwise;
  std::function<Vec(const Vec&)> map;
  double lipschitz = 1.0;  // upper bound on Lip(phi_1) on E cap B
  bool straight_line_homotopy = true;
};

/// Registry in id order: identity, radial_collapse, tangent_project,
/// vertex_snap, tooth_flatten.
///   radial_collapse  B(x, r/2) -> x, annulus stretched radially (Lip 2)
///   tangent_project  onto the principal line/plane of E cap B through x,
///                    cut off linearly between r/2 and r (Lip 3)
///   vertex_snap      interior vertices of E cap B moved to the nearest node
///                    of the lattice x + (r/4) Z^n when that node stays
///                    inside B(x, r - r sqrt(n)/8)
///   tooth_flatten    onto the principal line/plane through the centroid of
///                    E cap B, full strength on B(x, 7r/8) and cut off in the
///                    band 7r/8 .. r
const std::vector<std::string>& deformation_names();
/// Throws ConfigError for an unknown name.
Deformation make_deformation(const std::string& name, const SimplicialSet& e, const Ball& ball);

struct QMGap {
  double gap = 0.0;
  double moved_measure = 0.0;  // H^m(E cap W_1)
  double image_measure = 0.0;  // H^m(phi_1(E cap W_1)), overlaps once
  double gauge_term = 0.0;     // h(r) r^m
};

/// Full breakdown of the gap. W_1 is the union of simplices (after
/// refinement) with a vertex displaced by more than 1e-12. Throws
/// InputError when the closed deformation ball is not inside the open
/// domain U or M < 0.
QMGap qm_evaluate(const SimplicialSet& e, double M, const GaugeFunction& h, const Deformation& d, const Ball& domain);

/// M H^m(phi_1(E cap W_1)) + h(r) r^m - H^m(E cap W_1).
double qm_gap(const SimplicialSet& e, double M, const GaugeFunction& h, const Deformation& d, const Ball& domain);

struct QMAuditOptions {
  std::vector<double> radius_fractions{0.5, 0.25, 0.125};  // times the domain radius
  double spacing = 0.5;            // centre lattice spacing, times the ball radius
  std::size_t max_balls_per_radius = 48;
  std::vector<std::string> registry = deformation_names();
};

struct QMAuditRow {
  std::string deformation;
  Vec center;
  double radius;
  QMGap gap;
};

struct QMAuditReport {
  double M = 1.0;
  std::string gauge;
  std::vector<QMAuditRow> rows;  // radius, centre lattice order, registry order
  double min_gap = 0.0;
  std::string worst_deformation;
  Vec worst_center;
  double worst_radius = 0.0;
  bool passed = true;            // min_gap >= -1e-9
};

/// Runs every registry deformation over a ball grid: centres on a lattice
/// of the domain's bounding box whose distance to E is at most r/2, balls
/// with closure inside U; when more than max_balls_per_radius qualify an
/// evenly strided subset is kept.
QMAuditReport qm_audit(const SimplicialSet& e, double M, const GaugeFunction& h, const Ball& domain,
                       const QMAuditOptions& options = {});

struct SemicontinuityRow {
  std::string kind;  // "open" or "compact"
  Ball ball;
  double limit_measure;
  double sequence_value;  // min (open) or max (compact) over the tail
  double bound;           // right-hand side of the checked inequality
  bool passed;
};

struct SemicontinuityReport {
  std::vector<int> tail;
  std::vector<SemicontinuityRow> rows;
  bool lower_passed = true;  // every open-ball row
  bool upper_passed = true;  // every compact-ball row
};

/// For open balls O: H^m(E cap O) <= min over the tail of H^m(E_k cap O) + tol.
/// For compact balls K: max over the tail of H^m(E_k cap K)
///   <= (1 + C h(0+)) M H^m(E cap K) + tol.
/// The tail is the last tail_length(ks.size()) entries of the schedule.
SemicontinuityReport semicontinuity_check(const SetSequence& sequence, const SimplicialSet& limit,
                                          const std::vector<Ball>& opens, const std::vector<Ball>& compacts,
                                          const std::vector<int>& ks, double M, const GaugeFunction& h,
                                          double C = 1.0, double tol = 0.01);

}  // namespace vlab
