#pragma once

// Unbalanced transport: Kantorovich-Rubinstein with mass creation and
// destruction at a fixed unit price. Solved exactly as a transportation
// problem by successive shortest paths with Johnson potentials.

#include <vector>

#include <Eigen/Dense>

namespace vlab {

/// One positive flow of the optimal plan. `source == -1` means mass created
/// at sink `sink`; `sink == -1` means mass destroyed at `source`.
struct TransportFlow {
  int source;
  int sink;
  double amount;
};

struct TransportPlan {
  double cost = 0.0;
  std::vector<TransportFlow> flows;
};

/// Minimizes sum c_ij pi_ij + slack * (destroyed + created) over plans pi >= 0
/// with row sums <= supply and column sums <= demand. `cost` is
/// supply.size() x demand.size() with nonnegative entries. Runs in
/// O((a + b) a b) for a sources and b sinks.
TransportPlan unbalanced_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                                   const Eigen::MatrixXd& cost, double slack);

}  // namespace vlab
