#include "varifold_lab/transport.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "varifold_lab/errors.hpp"

namespace vlab {

TransportPlan unbalanced_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                                   const Eigen::MatrixXd& cost, double slack) {
  const std::size_t a = supply.size();
  const std::size_t b = demand.size();
  if (static_cast<std::size_t>(cost.rows()) != a || static_cast<std::size_t>(cost.cols()) != b) {
    throw InputError("transport cost matrix has wrong shape");
  }
  if (!(slack >= 0.0)) throw InputError("transport slack price must be nonnegative");
  for (double s : supply) {
    if (!(s >= 0.0)) throw InputError("transport supplies must be nonnegative");
  }
  for (double d : demand) {
    if (!(d >= 0.0)) throw InputError("transport demands must be nonnegative");
  }
  if (a > 0 && b > 0 && !(cost.minCoeff() >= 0.0)) throw InputError("transport costs must be nonnegative");

  // Balanced transportation problem with a dummy source (creation) and a
  // dummy sink (destruction); dummy-to-dummy flow is free.
  const std::size_t ns = a + 1;
  const std::size_t nd = b + 1;
  const double total_supply = std::accumulate(supply.begin(), supply.end(), 0.0);
  const double total_demand = std::accumulate(demand.begin(), demand.end(), 0.0);
  auto c = [&](std::size_t i, std::size_t j) -> double {
    if (i < a && j < b) return cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    if (i == a && j == b) return 0.0;
    return slack;
  };

  std::vector<double> rs(supply);
  rs.push_back(total_demand);
  std::vector<double> rd(demand);
  rd.push_back(total_supply);
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(nd));
  auto f = [&](std::size_t i, std::size_t j) -> double& {
    return flow(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };

  const double eps = 1e-15 * std::max(1.0, total_supply + total_demand);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> ps(ns, 0.0), pd(nd, 0.0);
  std::vector<double> ds(ns), dd(nd);
  std::vector<char> done_s(ns), done_d(nd);
  std::vector<long> pred_d(nd), pred_s(ns);

  for (;;) {
    double remaining = 0.0;
    for (double r : rs) remaining += r;
    if (remaining <= eps) break;

    std::fill(ds.begin(), ds.end(), kInf);
    std::fill(dd.begin(), dd.end(), kInf);
    std::fill(done_s.begin(), done_s.end(), 0);
    std::fill(done_d.begin(), done_d.end(), 0);
    std::fill(pred_s.begin(), pred_s.end(), -1);
    std::fill(pred_d.begin(), pred_d.end(), -1);
    for (std::size_t i = 0; i < ns; ++i) {
      if (rs[i] > eps) ds[i] = 0.0;
    }

    long target = -1;
    double reach = kInf;
    for (;;) {
      double best = kInf;
      long pick = -1;
      bool pick_sink = false;
      for (std::size_t i = 0; i < ns; ++i) {
        if (!done_s[i] && ds[i] < best) {
          best = ds[i];
          pick = static_cast<long>(i);
          pick_sink = false;
        }
      }
      for (std::size_t j = 0; j < nd; ++j) {
        if (!done_d[j] && dd[j] < best) {
          best = dd[j];
          pick = static_cast<long>(j);
          pick_sink = true;
        }
      }
      if (pick < 0) break;
      const auto u = static_cast<std::size_t>(pick);
      if (!pick_sink) {
        done_s[u] = 1;
        for (std::size_t j = 0; j < nd; ++j) {
          if (done_d[j]) continue;
          const double rc = std::max(0.0, c(u, j) + ps[u] - pd[j]);
          if (ds[u] + rc < dd[j]) {
            dd[j] = ds[u] + rc;
            pred_d[j] = pick;
          }
        }
      } else {
        done_d[u] = 1;
        if (rd[u] > eps) {
          target = pick;
          reach = dd[u];
          break;
        }
        for (std::size_t i = 0; i < ns; ++i) {
          if (done_s[i] || f(i, u) <= eps) continue;
          const double rc = std::max(0.0, -c(i, u) + pd[u] - ps[i]);
          if (dd[u] + rc < ds[i]) {
            ds[i] = dd[u] + rc;
            pred_s[i] = pick;
          }
        }
      }
    }
    if (target < 0) break;  // supplies and demands balance, so this is unreachable in exact arithmetic

    for (std::size_t i = 0; i < ns; ++i) ps[i] += std::min(ds[i], reach);
    for (std::size_t j = 0; j < nd; ++j) pd[j] += std::min(dd[j], reach);

    // Walk back: sink <- source (forward edge) <- sink (reverse edge) ...
    struct Step {
      std::size_t i, j;
      bool forward;
    };
    std::vector<Step> path;
    auto j = static_cast<std::size_t>(target);
    double amount = rd[j];
    std::size_t start = 0;
    for (;;) {
      const auto i = static_cast<std::size_t>(pred_d[j]);
      path.push_back({i, j, true});
      if (pred_s[i] < 0) {
        start = i;
        break;
      }
      const auto j_prev = static_cast<std::size_t>(pred_s[i]);
      path.push_back({i, j_prev, false});
      amount = std::min(amount, f(i, j_prev));
      j = j_prev;
    }
    amount = std::min(amount, rs[start]);
    for (const auto& s : path) f(s.i, s.j) += s.forward ? amount : -amount;
    rs[start] -= amount;
    rd[static_cast<std::size_t>(target)] -= amount;
  }

  TransportPlan plan;
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t j = 0; j < nd; ++j) {
      const double amt = f(i, j);
      if (amt <= eps) continue;
      plan.cost += amt * c(i, j);
      if (i == a && j == b) continue;
      plan.flows.push_back({i < a ? static_cast<int>(i) : -1, j < b ? static_cast<int>(j) : -1, amt});
    }
  }
  return plan;
}

}  // namespace vlab
