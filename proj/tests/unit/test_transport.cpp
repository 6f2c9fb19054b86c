#include <doctest.h>

#include "../oracles.hpp"
#include "varifold_lab/transport.hpp"

using namespace vlab;

TEST_SUITE("transport") {
  TEST_CASE("agrees with a dense simplex solve") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.05, 1.0), c(0.0, 3.0);
    std::uniform_int_distribution<int> sz(1, 6);
    for (int trial = 0; trial < 60; ++trial) {
      const int a = sz(rng), b = sz(rng);
      std::vector<double> mu(static_cast<std::size_t>(a)), nu(static_cast<std::size_t>(b));
      for (auto& x : mu) x = u(rng);
      for (auto& x : nu) x = u(rng);
      Eigen::MatrixXd cost(a, b);
      for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) cost(i, j) = c(rng);
      const double slack = trial % 2 ? 1.0 : 0.7;
      auto plan = unbalanced_transport(mu, nu, cost, slack);
      CHECK(plan.cost == doctest::Approx(oracle::unbalanced_transport_lp(mu, nu, cost, slack)).epsilon(1e-9));

      // the plan is feasible and prices to its cost
      std::vector<double> out(mu.size(), 0.0), in(nu.size(), 0.0);
      double priced = 0.0;
      for (const auto& f : plan.flows) {
        CHECK(f.amount > 0.0);
        if (f.source >= 0) out[static_cast<std::size_t>(f.source)] += f.amount;
        if (f.sink >= 0) in[static_cast<std::size_t>(f.sink)] += f.amount;
        priced += (f.source >= 0 && f.sink >= 0) ? f.amount * cost(f.source, f.sink) : f.amount * slack;
      }
      for (std::size_t i = 0; i < mu.size(); ++i) CHECK(out[i] == doctest::Approx(mu[i]));
      for (std::size_t j = 0; j < nu.size(); ++j) CHECK(in[j] == doctest::Approx(nu[j]));
      CHECK(priced == doctest::Approx(plan.cost));
    }
  }

  TEST_CASE("creation, destruction and cheap moves") {
    Eigen::MatrixXd none(0, 2);
    CHECK(unbalanced_transport({}, {0.5, 0.25}, none, 1.0).cost == doctest::Approx(0.75));
    Eigen::MatrixXd far(1, 1);
    far << 5.0;
    CHECK(unbalanced_transport({1.0}, {1.0}, far, 1.0).cost == doctest::Approx(2.0));
    Eigen::MatrixXd near(1, 1);
    near << 0.3;
    CHECK(unbalanced_transport({1.0}, {2.0}, near, 1.0).cost == doctest::Approx(1.3));
  }
}
