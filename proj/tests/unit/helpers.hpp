#pragma once

#include <random>

#include "varifold_lab/geometry.hpp"

namespace test {

inline vlab::Vec random_vec(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  vlab::Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline vlab::Vec v2(double a, double b) {
  vlab::Vec v(2);
  v << a, b;
  return v;
}

inline vlab::Vec v3(double a, double b, double c) {
  vlab::Vec v(3);
  v << a, b, c;
  return v;
}

// Random m-plane from Gaussian spanning vectors, drawn independently of
// the library's Haar sampler.
inline vlab::Mat gaussian_frame(int n, int m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  vlab::Mat a(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = g(rng);
  return a;
}

}  // namespace test
