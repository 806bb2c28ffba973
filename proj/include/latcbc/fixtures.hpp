// Deterministic fixture builders shared by the verification command, the
// test suite, and the benchmark harness: seeded random weight families, a
// smooth periodic demo function, and a least-squares slope fit.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "latcbc/weights.hpp"

namespace latcbc {

inline WeightFamily random_family(WeightKind kind, int d, int sigma, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto gamma_seq = [&] {
    std::vector<double> g(static_cast<std::size_t>(d));
    for (double& v : g) v = 0.1 + unif(rng);
    return g;
  };
  auto order_seq = [&](int len) {
    std::vector<double> G(static_cast<std::size_t>(len), 1.0);
    double cur = 1.0;
    for (int ell = 1; ell < len; ++ell) {
      cur *= 0.2 + 0.8 * unif(rng);
      G[static_cast<std::size_t>(ell)] = cur;
    }
    return G;
  };
  switch (kind) {
    case WeightKind::kProduct:
      return WeightFamily::product(gamma_seq());
    case WeightKind::kOrderDependent:
      return WeightFamily::order_dependent(d, order_seq(d + 1));
    case WeightKind::kFiniteOrder: {
      const int q = std::min(2, d);
      return WeightFamily::finite_order(d, order_seq(q + 1), q);
    }
    case WeightKind::kPod:
      return WeightFamily::pod(order_seq(d + 1), gamma_seq());
    case WeightKind::kSpod: {
      std::vector<std::vector<double>> gnu(static_cast<std::size_t>(d),
                                           std::vector<double>(static_cast<std::size_t>(sigma)));
      for (auto& row : gnu) {
        double scale = 1.0;
        for (int nu = 0; nu < sigma; ++nu) {
          scale *= 0.5;
          row[static_cast<std::size_t>(nu)] = (0.1 + unif(rng)) * scale;
        }
      }
      return WeightFamily::spod(d, sigma, order_seq(d * sigma + 1), gnu);
    }
  }
  throw std::logic_error("random_family: unknown kind");
}

// Periodic Bernoulli-style test function: f(x) = prod_j (1 + 2^{-j} b2(x_j))
// with b2(x) = x^2 - x + 1/6.  Smooth under periodic extension; fhat_0 = 1.
inline double demo_function(const std::vector<double>& x) {
  double prod = 1.0;
  double c = 1.0;
  for (double xj : x) {
    c *= 0.5;
    prod *= 1.0 + c * (xj * xj - xj + 1.0 / 6.0);
  }
  return prod;
}

// Least-squares slope of y against x.
inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("least_squares_slope: need >= 2 points");
  }
  const double m = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace latcbc
