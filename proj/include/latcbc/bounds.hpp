// Worst-case guarantees for the constructed vectors: the S_d bound, the
// approximation error bound (general and M = n^{1/(2 lambda)} simplified
// forms), the constant tau, the initial error, and the weighted subset sums
// evaluated through symmetric-function recursions.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "latcbc/weights.hpp"
#include "latcbc/zeta.hpp"

namespace latcbc {

struct BoundInputs {
  int alpha = 2;
  double lambda = 1.0;  // in (1/alpha, 1]
  std::int64_t n = 0;
  int d = 0;
  double M = 0.0;  // <= 0 means "auto" = n^{1/(2 lambda)}
  WeightFamily weights;
};

inline double tau(int alpha, double lambda) {
  if (alpha < 2) throw std::invalid_argument("tau: need alpha >= 2");
  if (!(lambda > 1.0 / static_cast<double>(alpha)) || !(lambda <= 1.0)) {
    throw std::invalid_argument("tau: need lambda in (1/alpha, 1]");
  }
  return std::max(6.0, 2.5 + std::pow(2.0, 2.0 * alpha * lambda + 1.0));
}

// 2 zeta(x), using the exact even-integer values when applicable.
inline double two_zeta(double x) {
  const double r = std::round(x);
  if (r == x && r >= 2.0 && r <= 32.0 && static_cast<long>(r) % 2 == 0) {
    return 2.0 * zeta_even(static_cast<int>(r));
  }
  return 2.0 * zeta_real(x, 1e-12);
}

struct WeightedSums {
  double S0 = 0.0;  // sum over all u of gamma_u^lambda c^{|u|}
  double S1 = 0.0;  // sum over nonempty u of |u| gamma_u^lambda c^{|u|}
};

// Elementary symmetric polynomials e_0..e_d of x_1..x_d, standard O(d^2)
// additive recurrence.
inline std::vector<double> elementary_symmetric(const std::vector<double>& x) {
  std::vector<double> e(x.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t m = j + 1; m >= 1; --m) {
      e[m] += x[j] * e[m - 1];
    }
  }
  return e;
}

inline WeightedSums weighted_sums(const WeightFamily& w, int d, double lambda, double c) {
  if (d < 1 || w.d < d) throw std::invalid_argument("weighted_sums: bad d");
  if (!(c >= 0.0)) throw std::invalid_argument("weighted_sums: need c >= 0");
  WeightedSums out;
  switch (w.kind) {
    case WeightKind::kProduct: {
      double s0 = 1.0, ratio = 0.0;
      for (int j = 0; j < d; ++j) {
        const double t = std::pow(w.gamma_j[static_cast<std::size_t>(j)], lambda) * c;
        s0 *= 1.0 + t;
        ratio += t / (1.0 + t);
      }
      out.S0 = s0;
      out.S1 = s0 * ratio;
      return out;
    }
    case WeightKind::kOrderDependent:
    case WeightKind::kFiniteOrder:
    case WeightKind::kPod: {
      std::vector<double> x(static_cast<std::size_t>(d), 1.0);
      if (w.kind == WeightKind::kPod) {
        for (int j = 0; j < d; ++j) x[static_cast<std::size_t>(j)] = std::pow(w.gamma_j[static_cast<std::size_t>(j)], lambda);
      }
      const std::vector<double> e = elementary_symmetric(x);
      double cpow = 1.0;
      for (int ell = 0; ell <= d; ++ell) {
        const double g = w.order_weight(ell);
        const double term = std::pow(g, lambda) * cpow * e[static_cast<std::size_t>(ell)];
        out.S0 += term;
        out.S1 += static_cast<double>(ell) * term;
        cpow *= c;
      }
      return out;
    }
    case WeightKind::kSpod: {
      // gamma_u^lambda does not factor (gamma_u is itself a sum), so
      // enumerate subsets directly.
      if (d > 20) throw std::invalid_argument("weighted_sums: spod enumeration limited to d <= 20");
      std::vector<int> u;
      for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        u.clear();
        for (int j = 0; j < d; ++j) {
          if (mask & (1u << j)) u.push_back(j + 1);
        }
        const double g = gamma_subset(w, u);
        const double term = std::pow(g, lambda) * std::pow(c, static_cast<double>(u.size()));
        out.S0 += term;
        out.S1 += static_cast<double>(u.size()) * term;
      }
      return out;
    }
  }
  throw std::logic_error("weighted_sums: unknown kind");
}

inline double resolve_m(const BoundInputs& in) {
  if (in.M > 0.0) return in.M;
  return std::pow(static_cast<double>(in.n), 1.0 / (2.0 * in.lambda));
}

// S_d(z) <= [tau / n * S1 * S0]^{1/lambda} for the CBC-constructed z.
inline double sd_bound(const BoundInputs& in) {
  if (in.n < 2) throw std::invalid_argument("sd_bound: need n >= 2");
  const double t = tau(in.alpha, in.lambda);
  const double c = two_zeta(static_cast<double>(in.alpha) * in.lambda);
  const WeightedSums s = weighted_sums(in.weights, in.d, in.lambda, c);
  return std::pow(t / static_cast<double>(in.n) * s.S1 * s.S0, 1.0 / in.lambda);
}

struct ErrorBound {
  double general = 0.0;
  double simplified = 0.0;
  double M = 0.0;
};

// general    = sqrt(1/M + M * sd_bound)
// simplified = sqrt(2) tau^{1/(2 lambda)} / n^{1/(4 lambda)}
//              * (sum_u max(|u|,1) gamma_u^lambda c^{|u|})^{1/lambda}
// The max(|u|,1) sum equals S1 + 1: the empty set contributes exactly 1
// (gamma_empty = 1) and every nonempty set enters through S1.
inline ErrorBound error_bound(const BoundInputs& in) {
  ErrorBound out;
  out.M = resolve_m(in);
  const double sd = sd_bound(in);
  out.general = std::sqrt(1.0 / out.M + out.M * sd);
  const double t = tau(in.alpha, in.lambda);
  const double c = two_zeta(static_cast<double>(in.alpha) * in.lambda);
  const WeightedSums s = weighted_sums(in.weights, in.d, in.lambda, c);
  out.simplified = std::sqrt(2.0) * std::pow(t, 1.0 / (2.0 * in.lambda)) /
                   std::pow(static_cast<double>(in.n), 1.0 / (4.0 * in.lambda)) *
                   std::pow(s.S1 + 1.0, 1.0 / in.lambda);
  return out;
}

// Initial (zero-algorithm) worst-case error max_u gamma_u^{1/2}.
inline double initial_error(const WeightFamily& w, int d) {
  if (d < 1 || w.d < d) throw std::invalid_argument("initial_error: bad d");
  switch (w.kind) {
    case WeightKind::kProduct: {
      double best = 1.0;
      for (int j = 0; j < d; ++j) {
        const double g = w.gamma_j[static_cast<std::size_t>(j)];
        if (g > 1.0) best *= g;
      }
      return std::sqrt(best);
    }
    case WeightKind::kOrderDependent:
    case WeightKind::kFiniteOrder: {
      double best = 0.0;
      for (int ell = 0; ell <= d; ++ell) best = std::max(best, w.order_weight(ell));
      return std::sqrt(best);
    }
    case WeightKind::kPod: {
      // For fixed |u| = ell the maximum picks the ell largest gamma_j.
      std::vector<double> g(w.gamma_j.begin(), w.gamma_j.begin() + d);
      std::sort(g.begin(), g.end(), std::greater<double>());
      double best = w.order_weight(0);
      double prefix = 1.0;
      for (int ell = 1; ell <= d; ++ell) {
        prefix *= g[static_cast<std::size_t>(ell - 1)];
        best = std::max(best, w.order_weight(ell) * prefix);
      }
      return std::sqrt(best);
    }
    case WeightKind::kSpod: {
      if (d > 20) throw std::invalid_argument("initial_error: spod enumeration limited to d <= 20");
      double best = 0.0;
      std::vector<int> u;
      for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        u.clear();
        for (int j = 0; j < d; ++j) {
          if (mask & (1u << j)) u.push_back(j + 1);
        }
        best = std::max(best, gamma_subset(w, u));
      }
      return std::sqrt(best);
    }
  }
  throw std::logic_error("initial_error: unknown kind");
}

}  // namespace latcbc
