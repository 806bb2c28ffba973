// Kernel tables: the rank-1 lattice interaction values omega(z, k) on Z_n and
// the derived psi values used by the component-by-component search criterion.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "latcbc/primes.hpp"
#include "latcbc/zeta.hpp"

namespace latcbc {

// omega0[m] = sum_{h != 0} e^{2 pi i h m / n} / |h|^alpha for even alpha,
// evaluated in closed form through the Bernoulli polynomial B_alpha. The
// table is built mirrored (omega0[m] == omega0[n-m] bitwise), which the
// deterministic argmin tie handling relies on.
struct OmegaTable {
  std::int64_t n = 0;
  int alpha = 0;
  std::vector<double> omega0;
  double two_zeta_alpha = 0.0;    // 2 zeta(alpha)
  double two_zeta_2alpha = 0.0;   // 2 zeta(2 alpha)

  double omega(std::int64_t z, std::int64_t k) const {
    return omega0[static_cast<std::size_t>((z % n) * (k % n) % n)];
  }

  double psi(std::int64_t m) const {
    const double w = omega0[static_cast<std::size_t>(m)];
    return w * w - two_zeta_2alpha;
  }

  // psi(z, k) = omega(z, k)^2 - 2 zeta(2 alpha); the exact row used when the
  // criterion value itself is reported.
  std::vector<double> psi_exact_row() const {
    std::vector<double> row(omega0.size());
    for (std::size_t m = 0; m < omega0.size(); ++m) row[m] = omega0[m] * omega0[m] - two_zeta_2alpha;
    return row;
  }

  // omega0^2 without the constant shift: subtracting a constant times a fixed
  // row sum does not move the argmin, so searches may use this row instead.
  std::vector<double> psi_argmin_row() const {
    std::vector<double> row(omega0.size());
    for (std::size_t m = 0; m < omega0.size(); ++m) row[m] = omega0[m] * omega0[m];
    return row;
  }
};

inline OmegaTable build_omega_table(std::int64_t n, int alpha) {
  if (n < 2 || !is_prime(n)) throw std::invalid_argument("build_omega_table: n must be prime");
  if (alpha < 2 || alpha > 8 || alpha % 2 != 0) {
    throw std::invalid_argument("build_omega_table: alpha must be one of {2, 4, 6, 8}");
  }
  OmegaTable t;
  t.n = n;
  t.alpha = alpha;
  t.two_zeta_alpha = 2.0 * zeta_even(alpha);
  t.two_zeta_2alpha = 2.0 * zeta_even(2 * alpha);
  double fact = 1.0;
  for (int i = 2; i <= alpha; ++i) fact *= i;
  const double sign = (alpha / 2 + 1) % 2 == 0 ? 1.0 : -1.0;  // (-1)^{alpha/2 + 1}
  const double scale = std::pow(2.0 * std::numbers::pi, alpha) / (sign * fact);
  t.omega0.resize(static_cast<std::size_t>(n));
  for (std::int64_t m = 0; 2 * m <= n; ++m) {
    const double v = scale * bernoulli_poly(alpha, static_cast<double>(m) / static_cast<double>(n));
    t.omega0[static_cast<std::size_t>(m)] = v;
    if (m != 0) t.omega0[static_cast<std::size_t>(n - m)] = v;
  }
  return t;
}

inline double psi_value(const OmegaTable& t, std::int64_t m) { return t.psi(m); }

}  // namespace latcbc
