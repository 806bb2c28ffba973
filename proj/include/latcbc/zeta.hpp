// Riemann zeta values and Bernoulli polynomials needed by the kernel tables
// and the worst-case error bounds.
#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace latcbc {

// Bernoulli numbers B_{2m} for 2m = 2..32.
inline double bernoulli_number(int two_m) {
  static constexpr std::array<double, 16> kB = {
      1.0 / 6.0,
      -1.0 / 30.0,
      1.0 / 42.0,
      -1.0 / 30.0,
      5.0 / 66.0,
      -691.0 / 2730.0,
      7.0 / 6.0,
      -3617.0 / 510.0,
      43867.0 / 798.0,
      -174611.0 / 330.0,
      854513.0 / 138.0,
      -236364091.0 / 2730.0,
      8553103.0 / 6.0,
      -23749461029.0 / 870.0,
      8615841276005.0 / 14322.0,
      -7709321041217.0 / 510.0,
  };
  if (two_m < 2 || two_m > 32 || two_m % 2 != 0) {
    throw std::invalid_argument("bernoulli_number: need even argument in [2, 32]");
  }
  return kB[static_cast<std::size_t>(two_m / 2 - 1)];
}

// zeta(2m) = (-1)^{m+1} B_{2m} (2 pi)^{2m} / (2 (2m)!), exact at even integers.
inline double zeta_even(int two_m) {
  if (two_m < 2 || two_m > 32 || two_m % 2 != 0) {
    throw std::invalid_argument("zeta_even: need even argument in [2, 32]");
  }
  const int m = two_m / 2;
  double fact = 1.0;
  for (int i = 2; i <= two_m; ++i) fact *= i;
  const double sign = (m % 2 == 0) ? -1.0 : 1.0;
  return sign * bernoulli_number(two_m) * std::pow(2.0 * std::numbers::pi, two_m) / (2.0 * fact);
}

// zeta(x) for real x > 1. Direct summation to H terms plus an Euler-Maclaurin
// tail (integral, half-term, and B_2/B_4/B_6 corrections); a raw truncation
// bound H^{1-x}/(x-1) cannot reach tight tolerances near x = 1 at any feasible
// H, while the corrected tail's first omitted term is O(x^7 H^{-x-7}).
inline double zeta_real(double x, double tol = 1e-12) {
  if (!(x > 1.0)) throw std::invalid_argument("zeta_real: need x > 1");
  if (!(tol > 0.0)) throw std::invalid_argument("zeta_real: need tol > 0");
  const std::size_t kTerms = 20000;  // omitted-term bound ~ x^7 H^{-x-7} << 1e-25 for x in (1, 40]
  double sum = 0.0;
  for (std::size_t h = kTerms; h >= 1; --h) {  // ascending magnitude for accuracy
    sum += std::pow(static_cast<double>(h), -x);
  }
  const double H = static_cast<double>(kTerms);
  double tail = std::pow(H, 1.0 - x) / (x - 1.0);        // integral
  tail -= 0.5 * std::pow(H, -x);                          // half-term
  tail += x / 12.0 * std::pow(H, -x - 1.0);               // B_2
  tail -= x * (x + 1.0) * (x + 2.0) / 720.0 * std::pow(H, -x - 3.0);  // B_4
  tail += x * (x + 1.0) * (x + 2.0) * (x + 3.0) * (x + 4.0) / 30240.0 * std::pow(H, -x - 5.0);  // B_6
  return sum + tail;
}

// Bernoulli polynomial B_alpha(x) for alpha in {2, 4, 6, 8} (even orders used
// by the kernel closed form), evaluated by Horner on fixed coefficients.
inline double bernoulli_poly(int alpha, double x) {
  switch (alpha) {
    case 2:
      return (x - 1.0) * x + 1.0 / 6.0;
    case 4:
      return (((x - 2.0) * x + 1.0) * x) * x - 1.0 / 30.0;
    case 6:
      return ((((x - 3.0) * x + 2.5) * x * x - 0.5) * x) * x + 1.0 / 42.0;
    case 8:
      return ((((((x - 4.0) * x + 14.0 / 3.0) * x) * x - 7.0 / 3.0) * x * x + 2.0 / 3.0) * x) * x - 1.0 / 30.0;
    default:
      throw std::invalid_argument("bernoulli_poly: alpha must be one of {2, 4, 6, 8}");
  }
}

}  // namespace latcbc
