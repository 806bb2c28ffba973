// Primality, factorization and primitive roots for prime moduli.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace latcbc {

// (a * b) mod m for 0 <= a, b < m <= ~3e9; the product fits in unsigned 64-bit
// for every modulus this library accepts (n below 2^31).
inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return (a * b) % m;
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (std::int64_t p = 3; p * p <= n; p += 2) {
    if (n % p == 0) return false;
  }
  return true;
}

// Distinct prime factors, ascending.
inline std::vector<std::int64_t> distinct_prime_factors(std::int64_t n) {
  std::vector<std::int64_t> factors;
  for (std::int64_t p = 2; p * p <= n; p == 2 ? p = 3 : p += 2) {
    if (n % p == 0) {
      factors.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) factors.push_back(n);
  return factors;
}

// Smallest primitive root modulo an odd prime n (n >= 3).
inline std::int64_t primitive_root(std::int64_t n) {
  if (n < 3 || !is_prime(n)) throw std::invalid_argument("primitive_root: n must be an odd prime >= 3");
  const std::int64_t order = n - 1;
  const std::vector<std::int64_t> factors = distinct_prime_factors(order);
  for (std::int64_t g = 2; g < n; ++g) {
    bool ok = true;
    for (std::int64_t p : factors) {
      if (pow_mod(static_cast<std::uint64_t>(g), static_cast<std::uint64_t>(order / p),
                  static_cast<std::uint64_t>(n)) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw std::logic_error("primitive_root: search exhausted (non-prime modulus?)");
}

inline std::int64_t inverse_mod(std::int64_t a, std::int64_t prime_m) {
  return static_cast<std::int64_t>(pow_mod(static_cast<std::uint64_t>(a % prime_m),
                                           static_cast<std::uint64_t>(prime_m - 2),
                                           static_cast<std::uint64_t>(prime_m)));
}

}  // namespace latcbc
