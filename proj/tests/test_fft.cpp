#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "latcbc/circulant.hpp"
#include "latcbc/fft.hpp"
#include "latcbc/hankel.hpp"
#include "latcbc/kernel.hpp"
#include "latcbc/primes.hpp"

namespace {

std::vector<double> random_vector(std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> v(m);
  for (double& x : v) x = unif(rng);
  return v;
}

std::vector<double> naive_cyclic(const std::vector<double>& u, const std::vector<double>& v) {
  const std::size_t m = u.size();
  std::vector<double> w(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      w[i] += u[j] * v[(i + m - j) % m];
    }
  }
  return w;
}

std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double ang =
          -2.0 * std::numbers::pi * static_cast<double>(k * j % n) / static_cast<double>(n);
      acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

std::vector<double> naive_hankel(const std::vector<double>& c, const std::vector<double>& x,
                                 std::size_t out_len) {
  std::vector<double> y(out_len, 0.0);
  for (std::size_t t = 0; t < out_len; ++t) {
    for (std::size_t ell = 0; ell < x.size(); ++ell) {
      if (t + ell < c.size()) y[t] += c[t + ell] * x[ell];
    }
  }
  return y;
}

}  // namespace

TEST_CASE("FFT round-trips power-of-two inputs", "[fft]") {
  std::mt19937_64 rng(20240801);
  for (std::size_t size : {std::size_t{1}, std::size_t{2}, std::size_t{8}, std::size_t{64},
                           std::size_t{4096}, std::size_t{1} << 20}) {
    latcbc::Fft fft(size);
    std::vector<latcbc::Fft::cpx> a(size);
    double max_abs = 0.0;
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (auto& v : a) {
      v = {unif(rng), unif(rng)};
      max_abs = std::max({max_abs, std::abs(v.real()), std::abs(v.imag())});
    }
    const auto original = a;
    fft.forward(a);
    fft.inverse(a);
    for (std::size_t i = 0; i < size; ++i) {
      REQUIRE(std::abs(a[i] - original[i]) <= 1e-12 * std::max(1.0, max_abs));
    }
  }
}

TEST_CASE("next_pow2", "[fft]") {
  REQUIRE(latcbc::Fft::next_pow2(1) == 1);
  REQUIRE(latcbc::Fft::next_pow2(2) == 2);
  REQUIRE(latcbc::Fft::next_pow2(3) == 4);
  REQUIRE(latcbc::Fft::next_pow2(17) == 32);
  REQUIRE(latcbc::Fft::next_pow2(1024) == 1024);
}

TEST_CASE("cyclic_convolve delta identity", "[fft]") {
  const std::vector<double> u{1.0, 0.0, 0.0};
  const std::vector<double> v{0.3, -1.7, 2.5};
  const auto w = latcbc::cyclic_convolve(u, v);
  REQUIRE(w.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) REQUIRE(w[i] == Catch::Approx(v[i]).margin(1e-12));
}

TEST_CASE("cyclic_convolve hand example", "[fft]") {
  const auto w = latcbc::cyclic_convolve({1.0, 1.0}, {1.0, 1.0});
  REQUIRE(w[0] == Catch::Approx(2.0).margin(1e-12));
  REQUIRE(w[1] == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("cyclic_convolve matches naive oracle", "[fft]") {
  std::mt19937_64 rng(7);
  for (std::size_t m : {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{7},
                        std::size_t{13}, std::size_t{16}, std::size_t{31}}) {
    const auto u = random_vector(m, rng);
    const auto v = random_vector(m, rng);
    const auto fast = latcbc::cyclic_convolve(u, v);
    const auto slow = naive_cyclic(u, v);
    for (std::size_t i = 0; i < m; ++i) {
      REQUIRE(std::abs(fast[i] - slow[i]) <= 1e-10 * std::max(1.0, std::abs(slow[i])));
    }
  }
}

TEST_CASE("Bluestein DFT matches naive DFT at arbitrary lengths", "[fft]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{5},
                        std::size_t{12}, std::size_t{31}, std::size_t{100}, std::size_t{101}}) {
    std::vector<std::complex<double>> x(n);
    for (auto& v : x) v = {unif(rng), unif(rng)};
    const auto fast = latcbc::dft(x);
    const auto slow = naive_dft(x);
    for (std::size_t k = 0; k < n; ++k) {
      REQUIRE(std::abs(fast[k] - slow[k]) <= 1e-9 * std::max(1.0, std::abs(slow[k])));
    }
  }
}

TEST_CASE("hankel_apply hand example (1,2,3)", "[fft]") {
  const auto y = latcbc::hankel_apply({1.0, 2.0, 3.0}, {1.0, 1.0, 1.0}, 3);
  REQUIRE(y.size() == 3);
  REQUIRE(y[0] == Catch::Approx(6.0).margin(1e-12));
  REQUIRE(y[1] == Catch::Approx(5.0).margin(1e-12));
  REQUIRE(y[2] == Catch::Approx(3.0).margin(1e-12));
}

TEST_CASE("hankel_apply first-column example", "[fft]") {
  std::mt19937_64 rng(3);
  const std::size_t m = 11;
  const auto c = random_vector(m, rng);
  std::vector<double> e0(m, 0.0);
  e0[0] = 1.0;
  const auto y = latcbc::hankel_apply(c, e0, m);
  for (std::size_t i = 0; i < m; ++i) {
    REQUIRE(std::abs(y[i] - c[i]) <= 1e-12 * std::max(1.0, std::abs(c[i])));
  }
}

TEST_CASE("hankel_apply matches naive for all shapes up to m = 40", "[fft]") {
  std::mt19937_64 rng(13);
  for (std::size_t m = 1; m <= 40; ++m) {
    const auto c = random_vector(m, rng);
    for (std::size_t s = 1; s <= m; ++s) {
      const auto x = random_vector(s, rng);
      for (std::size_t out_len : {std::size_t{1}, (m + 1) / 2, m}) {
        const auto fast = latcbc::hankel_apply(c, x, out_len);
        const auto slow = naive_hankel(c, x, out_len);
        for (std::size_t t = 0; t < out_len; ++t) {
          REQUIRE(std::abs(fast[t] - slow[t]) <= 1e-10 * std::max(1.0, std::abs(slow[t])));
        }
      }
    }
  }
}

TEST_CASE("HankelPlan shared-transform path equals one-shot application", "[fft]") {
  std::mt19937_64 rng(17);
  const std::size_t m = 9;
  const auto c1 = random_vector(m, rng);
  auto c0 = c1;
  std::rotate(c0.begin(), c0.begin() + 1, c0.end());
  const std::size_t fft_size = latcbc::Fft::next_pow2(2 * m - 1);
  latcbc::HankelPlan h1(c1, fft_size), h0(c0, fft_size);
  const auto x = random_vector(5, rng);
  const auto xf = h1.transform_input(x);
  const auto a = h1.apply_transformed(xf, x.size(), m);
  const auto b = h0.apply_transformed(xf, x.size(), m);
  const auto a_ref = latcbc::hankel_apply(c1, x, m);
  const auto b_ref = latcbc::hankel_apply(c0, x, m);
  for (std::size_t t = 0; t < m; ++t) {
    REQUIRE(std::abs(a[t] - a_ref[t]) <= 1e-11);
    REQUIRE(std::abs(b[t] - b_ref[t]) <= 1e-11);
  }
}

TEST_CASE("primitive_root examples and generation property", "[fft]") {
  REQUIRE(latcbc::primitive_root(7) == 3);
  REQUIRE(latcbc::primitive_root(5) == 2);
  REQUIRE(latcbc::primitive_root(101) == 2);
  for (std::int64_t n : {3, 5, 7, 11, 13, 31, 61}) {
    const std::int64_t g = latcbc::primitive_root(n);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::int64_t cur = 1;
    for (std::int64_t a = 0; a < n - 1; ++a) {
      REQUIRE(!seen[static_cast<std::size_t>(cur)]);
      seen[static_cast<std::size_t>(cur)] = true;
      cur = cur * g % n;
    }
    REQUIRE(cur == 1);  // order exactly n - 1
  }
}

TEST_CASE("is_prime and factorization", "[fft]") {
  REQUIRE(latcbc::is_prime(2));
  REQUIRE(latcbc::is_prime(3));
  REQUIRE(latcbc::is_prime(101));
  REQUIRE(latcbc::is_prime(128021));
  REQUIRE_FALSE(latcbc::is_prime(1));
  REQUIRE_FALSE(latcbc::is_prime(102));
  REQUIRE_FALSE(latcbc::is_prime(100001));  // 11 * 9091
  const auto f = latcbc::distinct_prime_factors(100);
  REQUIRE(f == std::vector<std::int64_t>{2, 5});
}

TEST_CASE("apply_kernel_matrix zero and indicator examples", "[fft]") {
  const std::int64_t n = 11;
  const latcbc::OmegaTable om = latcbc::build_omega_table(n, 2);
  latcbc::CirculantPlan plan(n);
  const std::vector<double> zeros(static_cast<std::size_t>(n), 0.0);
  for (double y : latcbc::apply_kernel_matrix(plan, om.omega0, zeros)) {
    REQUIRE(y == Catch::Approx(0.0).margin(1e-13));
  }
  std::vector<double> e0(static_cast<std::size_t>(n), 0.0);
  e0[0] = 1.0;
  for (double y : latcbc::apply_kernel_matrix(plan, om.omega0, e0)) {
    REQUIRE(y == Catch::Approx(om.omega0[0]).margin(1e-12));
  }
}

TEST_CASE("apply_kernel_matrix matches naive for primes up to 61", "[fft]") {
  std::mt19937_64 rng(19);
  for (std::int64_t n : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61}) {
    const latcbc::OmegaTable om = latcbc::build_omega_table(n, 2);
    const std::vector<double> psi = om.psi_exact_row();
    for (const std::vector<double>* kernel : {&om.omega0, &psi}) {
      for (int rep = 0; rep < 20; ++rep) {
        const auto x = random_vector(static_cast<std::size_t>(n), rng);
        const auto slow = latcbc::apply_kernel_matrix_naive(n, *kernel, x);
        std::vector<double> fast;
        if (n >= 3) {
          latcbc::CirculantPlan plan(n);
          fast = latcbc::apply_kernel_matrix(plan, *kernel, x);
        } else {
          fast = slow;
        }
        REQUIRE(fast.size() == static_cast<std::size_t>(n - 1));
        for (std::size_t i = 0; i < fast.size(); ++i) {
          REQUIRE(std::abs(fast[i] - slow[i]) <= 1e-9 * std::max(1.0, std::abs(slow[i])));
        }
      }
    }
  }
}
