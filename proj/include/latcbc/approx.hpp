// Approximation front-end: the index set A_d(M) = {h : r(h) <= M}, lattice
// Fourier coefficients through one length-n DFT, approximant evaluation with
// conjugate pairs stored once, and a seeded Monte Carlo L2 error estimate.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "latcbc/fft.hpp"
#include "latcbc/weights.hpp"

namespace latcbc {

struct IndexSet {
  int d = 0;
  double M = 0.0;
  std::vector<std::vector<int>> frequencies;  // each of length d
  std::vector<double> r_values;               // r(h) for the matching row
};

// r(h) = (1/gamma_{supp(h)}) prod_{j in supp(h)} |h_j|^alpha.
// A zero weight excludes the frequency; encoded as +infinity.
inline double r_of(const WeightFamily& w, int alpha, const std::vector<int>& h) {
  std::vector<int> supp;
  double prod = 1.0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j] != 0) {
      supp.push_back(static_cast<int>(j) + 1);
      prod *= std::pow(std::abs(static_cast<double>(h[j])), static_cast<double>(alpha));
    }
  }
  const double g = gamma_subset(w, supp);
  if (!(g > 0.0)) return std::numeric_limits<double>::infinity();
  return prod / g;
}

namespace detail {

// sup_{v >= u, v \ u within coordinates > j} gamma_v, tabulated per level:
// F[j][mask] for mask within {1..j}. Built top-down from F[d][mask] =
// gamma_mask.  Used as the admissible-completion bound during enumeration.
class SupersetBound {
 public:
  SupersetBound(const WeightFamily& w, int d) : d_(d), product_(w.kind == WeightKind::kProduct) {
    if (product_) {
      // Closed form: gamma_sup(u at level j) = gamma_u * prod_{t > j} max(1, gamma_t).
      suffix_ = std::vector<double>(static_cast<std::size_t>(d) + 2, 1.0);
      for (int j = d; j >= 1; --j) {
        suffix_[static_cast<std::size_t>(j)] =
            suffix_[static_cast<std::size_t>(j) + 1] * std::max(1.0, w.gamma_j[static_cast<std::size_t>(j - 1)]);
      }
      return;
    }
    if (d > 20) {
      throw std::invalid_argument("build_index_set: non-product weights limited to d <= 20");
    }
    levels_.resize(static_cast<std::size_t>(d) + 1);
    auto& top = levels_[static_cast<std::size_t>(d)];
    top.resize(std::size_t{1} << d);
    std::vector<int> u;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
      u.clear();
      for (int j = 0; j < d; ++j) {
        if (mask & (1u << j)) u.push_back(j + 1);
      }
      top[mask] = gamma_subset(w, u);
    }
    for (int j = d - 1; j >= 0; --j) {
      auto& cur = levels_[static_cast<std::size_t>(j)];
      const auto& nxt = levels_[static_cast<std::size_t>(j) + 1];
      cur.resize(std::size_t{1} << j);
      for (std::uint32_t mask = 0; mask < (1u << j); ++mask) {
        cur[mask] = std::max(nxt[mask], nxt[mask | (1u << j)]);
      }
    }
  }

  // gamma_u_partial: running product of selected gamma_j (product family only).
  double at(int level, std::uint32_t mask, double gamma_u_partial) const {
    if (product_) return gamma_u_partial * suffix_[static_cast<std::size_t>(level) + 1];
    return levels_[static_cast<std::size_t>(level)][mask];
  }

 private:
  int d_;
  bool product_;
  std::vector<double> suffix_;               // product family
  std::vector<std::vector<double>> levels_;  // general families, d <= 20
};

}  // namespace detail

inline IndexSet build_index_set(const WeightFamily& w, int d, int alpha, double M,
                                std::size_t cap = 10'000'000) {
  if (d < 1 || w.d < d) throw std::invalid_argument("build_index_set: bad d");
  if (alpha < 1) throw std::invalid_argument("build_index_set: bad alpha");
  IndexSet set;
  set.d = d;
  set.M = M;
  const detail::SupersetBound bound(w, d);
  const double slack = M * (1.0 + 1e-12);

  std::vector<int> mag(static_cast<std::size_t>(d), 0);  // |h_j| under construction
  std::vector<int> signed_h(static_cast<std::size_t>(d), 0);
  std::vector<int> nonzero_pos;

  // Expands all sign patterns of the completed magnitude vector, with
  // membership decided once by the canonical r_of evaluation.
  auto emit = [&](double /*prod*/) {
    std::vector<int> habs(mag.begin(), mag.end());
    const double r = r_of(w, alpha, habs);
    if (!(r <= M)) return;
    nonzero_pos.clear();
    for (int j = 0; j < d; ++j) {
      if (mag[static_cast<std::size_t>(j)] != 0) nonzero_pos.push_back(j);
    }
    const std::size_t patterns = std::size_t{1} << nonzero_pos.size();
    if (set.frequencies.size() + patterns > cap) {
      throw std::length_error("build_index_set: index set exceeds cap");
    }
    for (std::size_t bits = 0; bits < patterns; ++bits) {
      signed_h.assign(mag.begin(), mag.end());
      for (std::size_t t = 0; t < nonzero_pos.size(); ++t) {
        if (bits & (std::size_t{1} << t)) {
          signed_h[static_cast<std::size_t>(nonzero_pos[t])] = -signed_h[static_cast<std::size_t>(nonzero_pos[t])];
        }
      }
      set.frequencies.push_back(signed_h);
      set.r_values.push_back(r);
    }
  };

  // DFS over coordinates; prod carries prod |h_j|^alpha so far, gamma_u the
  // running product-weight value (product family only), mask the support.
  std::function<void(int, std::uint32_t, double, double)> dfs =
      [&](int j, std::uint32_t mask, double prod, double gamma_u) {
        const double b = bound.at(j, mask, gamma_u);
        if (!(b > 0.0) || prod > slack * b) return;  // no completion can reach r <= M
        if (j == d) {
          emit(prod);
          return;
        }
        dfs(j + 1, mask, prod, gamma_u);  // h_{j+1} = 0
        const double gj = (w.kind == WeightKind::kProduct) ? w.gamma_j[static_cast<std::size_t>(j)] : 1.0;
        for (int m = 1;; ++m) {
          const double p = prod * std::pow(static_cast<double>(m), static_cast<double>(alpha));
          const std::uint32_t nmask = mask | (1u << j);
          const double ng = (w.kind == WeightKind::kProduct) ? gamma_u * gj : 1.0;
          const double nb = bound.at(j + 1, nmask, ng);
          if (!(nb > 0.0) || p > slack * nb) break;  // r grows with m: done on this branch
          mag[static_cast<std::size_t>(j)] = m;
          dfs(j + 1, nmask, p, ng);
        }
        mag[static_cast<std::size_t>(j)] = 0;
      };
  dfs(0, 0u, 1.0, 1.0);
  return set;
}

// Brute-force membership oracle: scan the box [-H, H]^d.
inline IndexSet build_index_set_boxscan(const WeightFamily& w, int d, int alpha, double M,
                                        int H) {
  IndexSet set;
  set.d = d;
  set.M = M;
  std::vector<int> h(static_cast<std::size_t>(d), -H);
  for (;;) {
    const double r = r_of(w, alpha, h);
    if (r <= M) {
      set.frequencies.push_back(h);
      set.r_values.push_back(r);
    }
    int j = d - 1;
    while (j >= 0 && h[static_cast<std::size_t>(j)] == H) {
      h[static_cast<std::size_t>(j)] = -H;
      --j;
    }
    if (j < 0) break;
    ++h[static_cast<std::size_t>(j)];
  }
  return set;
}

struct Approximant {
  int d = 0;
  std::int64_t n = 0;
  std::vector<std::int64_t> z;
  // Conjugate pairs stored once: every entry has h = 0 or first nonzero
  // component positive; the mirror -h carries the conjugate coefficient.
  std::vector<std::vector<int>> freqs;
  std::vector<std::complex<double>> coeffs;
};

inline bool is_canonical_frequency(const std::vector<int>& h) {
  for (int v : h) {
    if (v != 0) return v > 0;
  }
  return true;  // h = 0
}

// Lattice points {kz/n}: x_j = (k z_j mod n) / n, exact in integer arithmetic.
inline std::vector<double> lattice_point(std::int64_t n, const std::vector<std::int64_t>& z,
                                         std::int64_t k) {
  std::vector<double> x(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    x[j] = static_cast<double>((k % n) * (z[j] % n) % n) / static_cast<double>(n);
  }
  return x;
}

// (1/n) sum_k f({kz/n}) e^{-2 pi i k (h.z)/n} = F[(h.z) mod n] / n, where F
// is the DFT of the sample vector: the exponent depends on k only through
// h.z mod n, so one transform serves every frequency.
inline Approximant lattice_coefficients(const std::vector<double>& samples, const IndexSet& A,
                                        std::int64_t n, const std::vector<std::int64_t>& z) {
  if (static_cast<std::int64_t>(samples.size()) != n) {
    throw std::invalid_argument("lattice_coefficients: need n samples");
  }
  if (static_cast<int>(z.size()) < A.d) {
    throw std::invalid_argument("lattice_coefficients: generating vector shorter than d");
  }
  std::vector<std::complex<double>> buf(samples.begin(), samples.end());
  const std::vector<std::complex<double>> F = dft(buf);
  Approximant ap;
  ap.d = A.d;
  ap.n = n;
  ap.z.assign(z.begin(), z.begin() + A.d);
  for (const auto& h : A.frequencies) {
    if (!is_canonical_frequency(h)) continue;
    std::int64_t idx = 0;
    for (int j = 0; j < A.d; ++j) {
      std::int64_t hj = h[static_cast<std::size_t>(j)] % n;
      if (hj < 0) hj += n;
      idx = (idx + hj * (ap.z[static_cast<std::size_t>(j)] % n)) % n;
    }
    ap.freqs.push_back(h);
    ap.coeffs.push_back(F[static_cast<std::size_t>(idx)] / static_cast<double>(n));
  }
  return ap;
}

// Coefficient for any frequency in the set (mirrors via conjugation).
inline std::complex<double> approximant_coefficient(const Approximant& ap,
                                                    const std::vector<int>& h) {
  std::vector<int> key = h;
  bool flipped = false;
  if (!is_canonical_frequency(key)) {
    for (int& v : key) v = -v;
    flipped = true;
  }
  for (std::size_t i = 0; i < ap.freqs.size(); ++i) {
    if (ap.freqs[i] == key) return flipped ? std::conj(ap.coeffs[i]) : ap.coeffs[i];
  }
  throw std::out_of_range("approximant_coefficient: frequency not in set");
}

// A(f)(x) = sum_h fhat_h e^{2 pi i h.x}; pairs are folded so the result is
// real by construction.
inline double evaluate_approximant(const Approximant& ap, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) < ap.d) {
    throw std::invalid_argument("evaluate_approximant: point dimension too small");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < ap.freqs.size(); ++i) {
    double phase = 0.0;
    bool zero = true;
    for (int j = 0; j < ap.d; ++j) {
      const int hj = ap.freqs[i][static_cast<std::size_t>(j)];
      if (hj != 0) {
        zero = false;
        phase += static_cast<double>(hj) * x[static_cast<std::size_t>(j)];
      }
    }
    if (zero) {
      acc += ap.coeffs[i].real();
    } else {
      const std::complex<double> e(std::cos(2.0 * std::numbers::pi * phase),
                                   std::sin(2.0 * std::numbers::pi * phase));
      acc += 2.0 * (ap.coeffs[i] * e).real();
    }
  }
  return acc;
}

// Root-mean-square of f - A(f) over seeded uniform samples in [0,1)^d.
inline double l2_error_estimate(const std::function<double(const std::vector<double>&)>& f,
                                const Approximant& ap, int num_samples, std::uint64_t seed) {
  if (num_samples < 1) throw std::invalid_argument("l2_error_estimate: need num_samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(ap.d));
  double acc = 0.0;
  for (int s = 0; s < num_samples; ++s) {
    for (int j = 0; j < ap.d; ++j) x[static_cast<std::size_t>(j)] = unif(rng);
    const double diff = f(x) - evaluate_approximant(ap, x);
    acc += diff * diff;
  }
  return std::sqrt(acc / static_cast<double>(num_samples));
}

}  // namespace latcbc
