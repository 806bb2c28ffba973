// Reference implementations used for cross-validation: general weights stored
// as an explicit table over all 2^d subsets, the V/W assembly evaluated by
// direct subset enumeration, and a construction loop that applies the kernel
// matrices naively. No Hankel/circulant machinery, no per-family recursions.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "latcbc/cbc.hpp"
#include "latcbc/kernel.hpp"
#include "latcbc/weights.hpp"

namespace latcbc {

// gamma_u over all subsets of {1..d}, indexed by bitmask (bit j-1 <=> j in u).
// Exponential storage; intended for small-d validation only.
struct GeneralWeights {
  int d = 0;
  std::vector<double> by_mask;

  static GeneralWeights from_family(const WeightFamily& w, int d) {
    if (d < 1 || d > 20) throw std::invalid_argument("GeneralWeights: need 1 <= d <= 20");
    if (w.d < d) throw std::invalid_argument("GeneralWeights: family covers fewer than d coordinates");
    GeneralWeights g;
    g.d = d;
    g.by_mask.resize(std::size_t{1} << d);
    std::vector<int> u;
    for (std::uint32_t mask = 0; mask < g.by_mask.size(); ++mask) {
      u.clear();
      for (int j = 0; j < d; ++j) {
        if (mask & (1u << j)) u.push_back(j + 1);
      }
      g.by_mask[mask] = gamma_subset(w, u);
    }
    return g;
  }

  double at(std::uint32_t mask) const { return by_mask[mask]; }
};

// V_{d,s}(k) and W_{d,s}(k) by direct enumeration of the defining sums:
//   V = sum_{w subset {s+1..d}} (2 zeta(2a))^{|w|} * A_w(k)^2
//   W = sum_{w subset {s+1..d}} (2 zeta(2a))^{|w|} * A_w(k) * B_w(k)
//   A_w(k) = sum_{u subset {1..s-1}} gamma_{u + {s} + w} prod_{j in u} omega(z_j, k)
//   B_w(k) = sum_{u subset {1..s-1}} gamma_{u + w}      prod_{j in u} omega(z_j, k)
inline std::pair<std::vector<double>, std::vector<double>> brute_force_vw(
    const GeneralWeights& gw, const std::vector<std::int64_t>& z_prefix, int s, int d,
    const OmegaTable& om) {
  if (s < 1 || s > d || d > gw.d) throw std::invalid_argument("brute_force_vw: bad s/d");
  if (static_cast<int>(z_prefix.size()) < s - 1) {
    throw std::invalid_argument("brute_force_vw: prefix must cover z_1..z_{s-1}");
  }
  const std::int64_t n = om.n;
  const std::uint32_t s_bit = 1u << (s - 1);
  const std::uint32_t u_count = 1u << (s - 1);
  // Subsets w of {s+1..d} as masks over bits s..d-1.
  std::vector<std::uint32_t> w_masks;
  std::vector<int> w_sizes;
  const int tail_len = d - s;
  for (std::uint32_t wm = 0; wm < (1u << tail_len); ++wm) {
    std::uint32_t mask = 0;
    int size = 0;
    for (int b = 0; b < tail_len; ++b) {
      if (wm & (1u << b)) {
        mask |= 1u << (s + b);
        ++size;
      }
    }
    w_masks.push_back(mask);
    w_sizes.push_back(size);
  }
  std::vector<double> zeta_pow(static_cast<std::size_t>(tail_len + 1), 1.0);
  for (int i = 1; i <= tail_len; ++i) {
    zeta_pow[static_cast<std::size_t>(i)] = zeta_pow[static_cast<std::size_t>(i - 1)] * om.two_zeta_2alpha;
  }
  std::vector<double> V(static_cast<std::size_t>(n)), W(static_cast<std::size_t>(n));
  std::vector<double> u_prod(u_count);
  for (std::int64_t k = 0; k < n; ++k) {
    // prod_{j in u} omega(z_j, k) for all u subset {1..s-1}, built by peeling
    // the lowest set bit.
    u_prod[0] = 1.0;
    for (std::uint32_t um = 1; um < u_count; ++um) {
      const int low = __builtin_ctz(um);
      u_prod[um] = u_prod[um & (um - 1)] * om.omega(z_prefix[static_cast<std::size_t>(low)], k);
    }
    double v_acc = 0.0, w_acc = 0.0;
    for (std::size_t wi = 0; wi < w_masks.size(); ++wi) {
      const std::uint32_t wm = w_masks[wi];
      double a = 0.0, b = 0.0;
      for (std::uint32_t um = 0; um < u_count; ++um) {
        a += gw.at(um | s_bit | wm) * u_prod[um];
        b += gw.at(um | wm) * u_prod[um];
      }
      const double zp = zeta_pow[static_cast<std::size_t>(w_sizes[wi])];
      v_acc += zp * a * a;
      w_acc += zp * a * b;
    }
    V[static_cast<std::size_t>(k)] = v_acc;
    W[static_cast<std::size_t>(k)] = w_acc;
  }
  return {std::move(V), std::move(W)};
}

// T_{d,s} row over z = 1..n-1 evaluated without the circulant factorization.
inline std::vector<double> brute_force_t_row(const std::vector<double>& V, const std::vector<double>& W,
                                             const OmegaTable& om) {
  const std::int64_t n = om.n;
  std::vector<double> T(static_cast<std::size_t>(n - 1));
  for (std::int64_t z = 1; z < n; ++z) {
    double acc_psi = 0.0, acc_om = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
      const double w0 = om.omega0[static_cast<std::size_t>((z * k) % n)];
      acc_psi += (w0 * w0 - om.two_zeta_2alpha) * V[static_cast<std::size_t>(k)];
      acc_om += w0 * W[static_cast<std::size_t>(k)];
    }
    T[static_cast<std::size_t>(z - 1)] = (acc_psi + 2.0 * acc_om) / static_cast<double>(n);
  }
  return T;
}

// Full CBC construction through the brute-force assembly, sharing only the
// omega table and the argmin tie rule with the fast engine.
inline GeneratingVector construct_brute_force(std::int64_t n, int d, const GeneralWeights& gw, int alpha) {
  if (!is_prime(n)) throw std::invalid_argument("construct_brute_force: n must be prime");
  if (d < 1 || d > gw.d) throw std::invalid_argument("construct_brute_force: bad d");
  const OmegaTable om = build_omega_table(n, alpha);
  GeneratingVector gv;
  gv.n = n;
  gv.d = d;
  gv.alpha = alpha;
  std::vector<std::int64_t> prefix;
  for (int s = 1; s <= d; ++s) {
    const auto [V, W] = brute_force_vw(gw, prefix, s, d, om);
    const std::vector<double> row = brute_force_t_row(V, W, om);
    const std::int64_t zs = (s == 1) ? 1 : CbcEngine::argmin_row(row, n);
    prefix.push_back(zs);
    gv.z.push_back(zs);
    gv.T.push_back(row[static_cast<std::size_t>(zs - 1)]);
  }
  double sd = 0.0;
  for (double t : gv.T) sd += t;
  gv.Sd = sd;
  return gv;
}

}  // namespace latcbc
