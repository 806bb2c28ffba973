// Component-by-component construction of rank-1 lattice generating vectors
// minimizing the approximation search criterion T_{d,s}, with per-family fast
// assembly of the auxiliary vectors V, W:
//   product          O(n) per step via a running product
//   order-dependent  Hankel matrix products with binomial diagonal
//   finite-order     order-dependent with the zero-extended Gamma sequence
//   pod              Hankel matrix products with precomputed C coefficients
//   spod             Hankel matrix products with precomputed G matrices
// The search over z itself applies the Omega/Psi kernel matrices through the
// prime-modulus circulant factorization.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "latcbc/circulant.hpp"
#include "latcbc/hankel.hpp"
#include "latcbc/kernel.hpp"
#include "latcbc/parallel.hpp"
#include "latcbc/primes.hpp"
#include "latcbc/weights.hpp"

namespace latcbc {

struct GeneratingVector {
  std::int64_t n = 0;
  int d = 0;
  int alpha = 0;
  std::vector<std::int64_t> z;  // z[0] == 1 always
  std::vector<double> T;        // T[s-1] = criterion value at the chosen z_s
  double Sd = 0.0;              // sum of T entries, accumulated in step order
};

// Symmetric matrix stored as the packed upper triangle; symmetry of the G
// recursion is therefore structural rather than asserted.
struct SymMatrix {
  int order = 0;
  std::vector<double> upper;  // row-major upper triangle

  explicit SymMatrix(int order_ = 0)
      : order(order_), upper(static_cast<std::size_t>(order_) * (order_ + 1) / 2, 0.0) {}

  std::size_t index(int t, int tp) const {
    // requires t <= tp
    return static_cast<std::size_t>(t) * (2 * order - t - 1) / 2 + static_cast<std::size_t>(tp);
  }

  double at(int t, int tp) const {
    if (t > tp) std::swap(t, tp);
    return upper[index(t, tp)];
  }

  double& ref(int t, int tp) {
    if (t > tp) std::swap(t, tp);
    return upper[index(t, tp)];
  }
};

// C[s-1][m] = sum over subsets w of {s+1..d} with |w| = m of
// prod_{j in w} (2 zeta(2 alpha) gamma_j^2), computed by the downward
// recursion from s = d.
inline std::vector<std::vector<double>> precompute_pod_c(const WeightFamily& w, int d,
                                                         double two_zeta_2alpha) {
  if (w.kind != WeightKind::kPod) throw std::invalid_argument("precompute_pod_c: family must be pod");
  std::vector<std::vector<double>> C(static_cast<std::size_t>(d));
  C[static_cast<std::size_t>(d - 1)] = {1.0};
  for (int s = d - 1; s >= 1; --s) {
    const auto& prev = C[static_cast<std::size_t>(s)];
    const double g = w.gamma_j[static_cast<std::size_t>(s)];  // gamma_{s+1}
    const double f = two_zeta_2alpha * g * g;
    std::vector<double> cur(static_cast<std::size_t>(d - s + 1), 0.0);
    for (int m = 0; m <= d - s; ++m) {
      double v = m <= d - s - 1 ? prev[static_cast<std::size_t>(m)] : 0.0;
      if (m >= 1) v += f * prev[static_cast<std::size_t>(m - 1)];
      cur[static_cast<std::size_t>(m)] = v;
    }
    C[static_cast<std::size_t>(s - 1)] = std::move(cur);
  }
  return C;
}

// G[s-1] of order (d-s)*sigma + 1, from the downward recursion
// [G_{d,s}]_{t,t'} = [G_{d,s+1}]_{t,t'}
//   + 2 zeta(2 alpha) sum_{nu, nu'} gamma_{s+1,nu} gamma_{s+1,nu'}
//                                   [G_{d,s+1}]_{t-nu, t'-nu'}
// starting from the 1x1 matrix G_{d,d} = [1].
inline std::vector<SymMatrix> precompute_spod_g(const WeightFamily& w, int d,
                                                double two_zeta_2alpha) {
  if (w.kind != WeightKind::kSpod) throw std::invalid_argument("precompute_spod_g: family must be spod");
  const int sigma = w.sigma;
  std::vector<SymMatrix> G(static_cast<std::size_t>(d));
  G[static_cast<std::size_t>(d - 1)] = SymMatrix(1);
  G[static_cast<std::size_t>(d - 1)].ref(0, 0) = 1.0;
  for (int s = d - 1; s >= 1; --s) {
    const SymMatrix& prev = G[static_cast<std::size_t>(s)];
    const auto& g_row = w.gamma_j_nu[static_cast<std::size_t>(s)];  // gamma_{s+1, .}
    const int order = (d - s) * sigma + 1;
    SymMatrix cur(order);
    for (int t = 0; t < order; ++t) {
      for (int tp = t; tp < order; ++tp) {
        double v = (t < prev.order && tp < prev.order) ? prev.at(t, tp) : 0.0;
        double cross = 0.0;
        for (int nu = 1; nu <= std::min(sigma, t); ++nu) {
          const double gn = g_row[static_cast<std::size_t>(nu - 1)];
          if (gn == 0.0) continue;
          for (int nup = 1; nup <= std::min(sigma, tp); ++nup) {
            const int a = t - nu, b = tp - nup;
            if (a >= prev.order || b >= prev.order) continue;
            cross += gn * g_row[static_cast<std::size_t>(nup - 1)] * prev.at(a, b);
          }
        }
        cur.ref(t, tp) = v + two_zeta_2alpha * cross;
      }
    }
    G[static_cast<std::size_t>(s - 1)] = std::move(cur);
  }
  return G;
}

namespace detail {

inline double quad_form_sym(const SymMatrix& G, const std::vector<double>& a) {
  double diag = 0.0, off = 0.0;
  for (int t = 0; t < G.order; ++t) {
    diag += G.at(t, t) * a[static_cast<std::size_t>(t)] * a[static_cast<std::size_t>(t)];
    for (int tp = t + 1; tp < G.order; ++tp) {
      off += G.at(t, tp) * a[static_cast<std::size_t>(t)] * a[static_cast<std::size_t>(tp)];
    }
  }
  return diag + 2.0 * off;
}

inline double bilinear_form_sym(const SymMatrix& G, const std::vector<double>& a,
                                const std::vector<double>& b) {
  double acc = 0.0;
  for (int t = 0; t < G.order; ++t) {
    acc += G.at(t, t) * a[static_cast<std::size_t>(t)] * b[static_cast<std::size_t>(t)];
    for (int tp = t + 1; tp < G.order; ++tp) {
      acc += G.at(t, tp) * (a[static_cast<std::size_t>(t)] * b[static_cast<std::size_t>(tp)] +
                            a[static_cast<std::size_t>(tp)] * b[static_cast<std::size_t>(t)]);
    }
  }
  return acc;
}

}  // namespace detail

class CbcEngine {
 public:
  CbcEngine(std::int64_t n, int d, WeightFamily w, int alpha)
      : n_(n), d_(d), alpha_(alpha), w_(std::move(w)), om_(build_omega_table(n, alpha)) {
    if (!is_prime(n_)) throw std::invalid_argument("CbcEngine: n must be prime");
    if (d_ < 1) throw std::invalid_argument("CbcEngine: need d >= 1");
    if (w_.d < d_) throw std::invalid_argument("CbcEngine: weight family covers fewer than d coordinates");
    psi_row_ = om_.psi_exact_row();
    if (n_ >= 3) {
      plan_.emplace(n_);
      psi_symbol_ = plan_->make_symbol(psi_row_);
      omega_symbol_ = plan_->make_symbol(om_.omega0);
    }
    const std::size_t un = static_cast<std::size_t>(n_);
    switch (w_.kind) {
      case WeightKind::kProduct: {
        prod_P_.assign(un, 1.0);
        prod_tail_.assign(static_cast<std::size_t>(d_ + 1), 1.0);
        for (int s = d_ - 1; s >= 0; --s) {
          const double g = w_.gamma_j[static_cast<std::size_t>(s)];  // gamma_{s+1}
          prod_tail_[static_cast<std::size_t>(s)] =
              prod_tail_[static_cast<std::size_t>(s + 1)] * (1.0 + om_.two_zeta_2alpha * g * g);
        }
        break;
      }
      case WeightKind::kOrderDependent:
      case WeightKind::kFiniteOrder:
      case WeightKind::kPod: {
        P_.assign(static_cast<std::size_t>(d_ + 1), std::vector<double>());
        P_[0].assign(un, 1.0);
        for (int ell = 1; ell <= d_; ++ell) P_[static_cast<std::size_t>(ell)].assign(un, 0.0);
        std::vector<double> sym1(static_cast<std::size_t>(d_)), sym0(static_cast<std::size_t>(d_));
        for (int i = 0; i < d_; ++i) {
          sym1[static_cast<std::size_t>(i)] = w_.order_weight(i + 1);
          sym0[static_cast<std::size_t>(i)] = w_.order_weight(i);
        }
        const std::size_t fft_size = Fft::next_pow2(2 * static_cast<std::size_t>(d_) - 1);
        h1_ = std::make_unique<HankelPlan>(std::move(sym1), fft_size);
        h0_ = std::make_unique<HankelPlan>(std::move(sym0), fft_size);
        if (w_.kind == WeightKind::kPod) C_ = precompute_pod_c(w_, d_, om_.two_zeta_2alpha);
        break;
      }
      case WeightKind::kSpod: {
        const int rows = d_ * w_.sigma + 1;
        P_.assign(static_cast<std::size_t>(rows), std::vector<double>());
        P_[0].assign(un, 1.0);
        for (int ell = 1; ell < rows; ++ell) P_[static_cast<std::size_t>(ell)].assign(un, 0.0);
        const std::size_t sym_len = static_cast<std::size_t>((d_ - 1) * w_.sigma + 1);
        spod_fft_size_ = Fft::next_pow2(2 * sym_len - 1);
        std::vector<double> sym0(sym_len);
        for (std::size_t i = 0; i < sym_len; ++i) sym0[i] = w_.Gamma_ell[i];
        h0_ = std::make_unique<HankelPlan>(std::move(sym0), spod_fft_size_);
        G_ = precompute_spod_g(w_, d_, om_.two_zeta_2alpha);
        break;
      }
    }
  }

  std::int64_t n() const { return n_; }
  int d() const { return d_; }
  int alpha() const { return alpha_; }
  int completed_steps() const { return s_; }
  bool done() const { return s_ == d_; }
  const OmegaTable& omega_table() const { return om_; }
  const std::vector<std::vector<double>>& pod_c() const { return C_; }
  const std::vector<SymMatrix>& spod_g() const { return G_; }

  // V_{d,s}(k) and W_{d,s}(k) for the upcoming step s = completed_steps() + 1.
  std::pair<std::vector<double>, std::vector<double>> assemble_vw() const {
    if (done()) throw std::logic_error("assemble_vw: construction already complete");
    const int s = s_ + 1;
    const std::size_t un = static_cast<std::size_t>(n_);
    std::vector<double> V(un), W(un);
    switch (w_.kind) {
      case WeightKind::kProduct: {
        const double gs = w_.gamma_j[static_cast<std::size_t>(s - 1)];
        const double tail = prod_tail_[static_cast<std::size_t>(s)];
        const double wf = gs * tail, vf = gs * wf;
        for (std::size_t k = 0; k < un; ++k) {
          const double p = prod_P_[k];
          V[k] = vf * p;
          W[k] = wf * p;
        }
        break;
      }
      case WeightKind::kOrderDependent:
      case WeightKind::kFiniteOrder:
      case WeightKind::kPod: {
        const int out_len = d_ - s + 1;
        std::vector<double> D(static_cast<std::size_t>(out_len));
        if (w_.kind == WeightKind::kPod) {
          D = C_[static_cast<std::size_t>(s - 1)];
        } else {
          // binomial(d-s, m) * (2 zeta(2 alpha))^m via the additive recurrence
          double binom = 1.0;
          double zpow = 1.0;
          for (int m = 0; m < out_len; ++m) {
            D[static_cast<std::size_t>(m)] = binom * zpow;
            binom = binom * static_cast<double>(d_ - s - m) / static_cast<double>(m + 1);
            zpow *= om_.two_zeta_2alpha;
          }
        }
        const double gs = w_.kind == WeightKind::kPod ? w_.gamma_j[static_cast<std::size_t>(s - 1)] : 1.0;
        parallel_for(n_, [&](std::int64_t lo, std::int64_t hi) {
          std::vector<double> p(static_cast<std::size_t>(s));
          for (std::int64_t k = lo; k < hi; ++k) {
            for (int ell = 0; ell < s; ++ell) {
              p[static_cast<std::size_t>(ell)] = P_[static_cast<std::size_t>(ell)][static_cast<std::size_t>(k)];
            }
            const auto xf = h1_->transform_input(p);
            const auto a = h1_->apply_transformed(xf, p.size(), static_cast<std::size_t>(out_len));
            const auto b = h0_->apply_transformed(xf, p.size(), static_cast<std::size_t>(out_len));
            double v = 0.0, wv = 0.0;
            for (int m = 0; m < out_len; ++m) {
              const double dm = D[static_cast<std::size_t>(m)];
              v += dm * a[static_cast<std::size_t>(m)] * a[static_cast<std::size_t>(m)];
              wv += dm * a[static_cast<std::size_t>(m)] * b[static_cast<std::size_t>(m)];
            }
            V[static_cast<std::size_t>(k)] = gs * gs * v;
            W[static_cast<std::size_t>(k)] = gs * wv;
          }
        });
        break;
      }
      case WeightKind::kSpod: {
        const int sigma = w_.sigma;
        const int p_len = (s - 1) * sigma + 1;
        const int out_len = (d_ - s) * sigma + 1;
        // Gamma*_i = sum_nu gamma_{s,nu} Gamma_{i+nu}, rebuilt for each step.
        const auto& g_row = w_.gamma_j_nu[static_cast<std::size_t>(s - 1)];
        const std::size_t sym_len = static_cast<std::size_t>((d_ - 1) * sigma + 1);
        std::vector<double> sym_star(sym_len, 0.0);
        for (std::size_t i = 0; i < sym_len; ++i) {
          double acc = 0.0;
          for (int nu = 1; nu <= sigma; ++nu) {
            acc += g_row[static_cast<std::size_t>(nu - 1)] * w_.Gamma_ell[i + static_cast<std::size_t>(nu)];
          }
          sym_star[i] = acc;
        }
        HankelPlan hstar(std::move(sym_star), spod_fft_size_);
        const SymMatrix& G = G_[static_cast<std::size_t>(s - 1)];
        parallel_for(n_, [&](std::int64_t lo, std::int64_t hi) {
          std::vector<double> p(static_cast<std::size_t>(p_len));
          for (std::int64_t k = lo; k < hi; ++k) {
            for (int ell = 0; ell < p_len; ++ell) {
              p[static_cast<std::size_t>(ell)] = P_[static_cast<std::size_t>(ell)][static_cast<std::size_t>(k)];
            }
            const auto xf = hstar.transform_input(p);
            const auto a = hstar.apply_transformed(xf, p.size(), static_cast<std::size_t>(out_len));
            const auto b = h0_->apply_transformed(xf, p.size(), static_cast<std::size_t>(out_len));
            V[static_cast<std::size_t>(k)] = detail::quad_form_sym(G, a);
            W[static_cast<std::size_t>(k)] = detail::bilinear_form_sym(G, a, b);
          }
        });
        break;
      }
    }
    return {std::move(V), std::move(W)};
  }

  // T_{d,s}(z_1..z_{s-1}, z) for all z = 1..n-1, as row index z-1.
  std::vector<double> t_row() const {
    const auto [V, W] = assemble_vw();
    return t_row_from_vw(V, W);
  }

  std::vector<double> t_row_from_vw(const std::vector<double>& V, const std::vector<double>& W) const {
    const double inv_n = 1.0 / static_cast<double>(n_);
    if (plan_) {
      const auto ypsi = plan_->apply(psi_symbol_, V, psi_row_[0]);
      const auto yom = plan_->apply(omega_symbol_, W, om_.omega0[0]);
      std::vector<double> T(static_cast<std::size_t>(n_ - 1));
      for (std::size_t i = 0; i < T.size(); ++i) T[i] = inv_n * (ypsi[i] + 2.0 * yom[i]);
      return T;
    }
    const auto ypsi = apply_kernel_matrix_naive(n_, psi_row_, V);
    const auto yom = apply_kernel_matrix_naive(n_, om_.omega0, W);
    std::vector<double> T(static_cast<std::size_t>(n_ - 1));
    for (std::size_t i = 0; i < T.size(); ++i) T[i] = inv_n * (ypsi[i] + 2.0 * yom[i]);
    return T;
  }

  // Single-row evaluation, O(n) given V and W; used by the scoring path.
  double t_single(std::int64_t zs) const {
    const auto [V, W] = assemble_vw();
    return t_single_from_vw(zs, V, W);
  }

  double t_single_from_vw(std::int64_t zs, const std::vector<double>& V,
                          const std::vector<double>& W) const {
    if (zs < 1 || zs >= n_) throw std::invalid_argument("t_single: z out of range");
    double acc_psi = 0.0, acc_om = 0.0;
    for (std::int64_t k = 0; k < n_; ++k) {
      const std::size_t m = static_cast<std::size_t>((zs * k) % n_);
      acc_psi += psi_row_[m] * V[static_cast<std::size_t>(k)];
      acc_om += om_.omega0[m] * W[static_cast<std::size_t>(k)];
    }
    return (acc_psi + 2.0 * acc_om) / static_cast<double>(n_);
  }

  // Deterministic argmin over the candidate row. Candidates z and n-z always
  // tie in exact arithmetic (omega0[m] == omega0[n-m]), so only the lower
  // half is scanned; remaining near-ties within a small relative window
  // collapse to the smallest z so that independently computed rows (fast vs
  // brute-force paths) select identical components.
  static std::int64_t argmin_row(const std::vector<double>& t_row, std::int64_t n) {
    const std::int64_t half = std::max<std::int64_t>(1, (n - 1) / 2);
    double best = t_row[0];
    for (std::int64_t z = 2; z <= half; ++z) {
      best = std::min(best, t_row[static_cast<std::size_t>(z - 1)]);
    }
    const double tol = 1e-11 * std::abs(best);
    for (std::int64_t z = 1; z <= half; ++z) {
      if (t_row[static_cast<std::size_t>(z - 1)] <= best + tol) return z;
    }
    return 1;
  }

  // Applies the per-family update after fixing z_s, recording (z_s, t_value).
  void advance(std::int64_t zs, double t_value) {
    if (done()) throw std::logic_error("advance: construction already complete");
    if (zs < 1 || zs >= n_) throw std::invalid_argument("advance: z out of range");
    const int s = s_ + 1;
    const std::size_t un = static_cast<std::size_t>(n_);
    switch (w_.kind) {
      case WeightKind::kProduct: {
        const double gs = w_.gamma_j[static_cast<std::size_t>(s - 1)];
        for (std::size_t k = 0; k < un; ++k) {
          const double f = 1.0 + gs * om_.omega0[static_cast<std::size_t>((zs * static_cast<std::int64_t>(k)) % n_)];
          prod_P_[k] *= f * f;
        }
        break;
      }
      case WeightKind::kOrderDependent:
      case WeightKind::kFiniteOrder:
      case WeightKind::kPod: {
        const double gs = w_.kind == WeightKind::kPod ? w_.gamma_j[static_cast<std::size_t>(s - 1)] : 1.0;
        parallel_for(n_, [&](std::int64_t lo, std::int64_t hi) {
          for (std::int64_t k = lo; k < hi; ++k) {
            const double om = gs * om_.omega0[static_cast<std::size_t>((zs * k) % n_)];
            for (int ell = std::min(s, d_); ell >= 1; --ell) {
              P_[static_cast<std::size_t>(ell)][static_cast<std::size_t>(k)] +=
                  om * P_[static_cast<std::size_t>(ell - 1)][static_cast<std::size_t>(k)];
            }
          }
        });
        break;
      }
      case WeightKind::kSpod: {
        const int sigma = w_.sigma;
        const auto& g_row = w_.gamma_j_nu[static_cast<std::size_t>(s - 1)];
        const int top = std::min(s * sigma, d_ * sigma);
        parallel_for(n_, [&](std::int64_t lo, std::int64_t hi) {
          for (std::int64_t k = lo; k < hi; ++k) {
            const double om = om_.omega0[static_cast<std::size_t>((zs * k) % n_)];
            for (int ell = top; ell >= 1; --ell) {
              double acc = 0.0;
              for (int nu = 1; nu <= std::min(sigma, ell); ++nu) {
                acc += g_row[static_cast<std::size_t>(nu - 1)] *
                       P_[static_cast<std::size_t>(ell - nu)][static_cast<std::size_t>(k)];
              }
              P_[static_cast<std::size_t>(ell)][static_cast<std::size_t>(k)] += om * acc;
            }
          }
        });
        break;
      }
    }
    z_.push_back(zs);
    T_.push_back(t_value);
    ++s_;
  }

  // Runs the remaining steps, choosing each component by the argmin rule
  // (z_1 = 1 unconditionally: the first-step criterion row is constant).
  // The recorded T value is the direct single-row sum rather than the
  // accelerated row entry, so rescoring the finished vector through
  // eval_sd reproduces the T history bitwise.
  GeneratingVector run() {
    while (!done()) {
      const auto [V, W] = assemble_vw();
      const std::vector<double> row = t_row_from_vw(V, W);
      const std::int64_t zs = (s_ + 1 == 1) ? 1 : argmin_row(row, n_);
      advance(zs, t_single_from_vw(zs, V, W));
    }
    return result();
  }

  GeneratingVector result() const {
    if (!done()) throw std::logic_error("result: construction not complete");
    GeneratingVector gv;
    gv.n = n_;
    gv.d = d_;
    gv.alpha = alpha_;
    gv.z = z_;
    gv.T = T_;
    double sd = 0.0;
    for (double t : T_) sd += t;
    gv.Sd = sd;
    return gv;
  }

 private:
  std::int64_t n_;
  int d_;
  int alpha_;
  WeightFamily w_;
  OmegaTable om_;
  std::vector<double> psi_row_;
  std::optional<CirculantPlan> plan_;
  std::vector<CirculantPlan::cpx> psi_symbol_, omega_symbol_;

  std::vector<double> prod_P_;
  std::vector<double> prod_tail_;  // tail[s] = prod_{j=s+1..d}(1 + 2 zeta(2a) gamma_j^2)
  std::vector<std::vector<double>> P_;  // P_[ell][k]
  std::vector<std::vector<double>> C_;
  std::vector<SymMatrix> G_;
  std::unique_ptr<HankelPlan> h1_, h0_;
  std::size_t spod_fft_size_ = 0;

  int s_ = 0;
  std::vector<std::int64_t> z_;
  std::vector<double> T_;
};

inline GeneratingVector construct(std::int64_t n, int d, const WeightFamily& w, int alpha) {
  CbcEngine engine(n, d, w, alpha);
  return engine.run();
}

// Criterion values T_{d,s} for a given vector z (all components prescribed);
// returns the same T history construct() would report had it chosen z.
inline GeneratingVector eval_sd(std::int64_t n, int d, const WeightFamily& w, int alpha,
                                const std::vector<std::int64_t>& z) {
  if (static_cast<int>(z.size()) != d) throw std::invalid_argument("eval_sd: z must have d components");
  CbcEngine engine(n, d, w, alpha);
  for (int s = 0; s < d; ++s) {
    const double t = engine.t_single(z[static_cast<std::size_t>(s)]);
    engine.advance(z[static_cast<std::size_t>(s)], t);
  }
  return engine.result();
}

}  // namespace latcbc
