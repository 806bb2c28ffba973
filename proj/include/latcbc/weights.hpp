// Weight families for weighted function-space norms: product, order-dependent,
// finite-order, POD and SPOD weights, with subset evaluation, the POD
// rescaling identity, structural equivalences, and the experiment families.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace latcbc {

enum class WeightKind { kProduct, kOrderDependent, kFiniteOrder, kPod, kSpod };

inline const char* weight_kind_name(WeightKind k) {
  switch (k) {
    case WeightKind::kProduct: return "product";
    case WeightKind::kOrderDependent: return "order_dependent";
    case WeightKind::kFiniteOrder: return "finite_order";
    case WeightKind::kPod: return "pod";
    case WeightKind::kSpod: return "spod";
  }
  return "?";
}

// A weight family over subsets of {1..d}. Parameter sequences are stored as
// explicit arrays (named generators are constructors, not lazy closures), so
// serialization round-trips exactly.
//   product:          gamma_u = prod_{j in u} gamma_j[j-1]
//   order_dependent:  gamma_u = Gamma_ell[|u|]
//   finite_order:     gamma_u = Gamma_ell[|u|] for |u| <= q, else 0
//   pod:              gamma_u = Gamma_ell[|u|] * prod_{j in u} gamma_j[j-1]
//   spod:             gamma_u = sum_{nu in {1..sigma}^u} Gamma_ell[|nu|_1]
//                                 * prod_{j in u} gamma_j_nu[j-1][nu_j-1]
// Gamma_ell[0] == 1 is required whenever Gamma_ell participates (the empty
// set always has weight one).
struct WeightFamily {
  WeightKind kind = WeightKind::kProduct;
  int d = 0;
  std::vector<double> gamma_j;                 // product, pod; index j-1
  std::vector<double> Gamma_ell;               // order_dependent, finite_order, pod, spod; index |u|
  int q = 0;                                   // finite_order truncation order
  int sigma = 0;                               // spod smoothness degree
  std::vector<std::vector<double>> gamma_j_nu; // spod; [j-1][nu-1]

  static WeightFamily product(std::vector<double> gamma);
  static WeightFamily order_dependent(int d, std::vector<double> Gamma);
  static WeightFamily finite_order(int d, std::vector<double> Gamma, int q);
  static WeightFamily pod(std::vector<double> Gamma, std::vector<double> gamma);
  static WeightFamily spod(int d, int sigma, std::vector<double> Gamma,
                           std::vector<std::vector<double>> gamma_nu);

  // Gamma_ell[ell], with the finite-order zero extension applied.
  double order_weight(int ell) const {
    if (ell < 0) throw std::invalid_argument("order_weight: negative order");
    if (kind == WeightKind::kFiniteOrder && ell > q) return 0.0;
    if (static_cast<std::size_t>(ell) >= Gamma_ell.size()) {
      if (kind == WeightKind::kFiniteOrder) return 0.0;
      throw std::out_of_range("order_weight: Gamma_ell too short");
    }
    return Gamma_ell[static_cast<std::size_t>(ell)];
  }
};

namespace detail {

inline void check_nonneg_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument(std::string(what) + " entries must be finite and nonnegative");
    }
  }
}

inline void check_gamma0(const std::vector<double>& Gamma) {
  if (Gamma.empty() || Gamma[0] != 1.0) {
    throw std::invalid_argument("Gamma_ell[0] must equal 1 (empty-set weight)");
  }
}

}  // namespace detail

inline WeightFamily WeightFamily::product(std::vector<double> gamma) {
  if (gamma.empty()) throw std::invalid_argument("product weights: need d >= 1 entries");
  detail::check_nonneg_finite(gamma, "gamma_j");
  WeightFamily w;
  w.kind = WeightKind::kProduct;
  w.d = static_cast<int>(gamma.size());
  w.gamma_j = std::move(gamma);
  return w;
}

inline WeightFamily WeightFamily::order_dependent(int d, std::vector<double> Gamma) {
  if (d < 1) throw std::invalid_argument("order_dependent weights: need d >= 1");
  if (Gamma.size() < static_cast<std::size_t>(d + 1)) {
    throw std::invalid_argument("order_dependent weights: Gamma_ell must cover orders 0..d");
  }
  detail::check_nonneg_finite(Gamma, "Gamma_ell");
  detail::check_gamma0(Gamma);
  WeightFamily w;
  w.kind = WeightKind::kOrderDependent;
  w.d = d;
  w.Gamma_ell = std::move(Gamma);
  return w;
}

inline WeightFamily WeightFamily::finite_order(int d, std::vector<double> Gamma, int q) {
  if (d < 1) throw std::invalid_argument("finite_order weights: need d >= 1");
  if (q < 1 || q > d) throw std::invalid_argument("finite_order weights: need 1 <= q <= d");
  if (Gamma.size() < static_cast<std::size_t>(q + 1)) {
    throw std::invalid_argument("finite_order weights: Gamma_ell must cover orders 0..q");
  }
  detail::check_nonneg_finite(Gamma, "Gamma_ell");
  detail::check_gamma0(Gamma);
  WeightFamily w;
  w.kind = WeightKind::kFiniteOrder;
  w.d = d;
  w.q = q;
  // The zero extension beyond order q is explicit in the stored array.
  Gamma.resize(static_cast<std::size_t>(q + 1));
  Gamma.resize(static_cast<std::size_t>(d + 1), 0.0);
  w.Gamma_ell = std::move(Gamma);
  return w;
}

inline WeightFamily WeightFamily::pod(std::vector<double> Gamma, std::vector<double> gamma) {
  if (gamma.empty()) throw std::invalid_argument("pod weights: need d >= 1 gamma entries");
  const int d = static_cast<int>(gamma.size());
  if (Gamma.size() < static_cast<std::size_t>(d + 1)) {
    throw std::invalid_argument("pod weights: Gamma_ell must cover orders 0..d");
  }
  detail::check_nonneg_finite(gamma, "gamma_j");
  detail::check_nonneg_finite(Gamma, "Gamma_ell");
  detail::check_gamma0(Gamma);
  WeightFamily w;
  w.kind = WeightKind::kPod;
  w.d = d;
  w.gamma_j = std::move(gamma);
  w.Gamma_ell = std::move(Gamma);
  return w;
}

inline WeightFamily WeightFamily::spod(int d, int sigma, std::vector<double> Gamma,
                                       std::vector<std::vector<double>> gamma_nu) {
  if (d < 1) throw std::invalid_argument("spod weights: need d >= 1");
  if (sigma < 1) throw std::invalid_argument("spod weights: need sigma >= 1");
  if (Gamma.size() < static_cast<std::size_t>(d * sigma + 1)) {
    throw std::invalid_argument("spod weights: Gamma_ell must cover orders 0..d*sigma");
  }
  if (gamma_nu.size() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument("spod weights: gamma_j_nu must have d rows");
  }
  for (const auto& row : gamma_nu) {
    if (row.size() != static_cast<std::size_t>(sigma)) {
      throw std::invalid_argument("spod weights: each gamma_j_nu row must have sigma entries");
    }
    detail::check_nonneg_finite(row, "gamma_j_nu");
  }
  detail::check_nonneg_finite(Gamma, "Gamma_ell");
  detail::check_gamma0(Gamma);
  WeightFamily w;
  w.kind = WeightKind::kSpod;
  w.d = d;
  w.sigma = sigma;
  w.Gamma_ell = std::move(Gamma);
  w.gamma_j_nu = std::move(gamma_nu);
  return w;
}

// gamma_u for a subset u given as strictly increasing 1-based coordinates.
inline double gamma_subset(const WeightFamily& w, const std::vector<int>& u) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < 1 || u[i] > w.d) throw std::invalid_argument("gamma_subset: coordinate out of range");
    if (i > 0 && u[i] <= u[i - 1]) throw std::invalid_argument("gamma_subset: u must be strictly increasing");
  }
  const int ell = static_cast<int>(u.size());
  switch (w.kind) {
    case WeightKind::kProduct: {
      double p = 1.0;
      for (int j : u) p *= w.gamma_j[static_cast<std::size_t>(j - 1)];
      return p;
    }
    case WeightKind::kOrderDependent:
    case WeightKind::kFiniteOrder:
      return w.order_weight(ell);
    case WeightKind::kPod: {
      double p = w.order_weight(ell);
      for (int j : u) p *= w.gamma_j[static_cast<std::size_t>(j - 1)];
      return p;
    }
    case WeightKind::kSpod: {
      if (ell == 0) return 1.0;
      // Convolve per-coordinate degree polynomials: poly[t] accumulates the
      // total products of gamma_{j,nu_j} with |nu|_1 = t.
      std::vector<double> poly(static_cast<std::size_t>(ell * w.sigma + 1), 0.0);
      poly[0] = 1.0;
      int degree = 0;
      for (int j : u) {
        const auto& row = w.gamma_j_nu[static_cast<std::size_t>(j - 1)];
        std::vector<double> next(static_cast<std::size_t>(degree + w.sigma + 1), 0.0);
        for (int t = 0; t <= degree; ++t) {
          if (poly[static_cast<std::size_t>(t)] == 0.0) continue;
          for (int nu = 1; nu <= w.sigma; ++nu) {
            next[static_cast<std::size_t>(t + nu)] += poly[static_cast<std::size_t>(t)] * row[static_cast<std::size_t>(nu - 1)];
          }
        }
        degree += w.sigma;
        poly.assign(next.begin(), next.end());
      }
      double total = 0.0;
      for (int t = ell; t <= degree; ++t) {
        total += w.Gamma_ell[static_cast<std::size_t>(t)] * poly[static_cast<std::size_t>(t)];
      }
      return total;
    }
  }
  throw std::logic_error("gamma_subset: unknown kind");
}

// POD invariance: Gamma_ell -> Gamma_ell / a^ell together with
// gamma_j -> a * gamma_j leaves every gamma_u unchanged.
inline WeightFamily rescale_pod(const WeightFamily& w, double a) {
  if (w.kind != WeightKind::kPod) throw std::invalid_argument("rescale_pod: family must be pod");
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("rescale_pod: need a > 0");
  WeightFamily out = w;
  double apow = 1.0;
  for (std::size_t ell = 0; ell < out.Gamma_ell.size(); ++ell) {
    out.Gamma_ell[ell] /= apow;
    apow *= a;
  }
  for (double& g : out.gamma_j) g *= a;
  return out;
}

// Structural equivalences between families (same gamma_u for every u):
//  - product with constant gamma_j = a  ->  order-dependent Gamma_ell = a^ell
//  - spod with sigma == 1               ->  pod with gamma_j = gamma_{j,1}
//  - spod with constant Gamma_ell = b (ell >= 1)
//         ->  pod Gamma_ell = b with gamma_j = sum_nu gamma_{j,nu}
//             (product weights when b == 1)
// Returns the reduced family, or nullopt when no rule applies.
inline std::optional<WeightFamily> equivalent_family(const WeightFamily& w) {
  switch (w.kind) {
    case WeightKind::kProduct: {
      const double a = w.gamma_j.front();
      for (double g : w.gamma_j) {
        if (g != a) return std::nullopt;
      }
      std::vector<double> Gamma(static_cast<std::size_t>(w.d + 1));
      double apow = 1.0;
      for (int ell = 0; ell <= w.d; ++ell) {
        Gamma[static_cast<std::size_t>(ell)] = apow;
        apow *= a;
      }
      return WeightFamily::order_dependent(w.d, std::move(Gamma));
    }
    case WeightKind::kSpod: {
      if (w.sigma == 1) {
        std::vector<double> gamma(static_cast<std::size_t>(w.d));
        for (int j = 0; j < w.d; ++j) gamma[static_cast<std::size_t>(j)] = w.gamma_j_nu[static_cast<std::size_t>(j)][0];
        std::vector<double> Gamma(w.Gamma_ell.begin(), w.Gamma_ell.begin() + w.d + 1);
        return WeightFamily::pod(std::move(Gamma), std::move(gamma));
      }
      const double b = w.Gamma_ell[1];
      bool constant = true;
      for (std::size_t ell = 1; ell < w.Gamma_ell.size(); ++ell) {
        if (w.Gamma_ell[ell] != b) {
          constant = false;
          break;
        }
      }
      if (!constant) return std::nullopt;
      std::vector<double> gamma(static_cast<std::size_t>(w.d));
      for (int j = 0; j < w.d; ++j) {
        double s = 0.0;
        for (double g : w.gamma_j_nu[static_cast<std::size_t>(j)]) s += g;
        gamma[static_cast<std::size_t>(j)] = s;
      }
      if (b == 1.0) return WeightFamily::product(std::move(gamma));
      std::vector<double> Gamma(static_cast<std::size_t>(w.d + 1), b);
      Gamma[0] = 1.0;
      return WeightFamily::pod(std::move(Gamma), std::move(gamma));
    }
    default:
      return std::nullopt;
  }
}

enum class PaperWeightChoice { kProduct, kPod, kSpod };

// The three benchmark families used by the convergence experiments, all tied
// to the decay exponent 1.5 * alpha and (for pod/spod) the rescaling
// parameter a = (d!)^{1/d} that keeps Gamma_ell representable at large d.
inline WeightFamily paper_experiment_weights(PaperWeightChoice choice, int d, int alpha) {
  if (d < 1) throw std::invalid_argument("paper_experiment_weights: need d >= 1");
  if (alpha < 2 || alpha % 2 != 0) throw std::invalid_argument("paper_experiment_weights: alpha must be even, >= 2");
  const double decay = 1.5 * static_cast<double>(alpha);
  const double log_a = std::lgamma(static_cast<double>(d) + 1.0) / static_cast<double>(d);
  const double a = std::exp(log_a);
  switch (choice) {
    case PaperWeightChoice::kProduct: {
      std::vector<double> gamma(static_cast<std::size_t>(d));
      for (int j = 1; j <= d; ++j) gamma[static_cast<std::size_t>(j - 1)] = std::pow(static_cast<double>(j), -decay);
      return WeightFamily::product(std::move(gamma));
    }
    case PaperWeightChoice::kPod: {
      std::vector<double> Gamma(static_cast<std::size_t>(d + 1));
      for (int ell = 0; ell <= d; ++ell) {
        Gamma[static_cast<std::size_t>(ell)] = std::exp(std::lgamma(static_cast<double>(ell) + 1.0) - ell * log_a);
      }
      Gamma[0] = 1.0;
      std::vector<double> gamma(static_cast<std::size_t>(d));
      for (int j = 1; j <= d; ++j) gamma[static_cast<std::size_t>(j - 1)] = a * std::pow(static_cast<double>(j), -decay);
      return WeightFamily::pod(std::move(Gamma), std::move(gamma));
    }
    case PaperWeightChoice::kSpod: {
      const int sigma = alpha / 2;
      std::vector<double> Gamma(static_cast<std::size_t>(d * sigma + 1));
      for (int ell = 0; ell <= d * sigma; ++ell) {
        Gamma[static_cast<std::size_t>(ell)] = std::exp(std::lgamma(static_cast<double>(ell) + 1.0) - ell * log_a);
      }
      Gamma[0] = 1.0;
      std::vector<std::vector<double>> gamma_nu(static_cast<std::size_t>(d),
                                                std::vector<double>(static_cast<std::size_t>(sigma)));
      for (int j = 1; j <= d; ++j) {
        const double base = 2.0 * std::pow(static_cast<double>(j), -decay);
        for (int nu = 1; nu <= sigma; ++nu) {
          gamma_nu[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(nu - 1)] =
              a * std::pow(base, static_cast<double>(nu));
        }
      }
      return WeightFamily::spod(d, sigma, std::move(Gamma), std::move(gamma_nu));
    }
  }
  throw std::logic_error("paper_experiment_weights: unknown choice");
}

}  // namespace latcbc
