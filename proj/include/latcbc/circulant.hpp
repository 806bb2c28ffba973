// Fast application of the n x (n) kernel matrices Omega / Psi whose entries
// depend only on (z * k) mod n. For prime n, ordering rows by powers of a
// primitive root g (z_a = g^a) and columns by inverse powers (k_b = g^{-b})
// turns the z,k >= 1 block into a cyclic convolution of length n - 1; the
// k = 0 column contributes the constant kernel_row[0] * x[0] to every output.
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "latcbc/fft.hpp"
#include "latcbc/primes.hpp"

namespace latcbc {

class CirculantPlan {
 public:
  using cpx = std::complex<double>;

  explicit CirculantPlan(std::int64_t n)
      : n_(n),
        g_(primitive_root(n)),
        fft_(Fft::next_pow2(n < 3 ? 1 : 2 * static_cast<std::size_t>(n - 1) - 1)) {
    const std::size_t len = static_cast<std::size_t>(n_ - 1);
    row_order_.resize(len);
    col_order_.resize(len);
    const std::int64_t g_inv = inverse_mod(g_, n_);
    std::int64_t r = 1, c = 1;
    for (std::size_t i = 0; i < len; ++i) {
      row_order_[i] = r;
      col_order_[i] = c;
      r = static_cast<std::int64_t>(mul_mod(static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(g_),
                                            static_cast<std::uint64_t>(n_)));
      c = static_cast<std::int64_t>(mul_mod(static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(g_inv),
                                            static_cast<std::uint64_t>(n_)));
    }
  }

  std::int64_t n() const { return n_; }
  std::int64_t generator() const { return g_; }
  const std::vector<std::int64_t>& row_order() const { return row_order_; }  // z_a = g^a mod n
  const std::vector<std::int64_t>& col_order() const { return col_order_; }  // k_b = g^{-b} mod n

  // Frequency-domain image of the reordered kernel sequence c~[j] =
  // kernel_row[g^j mod n]; cache this across applications of the same kernel.
  std::vector<cpx> make_symbol(const std::vector<double>& kernel_row) const {
    if (kernel_row.size() != static_cast<std::size_t>(n_)) {
      throw std::invalid_argument("CirculantPlan: kernel_row must have length n");
    }
    std::vector<cpx> sym(fft_.size(), cpx{});
    for (std::size_t j = 0; j < row_order_.size(); ++j) {
      sym[j] = kernel_row[static_cast<std::size_t>(row_order_[j])];
    }
    fft_.forward(sym);
    return sym;
  }

  // y[z - 1] = sum_{k=1}^{n-1} kernel_row[(z k) mod n] * x[k] for z = 1..n-1.
  // The k = 0 term (kernel_row[0] * x[0]) is added by the caller-facing
  // wrappers below; x here is indexed by k = 0..n-1 and x[0] participates only
  // through that constant.
  std::vector<double> apply(const std::vector<cpx>& symbol, const std::vector<double>& x,
                            double kernel_at_zero) const {
    if (x.size() != static_cast<std::size_t>(n_)) throw std::invalid_argument("CirculantPlan: x must have length n");
    const std::size_t len = static_cast<std::size_t>(n_ - 1);
    std::vector<cpx> xf(fft_.size(), cpx{});
    for (std::size_t b = 0; b < len; ++b) xf[b] = x[static_cast<std::size_t>(col_order_[b])];
    fft_.forward(xf);
    for (std::size_t i = 0; i < fft_.size(); ++i) xf[i] *= symbol[i];
    fft_.inverse(xf);
    // Fold the linear convolution (length 2*len - 1) back to cyclic length len.
    std::vector<double> y(len);
    const double constant = kernel_at_zero * x[0];
    for (std::size_t a = 0; a < len; ++a) {
      double acc = xf[a].real();
      if (a + len < 2 * len - 1) acc += xf[a + len].real();
      y[static_cast<std::size_t>(row_order_[a] - 1)] = acc + constant;
    }
    return y;
  }

 private:
  std::int64_t n_;
  std::int64_t g_;
  Fft fft_;
  std::vector<std::int64_t> row_order_;
  std::vector<std::int64_t> col_order_;
};

// y[z - 1] = sum_{k=0}^{n-1} kernel_row[(z k) mod n] * x[k] for z = 1..n-1,
// O(n log n). Builds the kernel symbol on the fly; hold a CirculantPlan and a
// cached symbol when applying the same kernel repeatedly.
inline std::vector<double> apply_kernel_matrix(const CirculantPlan& plan,
                                               const std::vector<double>& kernel_row,
                                               const std::vector<double>& x) {
  return plan.apply(plan.make_symbol(kernel_row), x, kernel_row[0]);
}

// Reference O(n^2) evaluation, also the n = 2 fallback (no primitive-root
// reordering needed or possible there).
inline std::vector<double> apply_kernel_matrix_naive(std::int64_t n, const std::vector<double>& kernel_row,
                                                     const std::vector<double>& x) {
  std::vector<double> y(static_cast<std::size_t>(n - 1), 0.0);
  for (std::int64_t z = 1; z < n; ++z) {
    double acc = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
      acc += kernel_row[static_cast<std::size_t>((z * k) % n)] * x[static_cast<std::size_t>(k)];
    }
    y[static_cast<std::size_t>(z - 1)] = acc;
  }
  return y;
}

}  // namespace latcbc
