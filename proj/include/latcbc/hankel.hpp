// Hankel matrix-vector products via FFT. The Hankel matrix with symbol
// c_1..c_m (entries A[t][l] = c_{t+l+1}, zero beyond the symbol) times x is a
// slice of the linear convolution of the symbol with the reversed x, so one
// padded power-of-two FFT per input serves every output length.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "latcbc/fft.hpp"

namespace latcbc {

class HankelPlan {
 public:
  using cpx = std::complex<double>;

  // symbol holds c_1..c_m (0-based). fft_size 0 picks the smallest power of
  // two that avoids cyclic wrap-around in the read window; pass a common size
  // to share input transforms across plans.
  explicit HankelPlan(std::vector<double> symbol, std::size_t fft_size = 0)
      : symbol_len_(symbol.size()),
        fft_(fft_size != 0 ? fft_size : Fft::next_pow2(symbol.size() < 1 ? 1 : 2 * symbol.size() - 1)) {
    if (symbol_len_ == 0) throw std::invalid_argument("HankelPlan: empty symbol");
    if (fft_.size() < 2 * symbol_len_ - 1) {
      throw std::invalid_argument("HankelPlan: fft_size too small for symbol");
    }
    symbol_fft_.assign(fft_.size(), cpx{});
    for (std::size_t i = 0; i < symbol_len_; ++i) symbol_fft_[i] = symbol[i];
    fft_.forward(symbol_fft_);
  }

  std::size_t symbol_len() const { return symbol_len_; }
  std::size_t fft_size() const { return fft_.size(); }

  // Forward transform of reverse(x), zero padded; reusable across plans built
  // with the same fft_size.
  std::vector<cpx> transform_input(const std::vector<double>& x) const {
    if (x.empty() || x.size() > symbol_len_) throw std::invalid_argument("HankelPlan: bad input length");
    std::vector<cpx> xf(fft_.size(), cpx{});
    for (std::size_t i = 0; i < x.size(); ++i) xf[i] = x[x.size() - 1 - i];
    fft_.forward(xf);
    return xf;
  }

  // y[t] = sum_l symbol[t + l] * x[l] for t < out_len, given transform_input(x).
  // The read window starts at offset x_len - 1 in the linear convolution; with
  // fft_size >= 2m - 1 >= m + x_len - 1 the full linear convolution fits, so
  // no cyclic aliasing occurs.
  std::vector<double> apply_transformed(const std::vector<cpx>& xf, std::size_t x_len,
                                        std::size_t out_len) const {
    if (xf.size() != fft_.size()) throw std::invalid_argument("HankelPlan: transformed buffer size mismatch");
    if (x_len == 0 || x_len > symbol_len_) throw std::invalid_argument("HankelPlan: bad input length");
    if (out_len == 0) return {};
    if (out_len > symbol_len_) {
      throw std::invalid_argument("HankelPlan: out_len exceeds convolution support");
    }
    std::vector<cpx> prod(fft_.size());
    for (std::size_t i = 0; i < fft_.size(); ++i) prod[i] = symbol_fft_[i] * xf[i];
    fft_.inverse(prod);
    std::vector<double> y(out_len);
    for (std::size_t t = 0; t < out_len; ++t) y[t] = prod[x_len - 1 + t].real();
    return y;
  }

  std::vector<double> apply(const std::vector<double>& x, std::size_t out_len) const {
    return apply_transformed(transform_input(x), x.size(), out_len);
  }

 private:
  std::size_t symbol_len_;
  Fft fft_;
  std::vector<cpx> symbol_fft_;
};

// One-shot convenience: y[t] = sum_l c[t + l] * x[l], entries beyond the
// symbol treated as zero.
inline std::vector<double> hankel_apply(const std::vector<double>& c, const std::vector<double>& x,
                                        std::size_t out_len) {
  if (x.size() > c.size()) throw std::invalid_argument("hankel_apply: x longer than symbol");
  return HankelPlan(c).apply(x, out_len);
}

}  // namespace latcbc
