// Power-of-two complex FFT, cyclic convolution, and an arbitrary-length DFT
// (Bluestein) used for lattice sample transforms at prime lengths.
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace latcbc {

// Iterative radix-2 Cooley-Tukey transform with cached twiddles and
// bit-reversal table. Size must be a power of two.
class Fft {
 public:
  using cpx = std::complex<double>;

  explicit Fft(std::size_t size) : size_(size) {
    if (size_ == 0 || (size_ & (size_ - 1)) != 0) {
      throw std::invalid_argument("Fft: size must be a nonzero power of two");
    }
    log2_ = 0;
    while ((std::size_t{1} << log2_) < size_) ++log2_;
    bitrev_.resize(size_);
    for (std::size_t i = 1; i < size_; ++i) {
      bitrev_[i] = (bitrev_[i >> 1] >> 1) | ((i & 1) << (log2_ - 1));
    }
    twiddle_.resize(size_ / 2);
    for (std::size_t j = 0; j < size_ / 2; ++j) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(size_);
      twiddle_[j] = cpx(std::cos(angle), std::sin(angle));
    }
  }

  std::size_t size() const { return size_; }

  void forward(std::vector<cpx>& a) const { transform(a, false); }

  void inverse(std::vector<cpx>& a) const {
    transform(a, true);
    const double scale = 1.0 / static_cast<double>(size_);
    for (auto& v : a) v *= scale;
  }

  static std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
  }

 private:
  void transform(std::vector<cpx>& a, bool invert) const {
    if (a.size() != size_) throw std::invalid_argument("Fft: buffer size mismatch");
    if (size_ == 1) return;
    for (std::size_t i = 0; i < size_; ++i) {
      const std::size_t j = bitrev_[i];
      if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= size_; len <<= 1) {
      const std::size_t stride = size_ / len;
      for (std::size_t blk = 0; blk < size_; blk += len) {
        for (std::size_t j = 0; j < len / 2; ++j) {
          cpx w = twiddle_[j * stride];
          if (invert) w = std::conj(w);
          const cpx u = a[blk + j];
          const cpx v = a[blk + j + len / 2] * w;
          a[blk + j] = u + v;
          a[blk + j + len / 2] = u - v;
        }
      }
    }
  }

  std::size_t size_;
  unsigned log2_ = 0;
  std::vector<std::size_t> bitrev_;
  std::vector<cpx> twiddle_;
};

// Cyclic convolution w[i] = sum_j u[j] * v[(i - j) mod m] of two equal-length
// real sequences, evaluated through a zero-padded power-of-two FFT.
inline std::vector<double> cyclic_convolve(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size()) throw std::invalid_argument("cyclic_convolve: length mismatch");
  const std::size_t m = u.size();
  if (m == 0) return {};
  if (m == 1) return {u[0] * v[0]};
  const std::size_t nfft = Fft::next_pow2(2 * m - 1);
  Fft fft(nfft);
  std::vector<Fft::cpx> a(nfft), b(nfft);
  for (std::size_t i = 0; i < m; ++i) a[i] = u[i];
  for (std::size_t i = 0; i < m; ++i) b[i] = v[i];
  fft.forward(a);
  fft.forward(b);
  for (std::size_t i = 0; i < nfft; ++i) a[i] *= b[i];
  fft.inverse(a);
  std::vector<double> w(m);
  // Linear convolution has length 2m-1; fold the overhang back (cyclic wrap).
  for (std::size_t i = 0; i < m; ++i) {
    double acc = a[i].real();
    if (i + m < 2 * m - 1) acc += a[i + m].real();
    w[i] = acc;
  }
  return w;
}

// Forward DFT X[k] = sum_j x[j] e^{-2 pi i jk / n} for arbitrary n. Power-of-two
// sizes go through the radix-2 path directly; other sizes use the Bluestein
// chirp factorization jk = (j^2 + k^2 - (k-j)^2) / 2, with phases reduced
// modulo 2n to keep the chirp arguments exact for large n.
inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) {
  using cpx = std::complex<double>;
  const std::size_t n = x.size();
  if (n == 0) return {};
  if ((n & (n - 1)) == 0) {
    std::vector<cpx> a = x;
    Fft(n).forward(a);
    return a;
  }
  std::vector<cpx> chirp(n);  // chirp[j] = e^{-pi i j^2 / n}
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint64_t r = (static_cast<std::uint64_t>(j) * j) % (2 * static_cast<std::uint64_t>(n));
    const double angle = -std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
    chirp[j] = cpx(std::cos(angle), std::sin(angle));
  }
  const std::size_t nfft = Fft::next_pow2(2 * n - 1);
  Fft fft(nfft);
  std::vector<cpx> a(nfft), b(nfft);
  for (std::size_t j = 0; j < n; ++j) a[j] = x[j] * chirp[j];
  b[0] = std::conj(chirp[0]);
  for (std::size_t j = 1; j < n; ++j) {
    b[j] = std::conj(chirp[j]);
    b[nfft - j] = std::conj(chirp[j]);
  }
  fft.forward(a);
  fft.forward(b);
  for (std::size_t i = 0; i < nfft; ++i) a[i] *= b[i];
  fft.inverse(a);
  std::vector<cpx> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = chirp[k] * a[k];
  return out;
}

}  // namespace latcbc
