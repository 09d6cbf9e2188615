#pragma once

// Complex-vector kernels: radix-2 DFT, polyphase reshaping, and the
// time/frequency discrete Zak transforms.
//
// DFT convention: forward computes F_n x with F_n[a,b] = exp(-j2pi ab/n),
// inverse computes F_n^H x. Neither direction carries a 1/n factor; callers
// apply 1/K, 1/M, 1/N explicitly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gfdm/errors.hpp"

namespace gfdm {

using cplx = std::complex<double>;
using ComplexVec = std::vector<cplx>;

inline constexpr bool is_power_of_two(std::size_t n) noexcept {
  return n != 0 && (n & (n - 1)) == 0;
}

/// log2 of a power of two.
inline constexpr std::size_t log2_exact(std::size_t n) noexcept {
  std::size_t l = 0;
  while ((std::size_t{1} << l) < n) ++l;
  return l;
}

inline void require_finite(std::span<const cplx> v, const char* what) {
  for (const auto& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InvalidArgument(std::string(what) + ": non-finite sample");
    }
  }
}

/// Dense complex matrix, row-major.
class ComplexMat {
 public:
  ComplexMat() = default;
  ComplexMat(std::size_t rows, std::size_t cols, cplx fill = {})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  ComplexMat(std::size_t rows, std::size_t cols, ComplexVec data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw InvalidArgument("ComplexMat: data length does not match shape");
    }
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  [[nodiscard]] std::span<cplx> data() noexcept { return data_; }
  [[nodiscard]] std::span<const cplx> data() const noexcept { return data_; }

  [[nodiscard]] ComplexMat transposed() const {
    ComplexMat t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  [[nodiscard]] ComplexVec column(std::size_t c) const {
    ComplexVec out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  void set_column(std::size_t c, std::span<const cplx> v) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
  }

  /// Column-major flattening, i.e. vec(A) with index r + c*rows.
  [[nodiscard]] ComplexVec vec() const {
    ComplexVec out(size());
    for (std::size_t c = 0; c < cols_; ++c)
      for (std::size_t r = 0; r < rows_; ++r) out[r + c * rows_] = (*this)(r, c);
    return out;
  }

  /// Inverse of vec().
  static ComplexMat unvec(std::span<const cplx> v, std::size_t rows, std::size_t cols) {
    if (v.size() != rows * cols) throw InvalidArgument("unvec: length mismatch");
    ComplexMat m(rows, cols);
    for (std::size_t c = 0; c < cols; ++c)
      for (std::size_t r = 0; r < rows; ++r) m(r, c) = v[r + c * rows];
    return m;
  }

  friend bool operator==(const ComplexMat&, const ComplexMat&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  ComplexVec data_;
};

/// Counts complex multiplications performed by instrumented kernels.
/// Only grows between explicit resets.
class MulCounter {
 public:
  void add(std::uint64_t n) noexcept { count_ += n; }
  [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
  void reset() noexcept { count_ = 0; }

 private:
  std::uint64_t count_ = 0;
};

namespace detail {

struct Twiddles {
  std::vector<cplx> w;  // exp(-j2pi i/n), i < n/2
  std::vector<std::size_t> bitrev;
};

inline const Twiddles& twiddles_for(std::size_t n) {
  thread_local std::unordered_map<std::size_t, Twiddles> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Twiddles t;
  t.w.resize(n / 2);
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double phi = -2.0 * std::numbers::pi * static_cast<double>(i) /
                       static_cast<double>(n);
    t.w[i] = {std::cos(phi), std::sin(phi)};
  }
  const std::size_t bits = log2_exact(n);
  t.bitrev.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1U) << (bits - 1 - b);
    t.bitrev[i] = r;
  }
  return cache.emplace(n, std::move(t)).first->second;
}

}  // namespace detail

/// In-place iterative radix-2 decimation-in-time DFT.
///
/// Every butterfly of a length-n transform (n > 2) spends one complex
/// multiplication on its twiddle, trivial twiddles included, so a counted
/// transform adds exactly (n/2)*log2(n). Lengths 1 and 2 are add-only.
inline void dft_inplace(std::span<cplx> x, bool inverse, MulCounter* counter = nullptr) {
  const std::size_t n = x.size();
  if (!is_power_of_two(n)) {
    throw InvalidArgument("dft: length " + std::to_string(n) + " is not a power of two");
  }
  if (n == 1) return;
  if (n == 2) {
    const cplx a = x[0];
    x[0] = a + x[1];
    x[1] = a - x[1];
    return;
  }
  const auto& tw = detail::twiddles_for(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = tw.bitrev[i];
    if (j > i) std::swap(x[i], x[j]);
  }
  std::uint64_t muls = 0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const cplx w = inverse ? std::conj(tw.w[j * stride]) : tw.w[j * stride];
        const cplx t = w * x[start + j + half];
        ++muls;
        const cplx u = x[start + j];
        x[start + j] = u + t;
        x[start + j + half] = u - t;
      }
    }
  }
  if (counter != nullptr) counter->add(muls);
}

[[nodiscard]] inline ComplexVec dft(std::span<const cplx> x, bool inverse = false,
                                    MulCounter* counter = nullptr) {
  ComplexVec out(x.begin(), x.end());
  dft_inplace(out, inverse, counter);
  return out;
}

/// Applies a length-rows DFT to every column.
inline void dft_columns(ComplexMat& a, bool inverse, MulCounter* counter = nullptr) {
  ComplexVec col(a.rows());
  for (std::size_t c = 0; c < a.cols(); ++c) {
    for (std::size_t r = 0; r < a.rows(); ++r) col[r] = a(r, c);
    dft_inplace(col, inverse, counter);
    a.set_column(c, col);
  }
}

/// Applies a length-cols DFT to every row.
inline void dft_rows(ComplexMat& a, bool inverse, MulCounter* counter = nullptr) {
  for (std::size_t r = 0; r < a.rows(); ++r) {
    dft_inplace(a.data().subspan(r * a.cols(), a.cols()), inverse, counter);
  }
}

inline void scale(std::span<cplx> x, double s) noexcept {
  for (auto& z : x) z *= s;
}

/// Polyphase matrix V_{Q,P}(a): [V]_{q,p} = a[p + qP]. With row-major
/// storage this is a reshape.
[[nodiscard]] inline ComplexMat polyphase(std::span<const cplx> a, std::size_t q_rows,
                                          std::size_t p_cols) {
  if (a.size() != q_rows * p_cols || a.empty()) {
    throw InvalidArgument("polyphase: length " + std::to_string(a.size()) +
                          " != " + std::to_string(q_rows) + "x" + std::to_string(p_cols));
  }
  return ComplexMat(q_rows, p_cols, ComplexVec(a.begin(), a.end()));
}

[[nodiscard]] inline ComplexVec unpolyphase(const ComplexMat& v) {
  return ComplexVec(v.data().begin(), v.data().end());
}

/// Discrete Zak transform Z_{Q,P}(a) = F_Q V_{Q,P}(a).
[[nodiscard]] inline ComplexMat zak_time(std::span<const cplx> a, std::size_t q_rows,
                                         std::size_t p_cols, MulCounter* counter = nullptr) {
  ComplexMat z = polyphase(a, q_rows, p_cols);
  dft_columns(z, false, counter);
  return z;
}

/// Dual Zak transform of a spectrum: (1/P) F_P^H V_{P,Q}(a~).
[[nodiscard]] inline ComplexMat zak_freq(std::span<const cplx> spectrum, std::size_t p_rows,
                                         std::size_t q_cols, MulCounter* counter = nullptr) {
  ComplexMat z = polyphase(spectrum, p_rows, q_cols);
  dft_columns(z, true, counter);
  scale(z.data(), 1.0 / static_cast<double>(p_rows));
  return z;
}

[[nodiscard]] inline double norm2(std::span<const cplx> v) noexcept {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

[[nodiscard]] inline double max_abs(std::span<const cplx> v) noexcept {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

[[nodiscard]] inline double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw InvalidArgument("max_abs_diff: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace gfdm
