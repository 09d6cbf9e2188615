#pragma once

// Cyclic prefix/suffix, a static multipath channel with AWGN, and the
// one-tap zero-forcing frequency-domain equalizer.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>

#include "gfdm/errors.hpp"
#include "gfdm/numerics.hpp"

namespace gfdm {

[[nodiscard]] inline ComplexVec add_cp(std::span<const cplx> x, std::size_t n_cp,
                                       std::size_t n_cs = 0) {
  const std::size_t N = x.size();
  if (n_cp > N || n_cs > N) {
    throw InvalidArgument("add_cp: CP/CS length exceeds block length " + std::to_string(N));
  }
  ComplexVec out;
  out.reserve(N + n_cp + n_cs);
  out.insert(out.end(), x.end() - static_cast<std::ptrdiff_t>(n_cp), x.end());
  out.insert(out.end(), x.begin(), x.end());
  out.insert(out.end(), x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n_cs));
  return out;
}

/// Drops the prefix and keeps the N core samples.
[[nodiscard]] inline ComplexVec remove_cp(std::span<const cplx> y, std::size_t N,
                                          std::size_t n_cp, std::size_t n_cs = 0) {
  if (y.size() < N + n_cp + n_cs) {
    throw InvalidArgument("remove_cp: received block shorter than N + CP + CS");
  }
  return ComplexVec(y.begin() + static_cast<std::ptrdiff_t>(n_cp),
                    y.begin() + static_cast<std::ptrdiff_t>(n_cp + N));
}

/// Counter-based normal generator: sample i of stream `seed` depends only on
/// (seed, i), via splitmix64 and Box-Muller.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : seed_(seed) {}

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in (0, 1].
  [[nodiscard]] double uniform(std::uint64_t index) const noexcept {
    const std::uint64_t bits = mix(seed_ ^ mix(index));
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Circularly-symmetric complex normal with E|z|^2 = 1.
  [[nodiscard]] cplx complex_normal(std::uint64_t index) const noexcept {
    const double u1 = uniform(2 * index);
    const double u2 = uniform(2 * index + 1);
    const double r = std::sqrt(-std::log(u1));  // sqrt(-2 ln u1) * sqrt(1/2)
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

 private:
  std::uint64_t seed_;
};

struct ChannelSpec {
  ComplexVec taps{cplx{1.0, 0.0}};
  double snr_db = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
};

/// Linear convolution with the taps, truncated to the input length, plus
/// AWGN at the given per-sample SNR relative to the received signal power.
[[nodiscard]] inline ComplexVec apply_channel(std::span<const cplx> x, const ChannelSpec& spec) {
  if (spec.taps.empty()) throw InvalidArgument("apply_channel: channel needs at least one tap");
  ComplexVec y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    cplx s{};
    const std::size_t lmax = std::min(spec.taps.size(), n + 1);
    for (std::size_t l = 0; l < lmax; ++l) s += spec.taps[l] * x[n - l];
    y[n] = s;
  }
  if (std::isfinite(spec.snr_db) && !y.empty()) {
    const double power = norm2(y) / static_cast<double>(y.size());
    const double sigma = std::sqrt(power * std::pow(10.0, -spec.snr_db / 10.0));
    const GaussianSource noise(spec.seed);
    for (std::size_t n = 0; n < y.size(); ++n) y[n] += sigma * noise.complex_normal(n);
  }
  return y;
}

/// Channel frequency response on the N-point grid.
[[nodiscard]] inline ComplexVec channel_response(std::span<const cplx> taps, std::size_t N) {
  if (taps.size() > N) throw InvalidArgument("channel_response: more taps than block samples");
  ComplexVec h(N);
  std::copy(taps.begin(), taps.end(), h.begin());
  dft_inplace(h, false);
  return h;
}

/// y~_eq[q] = (F_N y)[q] / H~[q]. Stays in the frequency domain. Only the
/// N-FFT of y is counted; the divisions are equalizer work.
[[nodiscard]] inline ComplexVec fd_equalize_zf(std::span<const cplx> y, std::span<const cplx> taps,
                                               MulCounter* counter = nullptr,
                                               double eps = 1e-8) {
  const ComplexVec h = channel_response(taps, y.size());
  for (std::size_t q = 0; q < h.size(); ++q) {
    if (!(std::abs(h[q]) > eps)) {
      throw SingularChannel("fd_equalize_zf: channel response vanishes at bin " +
                            std::to_string(q));
    }
  }
  ComplexVec out = dft(y, false, counter);
  for (std::size_t q = 0; q < out.size(); ++q) out[q] /= h[q];
  return out;
}

}  // namespace gfdm
