#pragma once

// Direct-convolution modem: one transform, L parallel multiply-accumulate
// chains against prestored pulse matrices, and an optional N-IDFT.
//
//   TD modulation:   V_{M,K}(x)^T  = sum_m  Gbar^(m) .* Dbar^(m)
//   FD modulation:   V_{K,M}(x~)^T = sum_l  Gbar^(l) .* Dbar^(l)
//   TD demodulation: (1/K) F_K^H D^ = sum_m Gammabar^(m) .* Ybar^(m)
//   FD demodulation: F_M D^T        = sum_l Gammabar^(l) .* Ybar^(l)
//
// Chains are evaluated sequentially in ascending m (or l).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gfdm/errors.hpp"
#include "gfdm/numerics.hpp"
#include "gfdm/params.hpp"
#include "gfdm/pulses.hpp"

namespace gfdm {

struct DirectLimits {
  std::size_t max_chains = 16;   // L_max
  std::size_t max_fft = 2048;    // N_max
};

enum class SetRole { Modulator, Demodulator };
enum class FdSupport { Sparse, Full };

struct DirectPulseSet {
  Domain domain = Domain::Time;
  SetRole role = SetRole::Modulator;
  std::size_t K = 0;
  std::size_t M = 0;
  std::vector<ComplexMat> mats;          // TD: K x M each; FD: M x K each
  std::vector<std::size_t> partitions;   // m (TD) or l (FD) of each matrix

  [[nodiscard]] std::size_t overlap() const noexcept { return mats.size(); }
};

namespace detail {

inline void check_limits(std::size_t chains, std::size_t N, const DirectLimits& lim,
                         const char* what) {
  if (N > lim.max_fft) {
    throw FftSizeExceeded(std::string(what) + ": N=" + std::to_string(N) +
                          " exceeds N_max=" + std::to_string(lim.max_fft));
  }
  if (chains > lim.max_chains) {
    throw ChainLimitExceeded(std::string(what) + ": needs " + std::to_string(chains) +
                             " multiplier chains, L_max=" + std::to_string(lim.max_chains));
  }
}

inline void check_set(const DirectPulseSet& set, Domain d, SetRole r, const char* what) {
  if (set.domain != d || set.role != r) {
    throw InvalidArgument(std::string(what) + ": pulse set has the wrong domain or role");
  }
}

/// Picks the bands of a K x M polyphase matrix (rows = bands) that carry
/// energy, or all of them.
inline std::vector<std::size_t> select_bands(const ComplexMat& bands_by_row, FdSupport support,
                                             double rel_tol) {
  const std::size_t K = bands_by_row.rows();
  if (support == FdSupport::Full) {
    std::vector<std::size_t> all(K);
    for (std::size_t l = 0; l < K; ++l) all[l] = l;
    return all;
  }
  return active_bands(bands_by_row.data(), K, bands_by_row.cols(), rel_tol);
}

}  // namespace detail

/// Gbar^(m)[:,p] = K V_{M,K}(g)^T[:, <p-m>_M], m = 0..M-1.
[[nodiscard]] inline DirectPulseSet precompute_td_mod(const PrototypePulse& g) {
  const std::size_t K = g.params.K();
  const std::size_t M = g.params.M();
  const ComplexMat vt = polyphase(g.time, M, K).transposed();  // K x M
  DirectPulseSet set{Domain::Time, SetRole::Modulator, K, M, {}, {}};
  for (std::size_t m = 0; m < M; ++m) {
    ComplexMat G(K, M);
    for (std::size_t p = 0; p < M; ++p)
      for (std::size_t q = 0; q < K; ++q)
        G(q, p) = static_cast<double>(K) * vt(q, (p + M - m) % M);
    set.mats.push_back(std::move(G));
    set.partitions.push_back(m);
  }
  return set;
}

/// Dbar^(m) = 1_{1xM} (x) [(1/K) F_K^H D]_{:,m}.
[[nodiscard]] inline ComplexMat td_data_matrix(const ComplexMat& transformed, std::size_t m) {
  ComplexMat out(transformed.rows(), transformed.cols());
  for (std::size_t q = 0; q < out.rows(); ++q)
    for (std::size_t p = 0; p < out.cols(); ++p) out(q, p) = transformed(q, m);
  return out;
}

[[nodiscard]] inline ComplexVec direct_modulate_td(const ComplexMat& D, const DirectPulseSet& set,
                                                   const DirectLimits& limits = {},
                                                   MulCounter* counter = nullptr) {
  detail::check_set(set, Domain::Time, SetRole::Modulator, "direct_modulate_td");
  require_grid_shape(D, set.K, set.M, "direct_modulate_td");
  const std::size_t K = set.K;
  const std::size_t M = set.M;
  detail::check_limits(set.mats.size(), K * M, limits, "direct_modulate_td");

  ComplexMat first = D;
  dft_columns(first, true, counter);
  scale(first.data(), 1.0 / static_cast<double>(K));

  ComplexMat acc(K, M);
  for (std::size_t i = 0; i < set.mats.size(); ++i) {
    const ComplexMat data = td_data_matrix(first, set.partitions[i]);
    const auto g = set.mats[i].data();
    const auto d = data.data();
    auto a = acc.data();
    for (std::size_t j = 0; j < a.size(); ++j) a[j] += g[j] * d[j];
    if (counter != nullptr) counter->add(a.size());
  }
  // acc = V_{M,K}(x)^T, so x[q + pK] = acc(q,p).
  return acc.vec();
}

/// Gbar^(l) = 1_{1xK} (x) V_{K,M}(g~)^T[:,l] for every band l that is kept.
[[nodiscard]] inline DirectPulseSet precompute_fd_mod(const PrototypePulse& g,
                                                      FdSupport support = FdSupport::Sparse,
                                                      const DirectLimits& limits = {},
                                                      double rel_tol = kDefaultSparsityTol) {
  const std::size_t K = g.params.K();
  const std::size_t M = g.params.M();
  const ComplexMat v = polyphase(g.freq, K, M);  // rows are bands
  DirectPulseSet set{Domain::Frequency, SetRole::Modulator, K, M, {}, {}};
  set.partitions = detail::select_bands(v, support, rel_tol);
  if (set.partitions.size() > limits.max_chains) {
    throw OverlapTooLarge("precompute_fd_mod: pulse spans " +
                          std::to_string(set.partitions.size()) + " bands, L_max=" +
                          std::to_string(limits.max_chains));
  }
  for (auto l : set.partitions) {
    ComplexMat G(M, K);
    for (std::size_t p = 0; p < M; ++p)
      for (std::size_t q = 0; q < K; ++q) G(p, q) = v(l, p);
    set.mats.push_back(std::move(G));
  }
  return set;
}

/// Dbar^(l)[:,q] = [F_M D^T]_{:,<q-l>_K}.
[[nodiscard]] inline ComplexMat fd_data_matrix(const ComplexMat& transformed, std::size_t l) {
  const std::size_t K = transformed.cols();
  ComplexMat out(transformed.rows(), K);
  for (std::size_t p = 0; p < out.rows(); ++p)
    for (std::size_t q = 0; q < K; ++q) out(p, q) = transformed(p, (q + K - l % K) % K);
  return out;
}

[[nodiscard]] inline ComplexVec direct_modulate_fd(const ComplexMat& D, const DirectPulseSet& set,
                                                   bool emit_time,
                                                   const DirectLimits& limits = {},
                                                   MulCounter* counter = nullptr) {
  detail::check_set(set, Domain::Frequency, SetRole::Modulator, "direct_modulate_fd");
  require_grid_shape(D, set.K, set.M, "direct_modulate_fd");
  const std::size_t K = set.K;
  const std::size_t M = set.M;
  detail::check_limits(set.mats.size(), K * M, limits, "direct_modulate_fd");

  ComplexMat first = D.transposed();  // M x K
  dft_columns(first, false, counter);

  ComplexMat acc(M, K);
  for (std::size_t i = 0; i < set.mats.size(); ++i) {
    const ComplexMat data = fd_data_matrix(first, set.partitions[i]);
    const auto g = set.mats[i].data();
    const auto d = data.data();
    auto a = acc.data();
    for (std::size_t j = 0; j < a.size(); ++j) a[j] += g[j] * d[j];
    if (counter != nullptr) counter->add(a.size());
  }
  // acc = V_{K,M}(x~)^T, so x~[p + qM] = acc(p,q).
  ComplexVec out = acc.vec();
  if (emit_time) {
    dft_inplace(out, true, counter);
    scale(out, 1.0 / static_cast<double>(K * M));
  }
  return out;
}

/// Gammabar^(m)[:,p] = V_{M,K}(gammabar)^T[:, <p-m>_M] with
/// V_{M,K}(gammabar) = (1/M) F_M^H W_rx^T.
[[nodiscard]] inline DirectPulseSet precompute_td_demod(const ComplexMat& w_rx) {
  const std::size_t K = w_rx.rows();
  const std::size_t M = w_rx.cols();
  ComplexMat gamma = w_rx.transposed();  // M x K
  dft_columns(gamma, true);
  scale(gamma.data(), 1.0 / static_cast<double>(M));
  DirectPulseSet set{Domain::Time, SetRole::Demodulator, K, M, {}, {}};
  for (std::size_t m = 0; m < M; ++m) {
    ComplexMat G(K, M);
    for (std::size_t p = 0; p < M; ++p)
      for (std::size_t q = 0; q < K; ++q) G(q, p) = gamma((p + M - m) % M, q);
    set.mats.push_back(std::move(G));
    set.partitions.push_back(m);
  }
  return set;
}

/// Gammabar^(l) = (1/K) 1_{1xK} (x) V_{K,M}(gamma~)^T[:,l] with
/// V_{K,M}(gamma~) = F_K W_rx.
[[nodiscard]] inline DirectPulseSet precompute_fd_demod(const ComplexMat& w_rx,
                                                        FdSupport support = FdSupport::Sparse,
                                                        const DirectLimits& limits = {},
                                                        double rel_tol = kDefaultSparsityTol) {
  const std::size_t K = w_rx.rows();
  const std::size_t M = w_rx.cols();
  ComplexMat gamma = w_rx;
  dft_columns(gamma, false);  // K x M, rows are bands
  DirectPulseSet set{Domain::Frequency, SetRole::Demodulator, K, M, {}, {}};
  set.partitions = detail::select_bands(gamma, support, rel_tol);
  if (set.partitions.size() > limits.max_chains) {
    throw OverlapTooLarge("precompute_fd_demod: receive pulse overlaps " +
                          std::to_string(set.partitions.size()) + " subcarriers, L_max=" +
                          std::to_string(limits.max_chains));
  }
  const double inv_k = 1.0 / static_cast<double>(K);
  for (auto l : set.partitions) {
    ComplexMat G(M, K);
    for (std::size_t p = 0; p < M; ++p)
      for (std::size_t q = 0; q < K; ++q) G(p, q) = inv_k * gamma(l, p);
    set.mats.push_back(std::move(G));
  }
  return set;
}

[[nodiscard]] inline ComplexMat direct_demodulate_td(std::span<const cplx> y_eq,
                                                     const DirectPulseSet& set,
                                                     const DirectLimits& limits = {},
                                                     MulCounter* counter = nullptr) {
  detail::check_set(set, Domain::Time, SetRole::Demodulator, "direct_demodulate_td");
  const std::size_t K = set.K;
  const std::size_t M = set.M;
  if (y_eq.size() != K * M) throw InvalidArgument("direct_demodulate_td: block length mismatch");
  detail::check_limits(set.mats.size(), K * M, limits, "direct_demodulate_td");

  const ComplexMat Y = polyphase(y_eq, M, K);  // V_{M,K}(y)
  ComplexMat acc(K, M);
  for (std::size_t i = 0; i < set.mats.size(); ++i) {
    const std::size_t m = set.partitions[i];
    const ComplexMat& G = set.mats[i];
    // Ybar^(m) = 1_{1xM} (x) V_{M,K}(y)^T[:,m]
    for (std::size_t q = 0; q < K; ++q)
      for (std::size_t p = 0; p < M; ++p) acc(q, p) += G(q, p) * Y(m, q);
    if (counter != nullptr) counter->add(K * M);
  }
  dft_columns(acc, false, counter);
  return acc;
}

[[nodiscard]] inline ComplexMat direct_demodulate_fd(std::span<const cplx> y_eq_freq,
                                                     const DirectPulseSet& set,
                                                     const DirectLimits& limits = {},
                                                     MulCounter* counter = nullptr) {
  detail::check_set(set, Domain::Frequency, SetRole::Demodulator, "direct_demodulate_fd");
  const std::size_t K = set.K;
  const std::size_t M = set.M;
  if (y_eq_freq.size() != K * M) {
    throw InvalidArgument("direct_demodulate_fd: block length mismatch");
  }
  detail::check_limits(set.mats.size(), K * M, limits, "direct_demodulate_fd");

  const ComplexMat Y = polyphase(y_eq_freq, K, M);  // V_{K,M}(y~)
  ComplexMat acc(M, K);
  for (std::size_t i = 0; i < set.mats.size(); ++i) {
    const std::size_t l = set.partitions[i];
    const ComplexMat& G = set.mats[i];
    // Ybar^(l)[:,q] = V_{K,M}(y~)^T[:, <q-l>_K]
    for (std::size_t p = 0; p < M; ++p)
      for (std::size_t q = 0; q < K; ++q) acc(p, q) += G(p, q) * Y((q + K - l) % K, p);
    if (counter != nullptr) counter->add(K * M);
  }
  dft_columns(acc, true, counter);  // acc = F_M D^T -> M * D^T
  scale(acc.data(), 1.0 / static_cast<double>(M));
  return acc.transposed();
}

/// Modulates with the sparse FD chains when the pulse fits in L_max bands,
/// otherwise falls back to the TD chains. Never truncates the pulse.
[[nodiscard]] inline ComplexVec direct_modulate_auto(const ComplexMat& D, const PrototypePulse& g,
                                                     const DirectLimits& limits = {},
                                                     MulCounter* counter = nullptr) {
  if (active_bands(g.freq, g.params.K(), g.params.M()).size() <= limits.max_chains) {
    const auto fd = precompute_fd_mod(g, FdSupport::Sparse, limits);
    return direct_modulate_fd(D, fd, true, limits, counter);
  }
  return direct_modulate_td(D, precompute_td_mod(g), limits, counter);
}

}  // namespace gfdm
