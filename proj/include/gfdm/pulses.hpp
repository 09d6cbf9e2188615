#pragma once

// Prototype pulse synthesis and the Zak-domain transmit/receive windows.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gfdm/errors.hpp"
#include "gfdm/numerics.hpp"
#include "gfdm/params.hpp"

namespace gfdm {

enum class PulseKind { RaisedCosine, RootRaisedCosine, Dirichlet, RectTime };
enum class RxKind { ZeroForcing, MatchedFilter };

inline const char* to_string(PulseKind k) {
  switch (k) {
    case PulseKind::RaisedCosine: return "RC";
    case PulseKind::RootRaisedCosine: return "RRC";
    case PulseKind::Dirichlet: return "DIRICHLET";
    case PulseKind::RectTime: return "RECT_TD";
  }
  return "?";
}

inline const char* to_string(RxKind k) { return k == RxKind::ZeroForcing ? "ZF" : "MF"; }

inline std::optional<PulseKind> parse_pulse_kind(std::string_view s) {
  if (s == "RC") return PulseKind::RaisedCosine;
  if (s == "RRC") return PulseKind::RootRaisedCosine;
  if (s == "DIRICHLET") return PulseKind::Dirichlet;
  if (s == "RECT_TD") return PulseKind::RectTime;
  return std::nullopt;
}

inline std::optional<RxKind> parse_rx_kind(std::string_view s) {
  if (s == "ZF") return RxKind::ZeroForcing;
  if (s == "MF") return RxKind::MatchedFilter;
  return std::nullopt;
}

inline constexpr double kDefaultSingularEps = 1e-8;
inline constexpr double kDefaultSparsityTol = 1e-12;

/// Length-N prototype pulse with its N-point spectrum, unit energy.
struct PrototypePulse {
  GfdmParams params;
  PulseKind kind = PulseKind::RaisedCosine;
  double alpha = 0.0;
  double delta = 0.0;
  ComplexVec time;  // g[n]
  ComplexVec freq;  // F_N g
};

/// Raised-cosine spectral shape with roll-off alpha, argument in units of
/// the subcarrier spacing.
inline double raised_cosine(double u, double alpha) {
  const double a = std::abs(u);
  const double flat = (1.0 - alpha) / 2.0;
  if (a <= flat) return 1.0;
  if (alpha > 0.0 && a <= (1.0 + alpha) / 2.0) {
    return 0.5 * (1.0 + std::cos(std::numbers::pi / alpha * (a - flat)));
  }
  return 0.0;
}

/// Samples the frequency response of the chosen filter on the N-point grid
/// (or the time response for RECT_TD) and normalizes to unit energy.
///
/// RC/RRC use g~[<q>_N] = r((q + delta)/M) for q in [-M, M). When the grid
/// wraps (K = 1) aliased samples add up. delta = 1/2 is what keeps W_tx
/// nonsingular for even K and M.
[[nodiscard]] inline PrototypePulse make_prototype(PulseKind kind, const GfdmParams& params,
                                                   double alpha = 0.0, double delta = 0.0) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidArgument("make_prototype: roll-off must lie in [0,1], got " +
                          std::to_string(alpha));
  }
  if (delta != 0.0 && delta != 0.5) {
    throw InvalidArgument("make_prototype: shift must be 0 or 1/2");
  }
  const std::size_t K = params.K();
  const std::size_t M = params.M();
  const std::size_t N = params.N();
  PrototypePulse p{params, kind, alpha, delta, ComplexVec(N), ComplexVec(N)};

  switch (kind) {
    case PulseKind::RaisedCosine:
    case PulseKind::RootRaisedCosine: {
      const auto m = static_cast<long long>(M);
      const auto n = static_cast<long long>(N);
      for (long long q = -m; q < m; ++q) {
        double r = raised_cosine((static_cast<double>(q) + delta) / static_cast<double>(M), alpha);
        if (kind == PulseKind::RootRaisedCosine) r = std::sqrt(r);
        p.freq[static_cast<std::size_t>(((q % n) + n) % n)] += r;
      }
      break;
    }
    case PulseKind::Dirichlet:
      for (std::size_t q = 0; q < M; ++q) p.freq[q] = 1.0;
      break;
    case PulseKind::RectTime:
      for (std::size_t i = 0; i < K; ++i) p.time[i] = 1.0;
      p.freq = dft(p.time);
      break;
  }

  if (kind != PulseKind::RectTime) {
    p.time = dft(p.freq, true);
    scale(p.time, 1.0 / static_cast<double>(N));
  }
  const double energy = norm2(p.time);
  if (energy <= 0.0) throw InvalidArgument("make_prototype: pulse has zero energy");
  const double s = 1.0 / std::sqrt(energy);
  scale(p.time, s);
  scale(p.freq, s);
  return p;
}

/// Transmit window, K x M.
///   time domain:      W_tx = K * Z_{M,K}(g)^T
///   frequency domain: W_tx = K * Zbar_{K,M}(g~)
/// The two differ by the quasi-periodicity phase exp(-j2pi qp/N).
[[nodiscard]] inline ComplexMat tx_window(const PrototypePulse& g, Domain domain) {
  const std::size_t K = g.params.K();
  const std::size_t M = g.params.M();
  ComplexMat w = domain == Domain::Time ? zak_time(g.time, M, K).transposed()
                                        : zak_freq(g.freq, K, M);
  scale(w.data(), static_cast<double>(K));
  return w;
}

/// Receive window from a transmit window. ZF satisfies W_rx .* W_tx = 1,
/// which makes demodulation the exact inverse of modulation; MF is the
/// conjugate.
[[nodiscard]] inline ComplexMat rx_window(const ComplexMat& w_tx, RxKind kind,
                                          double eps_sing = kDefaultSingularEps) {
  ComplexMat w(w_tx.rows(), w_tx.cols());
  auto in = w_tx.data();
  auto out = w.data();
  if (kind == RxKind::MatchedFilter) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::conj(in[i]);
    return w;
  }
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double mag = std::abs(in[i]);
    if (!(mag > eps_sing)) {
      throw SingularWindow("rx_window: |W_tx| = " + std::to_string(mag) + " at (" +
                           std::to_string(i / w_tx.cols()) + "," +
                           std::to_string(i % w_tx.cols()) +
                           "); no zero-forcing dual exists for this pulse");
    }
    out[i] = 1.0 / in[i];
  }
  return w;
}

struct WindowPair {
  ComplexMat w_tx;
  ComplexMat w_rx;
  RxKind rx_kind = RxKind::ZeroForcing;
  Domain domain = Domain::Time;
};

[[nodiscard]] inline WindowPair make_windows(const PrototypePulse& g, Domain domain, RxKind rx,
                                             double eps_sing = kDefaultSingularEps) {
  WindowPair wp;
  wp.w_tx = tx_window(g, domain);
  wp.w_rx = rx_window(wp.w_tx, rx, eps_sing);
  wp.rx_kind = rx;
  wp.domain = domain;
  return wp;
}

/// Indices l of the length-M spectral bands [lM, lM+M) holding any sample
/// above rel_tol * max|spectrum|.
[[nodiscard]] inline std::vector<std::size_t> active_bands(std::span<const cplx> spectrum,
                                                           std::size_t K, std::size_t M,
                                                           double rel_tol = kDefaultSparsityTol) {
  if (spectrum.size() != K * M) throw InvalidArgument("active_bands: length mismatch");
  const double thr = rel_tol * max_abs(spectrum);
  std::vector<std::size_t> bands;
  for (std::size_t l = 0; l < K; ++l) {
    for (std::size_t p = 0; p < M; ++p) {
      if (std::abs(spectrum[l * M + p]) > thr) {
        bands.push_back(l);
        break;
      }
    }
  }
  return bands;
}

/// Smallest number of circularly consecutive subcarrier bands that contain
/// every significant spectral sample of the pulse.
[[nodiscard]] inline std::size_t freq_overlap(const PrototypePulse& g,
                                              double rel_tol = kDefaultSparsityTol) {
  const std::size_t K = g.params.K();
  const auto bands = active_bands(g.freq, K, g.params.M(), rel_tol);
  if (bands.empty()) return 0;
  std::vector<bool> used(K, false);
  for (auto l : bands) used[l] = true;
  // Longest circular run of empty bands.
  std::size_t longest = 0;
  std::size_t run = 0;
  for (std::size_t i = 0; i < 2 * K; ++i) {
    if (!used[i % K]) {
      run = std::min(run + 1, K);
      longest = std::max(longest, run);
    } else {
      run = 0;
    }
  }
  return K - longest;
}

}  // namespace gfdm
