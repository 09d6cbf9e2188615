#pragma once

// End-to-end block chain: map -> modulate -> CP/CS -> channel -> remove CP
// -> FD equalize -> demodulate -> demap, with per-stage multiplication counts.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "gfdm/analysis.hpp"
#include "gfdm/channel.hpp"
#include "gfdm/config.hpp"
#include "gfdm/modem_direct.hpp"
#include "gfdm/modem_fft.hpp"
#include "gfdm/oracle.hpp"
#include "gfdm/pulses.hpp"

namespace gfdm {

[[nodiscard]] inline cplx qpsk_symbol(unsigned bits) {
  const double a = 1.0 / std::sqrt(2.0);
  return {(bits & 1u) ? -a : a, (bits & 2u) ? -a : a};
}

[[nodiscard]] inline unsigned qpsk_decide(cplx z) {
  return (z.real() < 0.0 ? 1u : 0u) | (z.imag() < 0.0 ? 2u : 0u);
}

/// `count` seeded QPSK symbols; symbol i depends only on (seed, i).
[[nodiscard]] inline ComplexVec random_qpsk(std::size_t count, std::uint64_t seed) {
  ComplexVec v(count);
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = qpsk_symbol(static_cast<unsigned>(GaussianSource::mix(seed ^ GaussianSource::mix(i)) & 3u));
  }
  return v;
}

/// Pulse, windows and direct-chain coefficient sets for one configuration.
class ModemChain {
 public:
  explicit ModemChain(const RunConfig& cfg)
      : cfg_(cfg),
        params_(cfg.params()),
        pulse_(make_prototype(cfg.pulse, params_, cfg.alpha, cfg.delta)) {
    cfg_.validate();
    const Domain md = mod_domain(cfg.domain);
    const Domain dd = demod_domain(cfg.domain);
    mod_win_ = make_windows(pulse_, md, cfg.rx, cfg.eps_sing);
    demod_win_ = md == dd ? mod_win_ : make_windows(pulse_, dd, cfg.rx, cfg.eps_sing);
    if (cfg.arch == ModemArch::Direct) {
      const auto lim = cfg.limits();
      const FdSupport support = cfg.sparse ? FdSupport::Sparse : FdSupport::Full;
      if (md == Domain::Time) {
        mod_set_ = precompute_td_mod(pulse_);
      } else {
        mod_set_ = precompute_fd_mod(pulse_, support, lim);
      }
      if (dd == Domain::Time) {
        demod_set_ = precompute_td_demod(demod_win_.w_rx);
      } else {
        demod_set_ = precompute_fd_demod(demod_win_.w_rx, support, lim);
      }
    }
  }

  [[nodiscard]] const RunConfig& config() const noexcept { return cfg_; }
  [[nodiscard]] const GfdmParams& params() const noexcept { return params_; }
  [[nodiscard]] const PrototypePulse& pulse() const noexcept { return pulse_; }
  [[nodiscard]] ArchKind kind() const { return cfg_.arch_kind(); }

  /// Overlap used by the sparse direct chains, if any.
  [[nodiscard]] std::optional<std::size_t> overlap() const {
    if (kind() != ArchKind::DIR_FD_FD_SPARSE) return std::nullopt;
    return mod_set_.overlap();
  }

  /// Time-domain block of N samples, without CP.
  [[nodiscard]] ComplexVec modulate(const ComplexMat& D, MulCounter* counter = nullptr) const {
    require_grid_shape(D, params_.K(), params_.M(), "modulate");
    const bool td = mod_domain(cfg_.domain) == Domain::Time;
    if (cfg_.arch == ModemArch::Fft) {
      return td ? modulate_td(D, mod_win_.w_tx, counter)
                : modulate_fd(D, mod_win_.w_tx, true, counter);
    }
    const auto lim = cfg_.limits();
    return td ? direct_modulate_td(D, mod_set_, lim, counter)
              : direct_modulate_fd(D, mod_set_, true, lim, counter);
  }

  /// Demodulates an equalized spectrum.
  [[nodiscard]] ComplexMat demodulate_spectrum(std::span<const cplx> y_eq_freq,
                                               MulCounter* counter = nullptr,
                                               MulCounter* to_time_counter = nullptr) const {
    const auto lim = cfg_.limits();
    if (demod_domain(cfg_.domain) == Domain::Frequency) {
      return cfg_.arch == ModemArch::Fft
                 ? demodulate_fd(y_eq_freq, demod_win_.w_rx, counter)
                 : direct_demodulate_fd(y_eq_freq, demod_set_, lim, counter);
    }
    ComplexVec y = dft(y_eq_freq, true, to_time_counter);
    scale(y, 1.0 / static_cast<double>(y.size()));
    return cfg_.arch == ModemArch::Fft ? demodulate_td(y, demod_win_.w_rx, counter)
                                       : direct_demodulate_td(y, demod_set_, lim, counter);
  }

 private:
  RunConfig cfg_;
  GfdmParams params_;
  PrototypePulse pulse_;
  WindowPair mod_win_;
  WindowPair demod_win_;
  DirectPulseSet mod_set_;
  DirectPulseSet demod_set_;
};

struct LoopbackResult {
  ArchKind kind = ArchKind::FFT_TD_FD;
  std::size_t blocks = 0;
  std::size_t symbols = 0;
  std::size_t symbol_errors = 0;
  double nmse = 0.0;
  double ser = 0.0;
  Trace trace;  // per block
  ReconcileReport cm;
};

/// Runs cfg.blocks blocks of seeded QPSK data through the full chain.
/// Block b draws symbols from seed+2b and noise from seed+2b+1.
[[nodiscard]] inline LoopbackResult run_loopback(const RunConfig& cfg) {
  const ModemChain chain(cfg);
  const GfdmParams& params = chain.params();
  const std::size_t N = params.N();
  LoopbackResult res;
  res.kind = chain.kind();
  res.blocks = cfg.blocks;

  double err_energy = 0.0;
  double ref_energy = 0.0;
  for (std::size_t b = 0; b < cfg.blocks; ++b) {
    const std::uint64_t base = cfg.channel.seed + 2 * static_cast<std::uint64_t>(b);
    const ComplexVec d = random_qpsk(params.active_count(), base);
    const ComplexMat D = map_symbols(d, params);

    MulCounter c_mod, c_eq, c_time, c_demod;
    const ComplexVec x = chain.modulate(D, &c_mod);
    ChannelSpec ch = cfg.channel;
    ch.seed = base + 1;
    const ComplexVec rx = apply_channel(add_cp(x, cfg.n_cp, cfg.n_cs), ch);
    const ComplexVec y = remove_cp(rx, N, cfg.n_cp, cfg.n_cs);
    const ComplexVec y_eq = fd_equalize_zf(y, cfg.channel.taps, &c_eq, cfg.eps_sing);
    const ComplexMat D_hat = chain.demodulate_spectrum(y_eq, &c_demod, &c_time);
    const ComplexVec d_hat = demap_symbols(D_hat, params);

    for (std::size_t i = 0; i < d.size(); ++i) {
      err_energy += std::norm(d_hat[i] - d[i]);
      ref_energy += std::norm(d[i]);
      if (qpsk_decide(d_hat[i]) != qpsk_decide(d[i])) ++res.symbol_errors;
    }
    res.symbols += d.size();
    if (b == 0) {
      res.trace = {{"modulator", c_mod.count()},
                   {"equalizer N-FFT", c_eq.count()},
                   {"N-IFFT to time", c_time.count()},
                   {"demodulator", c_demod.count()}};
    }
  }
  res.nmse = ref_energy > 0.0 ? err_energy / ref_energy : 0.0;
  res.ser = res.symbols > 0 ? static_cast<double>(res.symbol_errors) / static_cast<double>(res.symbols)
                            : 0.0;
  res.cm = reconcile(res.kind, params.K(), params.M(), res.trace, chain.overlap());
  return res;
}

/// Configuration used to check the CM formulas against counted runs: every
/// chain the architecture needs is allowed, RC pulse with matched filter.
[[nodiscard]] inline RunConfig counting_config(ArchKind kind, std::size_t K, std::size_t M) {
  RunConfig c;
  c.K = K;
  c.M = M;
  c.pulse = PulseKind::RaisedCosine;
  c.alpha = 0.5;
  c.delta = 0.5;
  c.rx = RxKind::MatchedFilter;
  c.l_max = K * M;
  c.n_max = K * M;
  switch (kind) {
    case ArchKind::FFT_TD_FD: c.arch = ModemArch::Fft; c.domain = Pairing::TdFd; break;
    case ArchKind::FFT_TD_TD: c.arch = ModemArch::Fft; c.domain = Pairing::TdTd; break;
    case ArchKind::FFT_FD_FD: c.arch = ModemArch::Fft; c.domain = Pairing::FdFd; break;
    case ArchKind::DIR_TD_FD: c.arch = ModemArch::Direct; c.domain = Pairing::TdFd; break;
    case ArchKind::DIR_TD_TD: c.arch = ModemArch::Direct; c.domain = Pairing::TdTd; break;
    case ArchKind::DIR_FD_FD: c.arch = ModemArch::Direct; c.domain = Pairing::FdFd; break;
    case ArchKind::DIR_FD_FD_SPARSE:
      c.arch = ModemArch::Direct;
      c.domain = Pairing::FdFd;
      c.sparse = true;
      break;
  }
  return c;
}

/// Counted single-block run of `kind` at (K, M), reconciled with cm_count.
[[nodiscard]] inline ReconcileReport measure_chain(ArchKind kind, std::size_t K, std::size_t M) {
  return run_loopback(counting_config(kind, K, M)).cm;
}

}  // namespace gfdm
