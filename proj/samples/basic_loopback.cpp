// Modulates one block of QPSK symbols with both architectures, sends it
// through a short multipath channel and recovers the symbols.

#include <cstdio>

#include "gfdm/gfdm.hpp"

int main() {
  using namespace gfdm;

  const GfdmParams params(16, 8);
  const PrototypePulse g = make_prototype(PulseKind::RaisedCosine, params, 0.5, 0.5);
  const WindowPair td = make_windows(g, Domain::Time, RxKind::ZeroForcing);
  const WindowPair fd = make_windows(g, Domain::Frequency, RxKind::ZeroForcing);

  const ComplexMat D = map_symbols(random_qpsk(params.active_count(), 1), params);

  MulCounter tx_cm;
  const ComplexVec x = modulate_td(D, td.w_tx, &tx_cm);
  const ComplexVec x_direct = direct_modulate_td(D, precompute_td_mod(g));
  std::printf("FFT vs direct max diff: %.3e\n", max_abs_diff(x, x_direct));

  ChannelSpec ch;
  ch.taps = {{1.0, 0.0}, {0.4, -0.2}, {0.1, 0.1}};
  ch.snr_db = 25.0;
  ch.seed = 42;
  const ComplexVec rx = apply_channel(add_cp(x, 4), ch);
  MulCounter rx_cm;
  const ComplexVec y_eq = fd_equalize_zf(remove_cp(rx, params.N(), 4), ch.taps, &rx_cm);
  const ComplexMat D_hat = demodulate_fd(y_eq, fd.w_rx, &rx_cm);

  std::size_t errors = 0;
  for (std::size_t k = 0; k < params.K(); ++k)
    for (std::size_t m = 0; m < params.M(); ++m)
      errors += qpsk_decide(D_hat(k, m)) != qpsk_decide(D(k, m));
  std::printf("symbol errors at 25 dB: %zu of %zu\n", errors, params.N());
  std::printf("counted CM: %llu, formula: %lld\n",
              static_cast<unsigned long long>(tx_cm.count() + rx_cm.count()),
              static_cast<long long>(cm_count(ArchKind::FFT_TD_FD, params.K(), params.M())));
  return 0;
}
