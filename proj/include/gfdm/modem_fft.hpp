#pragma once

// Unified FFT-based modem: four configurable FFT blocks, two transpose
// memories and one window multiplier. The modulator runs the blocks in order
// 1..4, the demodulator in order 4..1. Every TD/FD modulation and
// demodulation mode is a preset of the same pipeline.
//
// Stream orders at the pipeline boundary:
//   TD modulator   in: vec(D) (columns of D)    out: x
//   FD modulator   in: rows of D                out: x~ (or x with block 4)
//   TD demodulator in: y~ (or y without block 4) out: vec(D^)
//   FD demodulator in: y~                        out: rows of D^

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "gfdm/errors.hpp"
#include "gfdm/numerics.hpp"
#include "gfdm/params.hpp"

namespace gfdm {

enum class FftDirection { Forward, Inverse };

struct StageConfig {
  std::size_t size = 0;
  FftDirection direction = FftDirection::Forward;
  bool enabled = false;
  double scale = 1.0;  // real gain applied after the transform

  friend bool operator==(const StageConfig&, const StageConfig&) = default;
};

/// Transpose memory: writes the stream as consecutive columns of length
/// `rows` and reads it back row by row. Disabled memories pass through.
struct TransposeConfig {
  bool enabled = false;
  std::size_t rows = 0;

  friend bool operator==(const TransposeConfig&, const TransposeConfig&) = default;
};

enum class ModemMode { TdMod, FdMod, TdDemod, FdDemod };
enum class Flow { Modulator, Demodulator };

struct ArchConfig {
  Flow flow = Flow::Modulator;
  std::array<StageConfig, 4> stages{};  // FFT blocks 1..4
  TransposeConfig allocation;           // between blocks 1 and 2
  TransposeConfig output;               // between blocks 3 and 4
  bool window_enabled = false;
  ComplexMat window;  // read column-major, one entry per stream sample
  std::optional<ModemMode> mode;
};

namespace detail {

inline void run_stage(const StageConfig& st, std::span<cplx> buf, MulCounter* counter,
                      const char* name) {
  if (!st.enabled) return;
  if (!is_power_of_two(st.size) || buf.size() % st.size != 0) {
    throw InvalidArgument(std::string("run_pipeline: ") + name + " size " +
                          std::to_string(st.size) + " incompatible with block length " +
                          std::to_string(buf.size()));
  }
  const bool inverse = st.direction == FftDirection::Inverse;
  for (std::size_t off = 0; off < buf.size(); off += st.size) {
    dft_inplace(buf.subspan(off, st.size), inverse, counter);
  }
  if (st.scale != 1.0) scale(buf, st.scale);
}

inline void run_transpose(const TransposeConfig& t, ComplexVec& buf, const char* name) {
  if (!t.enabled) return;
  const std::size_t n = buf.size();
  if (t.rows == 0 || n % t.rows != 0) {
    throw InvalidArgument(std::string("run_pipeline: ") + name + " rows " +
                          std::to_string(t.rows) + " do not divide " + std::to_string(n));
  }
  const std::size_t cols = n / t.rows;
  ComplexVec out(n);
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < t.rows; ++r) out[c + r * cols] = buf[r + c * t.rows];
  buf.swap(out);
}

inline void run_window(const ArchConfig& cfg, std::span<cplx> buf, MulCounter* counter) {
  if (!cfg.window_enabled) return;
  if (cfg.window.size() != buf.size()) {
    throw InvalidArgument("run_pipeline: window holds " + std::to_string(cfg.window.size()) +
                          " entries for a block of " + std::to_string(buf.size()));
  }
  const std::size_t rows = cfg.window.rows();
  for (std::size_t i = 0; i < buf.size(); ++i) {
    buf[i] *= cfg.window(i % rows, i / rows);
  }
  if (counter != nullptr) counter->add(buf.size());
}

inline StageConfig stage(std::size_t size, FftDirection dir, bool inverse_scaled) {
  return {size, dir, true,
          inverse_scaled && dir == FftDirection::Inverse ? 1.0 / static_cast<double>(size) : 1.0};
}

}  // namespace detail

/// Executes one block through the configured pipeline.
[[nodiscard]] inline ComplexVec run_pipeline(const ArchConfig& cfg, std::span<const cplx> input,
                                             MulCounter* counter = nullptr) {
  if (input.empty()) throw InvalidArgument("run_pipeline: empty input block");
  ComplexVec buf(input.begin(), input.end());
  if (cfg.flow == Flow::Modulator) {
    detail::run_stage(cfg.stages[0], buf, counter, "FFT block 1");
    detail::run_transpose(cfg.allocation, buf, "allocation memory");
    detail::run_stage(cfg.stages[1], buf, counter, "FFT block 2");
    detail::run_window(cfg, buf, counter);
    detail::run_stage(cfg.stages[2], buf, counter, "FFT block 3");
    detail::run_transpose(cfg.output, buf, "output memory");
    detail::run_stage(cfg.stages[3], buf, counter, "FFT block 4");
  } else {
    detail::run_stage(cfg.stages[3], buf, counter, "FFT block 4");
    detail::run_transpose(cfg.output, buf, "output memory");
    detail::run_stage(cfg.stages[2], buf, counter, "FFT block 3");
    detail::run_window(cfg, buf, counter);
    detail::run_stage(cfg.stages[1], buf, counter, "FFT block 2");
    detail::run_transpose(cfg.allocation, buf, "allocation memory");
    detail::run_stage(cfg.stages[0], buf, counter, "FFT block 1");
  }
  return buf;
}

/// Configuration rows for the modulator and for the demodulator with FD
/// equalization. `window` is the natural K x M W_tx (modulators) or W_rx
/// (demodulators); TD modes store it transposed.
[[nodiscard]] inline ArchConfig preset(ModemMode mode, std::size_t K, std::size_t M,
                                       const ComplexMat& window) {
  using enum FftDirection;
  if (!is_power_of_two(K) || !is_power_of_two(M)) {
    throw InvalidArgument("preset: K and M must be powers of two");
  }
  if (window.rows() != K || window.cols() != M) {
    throw InvalidArgument("preset: window must be " + std::to_string(K) + "x" +
                          std::to_string(M));
  }
  const std::size_t N = K * M;
  ArchConfig cfg;
  cfg.mode = mode;
  cfg.window_enabled = true;
  switch (mode) {
    case ModemMode::TdMod:
      cfg.flow = Flow::Modulator;
      cfg.stages = {detail::stage(K, Inverse, true), detail::stage(M, Forward, true),
                    detail::stage(M, Inverse, true), StageConfig{}};
      cfg.allocation = {true, K};
      cfg.output = {true, M};
      cfg.window = window.transposed();
      break;
    case ModemMode::FdMod:
      cfg.flow = Flow::Modulator;
      cfg.stages = {detail::stage(M, Forward, true), detail::stage(K, Inverse, true),
                    detail::stage(K, Forward, true), detail::stage(N, Inverse, true)};
      cfg.allocation = {true, M};
      cfg.output = {true, K};
      cfg.window = window;
      break;
    case ModemMode::TdDemod:
      cfg.flow = Flow::Demodulator;
      cfg.stages = {detail::stage(K, Forward, true), detail::stage(M, Inverse, true),
                    detail::stage(M, Forward, true), detail::stage(N, Inverse, true)};
      cfg.output = {true, K};
      cfg.allocation = {true, M};
      cfg.window = window.transposed();
      break;
    case ModemMode::FdDemod:
      cfg.flow = Flow::Demodulator;
      cfg.stages = {detail::stage(M, Inverse, true), detail::stage(K, Forward, true),
                    detail::stage(K, Inverse, true), StageConfig{}};
      cfg.output = {true, M};
      cfg.allocation = {true, K};
      cfg.window = window;
      break;
    default:
      throw InvalidArgument("preset: invalid mode");
  }
  return cfg;
}

/// x with V_{M,K}(x) = (1/M) F_M^H (W_tx^T .* F_M [(1/K) F_K^H D]^T).
[[nodiscard]] inline ComplexVec modulate_td(const ComplexMat& D, const ComplexMat& w_tx,
                                            MulCounter* counter = nullptr) {
  require_grid_shape(D, w_tx.rows(), w_tx.cols(), "modulate_td");
  return run_pipeline(preset(ModemMode::TdMod, D.rows(), D.cols(), w_tx), D.vec(), counter);
}

/// x~ with V_{K,M}(x~) = F_K (W_tx .* (1/K) F_K^H [F_M D^T]^T). With
/// emit_time the block-4 N-IDFT (scaled 1/N) returns the time samples.
[[nodiscard]] inline ComplexVec modulate_fd(const ComplexMat& D, const ComplexMat& w_tx,
                                            bool emit_time, MulCounter* counter = nullptr) {
  require_grid_shape(D, w_tx.rows(), w_tx.cols(), "modulate_fd");
  ArchConfig cfg = preset(ModemMode::FdMod, D.rows(), D.cols(), w_tx);
  cfg.stages[3].enabled = emit_time;
  return run_pipeline(cfg, D.data(), counter);
}

/// D^ = (1/M) F_K (W_rx .* [(1/K) F_K^H V_{K,M}(y~)]) F_M^H for an
/// equalized spectrum y~.
[[nodiscard]] inline ComplexMat demodulate_fd(std::span<const cplx> y_eq_freq,
                                              const ComplexMat& w_rx,
                                              MulCounter* counter = nullptr) {
  const std::size_t K = w_rx.rows();
  const std::size_t M = w_rx.cols();
  if (y_eq_freq.size() != K * M) throw InvalidArgument("demodulate_fd: block length mismatch");
  auto rows = run_pipeline(preset(ModemMode::FdDemod, K, M, w_rx), y_eq_freq, counter);
  return ComplexMat(K, M, std::move(rows));
}

/// D^ = (1/M) F_K (W_rx .* [F_M V_{M,K}(y)]^T) F_M^H for an equalized
/// time-domain block y.
[[nodiscard]] inline ComplexMat demodulate_td(std::span<const cplx> y_eq,
                                              const ComplexMat& w_rx,
                                              MulCounter* counter = nullptr) {
  const std::size_t K = w_rx.rows();
  const std::size_t M = w_rx.cols();
  if (y_eq.size() != K * M) throw InvalidArgument("demodulate_td: block length mismatch");
  ArchConfig cfg = preset(ModemMode::TdDemod, K, M, w_rx);
  cfg.stages[3].enabled = false;
  return ComplexMat::unvec(run_pipeline(cfg, y_eq, counter), K, M);
}

}  // namespace gfdm
