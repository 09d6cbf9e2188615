#pragma once

// Command implementations behind gfdm_cli. Each returns the process exit
// code: 0 ok, 1 I/O error, 2 validation error, 3 numerical error.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gfdm/gfdm.hpp"

namespace gfdm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

struct CommonOptions {
  std::string config_path;  // empty: built-in defaults
  std::string in_path;
  std::string out_path;
  SampleFormat format = SampleFormat::Binary;
  std::optional<ModemArch> arch;
  std::optional<Pairing> domain;
};

struct AnalyzeOptions {
  std::vector<std::size_t> n_values;
  std::vector<std::size_t> k_values;
  std::vector<std::size_t> m_values;
  std::vector<ArchKind> kinds;  // empty: all
  std::size_t L = 2;
  bool csv = true;
  std::string out_path;  // empty: stdout
};

/// "td" and "fd" select the same domain on both sides.
inline std::optional<Pairing> parse_domain_flag(std::string_view s) {
  if (s == "td") return Pairing::TdTd;
  if (s == "fd") return Pairing::FdFd;
  return parse_pairing(s);
}

[[nodiscard]] inline RunConfig load_config(const CommonOptions& opt) {
  RunConfig cfg;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw IoError("cannot open config '" + opt.config_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    cfg = parse_config(ss.str());
  }
  if (opt.arch) cfg.arch = *opt.arch;
  if (opt.domain) cfg.domain = *opt.domain;
  cfg.validate();
  return cfg;
}

/// Maps library exceptions to exit codes and prints the message.
inline int guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

/// Writes pulse_time, pulse_freq, w_tx and w_rx into the output directory,
/// each as .csv and .bin. Windows belong to the modulator domain.
inline int cmd_pulse(const CommonOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(opt);
    const GfdmParams params = cfg.params();
    const PrototypePulse g = make_prototype(cfg.pulse, params, cfg.alpha, cfg.delta);
    const WindowPair w = make_windows(g, mod_domain(cfg.domain), cfg.rx, cfg.eps_sing);
    const std::filesystem::path dir = opt.out_path.empty() ? "." : opt.out_path;
    std::filesystem::create_directories(dir);
    write_samples(dir / "pulse_time.csv", g.time, SampleFormat::Csv);
    write_samples(dir / "pulse_time.bin", g.time, SampleFormat::Binary);
    write_samples(dir / "pulse_freq.csv", g.freq, SampleFormat::Csv);
    write_samples(dir / "pulse_freq.bin", g.freq, SampleFormat::Binary);
    write_matrix_csv(dir / "w_tx.csv", w.w_tx);
    write_matrix_csv(dir / "w_rx.csv", w.w_rx);
    write_samples(dir / "w_tx.bin", w.w_tx.data(), SampleFormat::Binary);
    write_samples(dir / "w_rx.bin", w.w_rx.data(), SampleFormat::Binary);
    out << "pulse " << to_string(cfg.pulse) << " K=" << params.K() << " M=" << params.M()
        << " bands=" << active_bands(g.freq, params.K(), params.M()).size()
        << " overlap=" << freq_overlap(g) << " -> " << dir.string() << '\n';
  });
}

/// Active-set symbols in, one time-domain block with CP/CS out.
inline int cmd_modulate(const CommonOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(opt);
    if (opt.in_path.empty() || opt.out_path.empty()) {
      throw InvalidArgument("modulate needs --in and --out");
    }
    const ModemChain chain(cfg);
    const SampleFile sym = read_samples(opt.in_path, opt.format);
    if (sym.samples.size() != chain.params().active_count()) {
      throw InvalidArgument("symbol file holds " + std::to_string(sym.samples.size()) +
                            " symbols, configuration expects " +
                            std::to_string(chain.params().active_count()));
    }
    require_finite(sym.samples, "symbol file");
    const ComplexVec x = chain.modulate(map_symbols(sym.samples, chain.params()));
    const ComplexVec tx = add_cp(x, cfg.n_cp, cfg.n_cs);
    write_samples(opt.out_path, tx, opt.format);
    out << "modulated " << sym.samples.size() << " symbols into " << tx.size() << " samples ("
        << to_string(cfg.arch_kind()) << ")\n";
  });
}

/// One received block with CP/CS in, equalized and demodulated active-set
/// symbols out.
inline int cmd_demodulate(const CommonOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(opt);
    if (opt.in_path.empty() || opt.out_path.empty()) {
      throw InvalidArgument("demodulate needs --in and --out");
    }
    const ModemChain chain(cfg);
    const std::size_t N = chain.params().N();
    const SampleFile rx = read_samples(opt.in_path, opt.format);
    if (rx.samples.size() != N + cfg.n_cp + cfg.n_cs) {
      throw InvalidArgument("sample file holds " + std::to_string(rx.samples.size()) +
                            " samples, configuration expects " +
                            std::to_string(N + cfg.n_cp + cfg.n_cs));
    }
    require_finite(rx.samples, "sample file");
    const ComplexVec y = remove_cp(rx.samples, N, cfg.n_cp, cfg.n_cs);
    const ComplexVec y_eq = fd_equalize_zf(y, cfg.channel.taps, nullptr, cfg.eps_sing);
    const ComplexVec d = demap_symbols(chain.demodulate_spectrum(y_eq), chain.params());
    write_samples(opt.out_path, d, opt.format, kFlagSymbolGrid);
    out << "demodulated " << d.size() << " symbols (" << to_string(cfg.arch_kind()) << ")\n";
  });
}

inline void print_loopback(std::ostream& out, const LoopbackResult& r) {
  out << "kind " << to_string(r.kind) << '\n'
      << "blocks " << r.blocks << '\n'
      << "symbols " << r.symbols << '\n'
      << std::setprecision(6) << "nmse " << r.nmse << '\n'
      << "ser " << r.ser << '\n'
      << "cm_measured " << r.cm.measured << '\n'
      << "cm_formula " << r.cm.expected << '\n'
      << "cm_match " << (r.cm.pass ? "yes" : "no") << '\n';
  for (const auto& s : r.trace) out << "  stage " << s.stage << ' ' << s.count << '\n';
}

inline int cmd_loopback(const CommonOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(opt);
    const LoopbackResult r = run_loopback(cfg);
    if (opt.out_path.empty()) {
      print_loopback(out, r);
    } else {
      std::ofstream f(opt.out_path);
      if (!f) throw IoError("cannot open '" + opt.out_path + "' for writing");
      print_loopback(f, r);
    }
  });
}

/// (K, M) pairs requested by the options: every power-of-two split of each N
/// with K, M >= 2, plus the cross product of the K and M lists.
[[nodiscard]] inline std::vector<std::pair<std::size_t, std::size_t>> analyze_grid(
    const AnalyzeOptions& opt) {
  std::vector<std::pair<std::size_t, std::size_t>> grid;
  for (auto n : opt.n_values) {
    if (!is_power_of_two(n) || n < 4) throw InvalidArgument("analyze: N must be a power of two >= 4");
    for (std::size_t m = 2; m <= n / 2; m *= 2) grid.emplace_back(n / m, m);
  }
  if (!opt.k_values.empty() || !opt.m_values.empty()) {
    if (opt.k_values.empty() || opt.m_values.empty()) {
      throw InvalidArgument("analyze: --K and --M must be given together");
    }
    for (auto m : opt.m_values)
      for (auto k : opt.k_values) grid.emplace_back(k, m);
  }
  if (grid.empty()) throw InvalidArgument("analyze: give --N or --K/--M");
  return grid;
}

inline int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto grid = analyze_grid(opt);
    std::vector<ArchKind> kinds = opt.kinds;
    if (kinds.empty()) kinds.assign(std::begin(kAllArchKinds), std::end(kAllArchKinds));
    std::ostringstream body;
    if (opt.csv) body << kAnalysisCsvHeader << '\n';
    const CostModel cost;
    for (const auto& [K, M] : grid) {
      for (auto kind : kinds) {
        const AnalysisRow row = analyze_row(kind, K, M, opt.L, cost);
        if (opt.csv) {
          write_csv_row(body, row);
        } else {
          write_text_row(body, row);
        }
      }
    }
    if (opt.out_path.empty()) {
      out << body.str();
    } else {
      std::ofstream f(opt.out_path);
      if (!f) throw IoError("cannot open '" + opt.out_path + "' for writing");
      f << body.str();
    }
  });
}

}  // namespace gfdm::cli
