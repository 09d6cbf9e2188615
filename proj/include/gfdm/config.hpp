#pragma once

// Run configuration shared by the command-line tool and the loopback
// chain, stored as a flat JSON object.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gfdm/analysis.hpp"
#include "gfdm/channel.hpp"
#include "gfdm/errors.hpp"
#include "gfdm/modem_direct.hpp"
#include "gfdm/params.hpp"
#include "gfdm/pulses.hpp"

namespace gfdm {

enum class ModemArch { Fft, Direct };

/// Modulator domain and demodulator domain.
enum class Pairing { TdFd, TdTd, FdFd };

inline const char* to_string(ModemArch a) { return a == ModemArch::Fft ? "fft" : "direct"; }

inline const char* to_string(Pairing p) {
  switch (p) {
    case Pairing::TdFd: return "td_fd";
    case Pairing::TdTd: return "td_td";
    case Pairing::FdFd: return "fd_fd";
  }
  return "?";
}

inline std::optional<ModemArch> parse_modem_arch(std::string_view s) {
  if (s == "fft") return ModemArch::Fft;
  if (s == "direct") return ModemArch::Direct;
  return std::nullopt;
}

inline std::optional<Pairing> parse_pairing(std::string_view s) {
  if (s == "td_fd") return Pairing::TdFd;
  if (s == "td_td") return Pairing::TdTd;
  if (s == "fd_fd") return Pairing::FdFd;
  return std::nullopt;
}

[[nodiscard]] inline Domain mod_domain(Pairing p) {
  return p == Pairing::FdFd ? Domain::Frequency : Domain::Time;
}

[[nodiscard]] inline Domain demod_domain(Pairing p) {
  return p == Pairing::TdTd ? Domain::Time : Domain::Frequency;
}

struct RunConfig {
  std::size_t K = 4;
  std::size_t M = 4;
  PulseKind pulse = PulseKind::RaisedCosine;
  double alpha = 0.5;
  double delta = 0.5;
  RxKind rx = RxKind::ZeroForcing;
  ModemArch arch = ModemArch::Fft;
  Pairing domain = Pairing::TdFd;
  bool sparse = false;  // direct FD chains keep only the occupied bands
  std::vector<std::size_t> k_on;  // empty: all subcarriers
  std::vector<std::size_t> m_on;  // empty: all subsymbols
  std::size_t n_cp = 0;
  std::size_t n_cs = 0;
  ChannelSpec channel;
  std::size_t blocks = 1;
  std::size_t l_max = 16;
  std::size_t n_max = 2048;
  double eps_sing = kDefaultSingularEps;

  [[nodiscard]] GfdmParams params() const {
    if (k_on.empty() && m_on.empty()) return GfdmParams(K, M);
    GfdmParams full(K, M);
    return GfdmParams(K, M, k_on.empty() ? full.k_on() : k_on, m_on.empty() ? full.m_on() : m_on);
  }

  [[nodiscard]] DirectLimits limits() const { return {l_max, n_max}; }

  [[nodiscard]] ArchKind arch_kind() const {
    if (arch == ModemArch::Fft) {
      switch (domain) {
        case Pairing::TdFd: return ArchKind::FFT_TD_FD;
        case Pairing::TdTd: return ArchKind::FFT_TD_TD;
        case Pairing::FdFd: return ArchKind::FFT_FD_FD;
      }
    }
    switch (domain) {
      case Pairing::TdFd: return ArchKind::DIR_TD_FD;
      case Pairing::TdTd: return ArchKind::DIR_TD_TD;
      case Pairing::FdFd: return sparse ? ArchKind::DIR_FD_FD_SPARSE : ArchKind::DIR_FD_FD;
    }
    return ArchKind::FFT_TD_FD;
  }

  /// Checks every constraint the downstream modules would reject later.
  void validate() const {
    (void)params();
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      throw InvalidArgument("config: alpha must lie in [0,1], got " + std::to_string(alpha));
    }
    if (delta != 0.0 && delta != 0.5) throw InvalidArgument("config: delta must be 0 or 0.5");
    const std::size_t N = K * M;
    if (n_cp > N || n_cs > N) throw InvalidArgument("config: n_cp and n_cs must not exceed N");
    if (channel.taps.empty()) throw InvalidArgument("config: taps must not be empty");
    if (channel.taps.size() > N) throw InvalidArgument("config: more channel taps than N");
    if (std::isnan(channel.snr_db)) throw InvalidArgument("config: snr_db is NaN");
    if (blocks == 0) throw InvalidArgument("config: blocks must be at least 1");
    if (l_max == 0) throw InvalidArgument("config: L_max must be at least 1");
    if (!is_power_of_two(n_max)) throw InvalidArgument("config: N_max must be a power of two");
    if (!(eps_sing > 0.0)) throw InvalidArgument("config: eps_sing must be positive");
    require_finite(channel.taps, "config taps");
  }

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    const bool snr_eq = a.channel.snr_db == b.channel.snr_db ||
                        (std::isinf(a.channel.snr_db) && std::isinf(b.channel.snr_db) &&
                         a.channel.snr_db > 0 && b.channel.snr_db > 0);
    return a.K == b.K && a.M == b.M && a.pulse == b.pulse && a.alpha == b.alpha &&
           a.delta == b.delta && a.rx == b.rx && a.arch == b.arch && a.domain == b.domain &&
           a.sparse == b.sparse && a.k_on == b.k_on && a.m_on == b.m_on && a.n_cp == b.n_cp &&
           a.n_cs == b.n_cs && a.channel.taps == b.channel.taps && snr_eq &&
           a.channel.seed == b.channel.seed && a.blocks == b.blocks && a.l_max == b.l_max &&
           a.n_max == b.n_max && a.eps_sing == b.eps_sing;
  }
};

namespace detail {

template <class E>
E parse_enum(const nlohmann::json& j, const char* key, std::optional<E> (*parse)(std::string_view)) {
  const auto s = j.at(key).get<std::string>();
  const auto v = parse(s);
  if (!v) throw InvalidArgument(std::string("config: unknown ") + key + " '" + s + "'");
  return *v;
}

}  // namespace detail

[[nodiscard]] inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json taps = nlohmann::json::array();
  for (const auto& t : c.channel.taps) taps.push_back({t.real(), t.imag()});
  nlohmann::json j = {
      {"K", c.K},
      {"M", c.M},
      {"pulse", to_string(c.pulse)},
      {"alpha", c.alpha},
      {"delta", c.delta},
      {"rx", to_string(c.rx)},
      {"arch", to_string(c.arch)},
      {"domain", to_string(c.domain)},
      {"sparse", c.sparse},
      {"k_on", c.k_on},
      {"m_on", c.m_on},
      {"n_cp", c.n_cp},
      {"n_cs", c.n_cs},
      {"taps", taps},
      {"seed", c.channel.seed},
      {"blocks", c.blocks},
      {"L_max", c.l_max},
      {"N_max", c.n_max},
      {"eps_sing", c.eps_sing},
  };
  // JSON has no infinity; null stands for a noiseless channel.
  if (std::isinf(c.channel.snr_db) && c.channel.snr_db > 0) {
    j["snr_db"] = nullptr;
  } else {
    j["snr_db"] = c.channel.snr_db;
  }
  return j;
}

/// Missing keys keep their defaults; unknown keys are rejected.
[[nodiscard]] inline RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("config: top level must be a JSON object");
  static const char* const known[] = {"K",     "M",     "pulse", "alpha",  "delta",  "rx",
                                      "arch",  "domain", "sparse", "k_on", "m_on",   "n_cp",
                                      "n_cs",  "taps",  "snr_db", "seed",  "blocks", "L_max",
                                      "N_max", "eps_sing"};
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char* k) { return key == k; }) == std::end(known)) {
      throw InvalidArgument("config: unknown key '" + key + "'");
    }
  }
  RunConfig c;
  try {
    if (j.contains("K")) c.K = j.at("K").get<std::size_t>();
    if (j.contains("M")) c.M = j.at("M").get<std::size_t>();
    if (j.contains("pulse")) c.pulse = detail::parse_enum(j, "pulse", &parse_pulse_kind);
    if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
    if (j.contains("delta")) c.delta = j.at("delta").get<double>();
    if (j.contains("rx")) c.rx = detail::parse_enum(j, "rx", &parse_rx_kind);
    if (j.contains("arch")) c.arch = detail::parse_enum(j, "arch", &parse_modem_arch);
    if (j.contains("domain")) c.domain = detail::parse_enum(j, "domain", &parse_pairing);
    if (j.contains("sparse")) c.sparse = j.at("sparse").get<bool>();
    if (j.contains("k_on")) c.k_on = j.at("k_on").get<std::vector<std::size_t>>();
    if (j.contains("m_on")) c.m_on = j.at("m_on").get<std::vector<std::size_t>>();
    if (j.contains("n_cp")) c.n_cp = j.at("n_cp").get<std::size_t>();
    if (j.contains("n_cs")) c.n_cs = j.at("n_cs").get<std::size_t>();
    if (j.contains("taps")) {
      c.channel.taps.clear();
      for (const auto& t : j.at("taps")) {
        if (t.is_number()) {
          c.channel.taps.emplace_back(t.get<double>(), 0.0);
        } else if (t.is_array() && t.size() == 2) {
          c.channel.taps.emplace_back(t[0].get<double>(), t[1].get<double>());
        } else {
          throw InvalidArgument("config: taps entries must be numbers or [re, im] pairs");
        }
      }
    }
    if (j.contains("snr_db")) {
      const auto& s = j.at("snr_db");
      c.channel.snr_db = s.is_null() ? std::numeric_limits<double>::infinity() : s.get<double>();
    }
    if (j.contains("seed")) c.channel.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("blocks")) c.blocks = j.at("blocks").get<std::size_t>();
    if (j.contains("L_max")) c.l_max = j.at("L_max").get<std::size_t>();
    if (j.contains("N_max")) c.n_max = j.at("N_max").get<std::size_t>();
    if (j.contains("eps_sing")) c.eps_sing = j.at("eps_sing").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

[[nodiscard]] inline RunConfig parse_config(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  return config_from_json(j);
}

[[nodiscard]] inline std::string emit_config(const RunConfig& c) { return to_json(c).dump(2); }

}  // namespace gfdm
