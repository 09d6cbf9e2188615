#pragma once

// Closed-form complexity, latency and resource model of the modem
// architectures, plus reconciliation against counted runs.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gfdm/errors.hpp"
#include "gfdm/numerics.hpp"

namespace gfdm {

/// FFT core processing cycles per transform size and multiplier latency.
struct CostModel {
  std::map<std::size_t, std::int64_t> p_cycles{{8, 57},    {16, 110},  {32, 126},
                                               {64, 177},  {128, 241}, {256, 387},
                                               {512, 643}, {1024, 1170}, {2048, 2194}};
  std::int64_t t_mul = 12;

  [[nodiscard]] std::int64_t p(std::size_t n) const {
    const auto it = p_cycles.find(n);
    if (it == p_cycles.end()) {
      throw MissingCostEntry("no FFT cycle count for size " + std::to_string(n));
    }
    return it->second;
  }
};

enum class ArchKind {
  FFT_TD_FD,
  FFT_TD_TD,
  FFT_FD_FD,
  DIR_TD_FD,
  DIR_TD_TD,
  DIR_FD_FD,
  DIR_FD_FD_SPARSE,
};

inline constexpr ArchKind kAllArchKinds[] = {
    ArchKind::FFT_TD_FD, ArchKind::FFT_TD_TD, ArchKind::FFT_FD_FD,        ArchKind::DIR_TD_FD,
    ArchKind::DIR_TD_TD, ArchKind::DIR_FD_FD, ArchKind::DIR_FD_FD_SPARSE,
};

inline const char* to_string(ArchKind k) {
  switch (k) {
    case ArchKind::FFT_TD_FD: return "FFT_TD_FD";
    case ArchKind::FFT_TD_TD: return "FFT_TD_TD";
    case ArchKind::FFT_FD_FD: return "FFT_FD_FD";
    case ArchKind::DIR_TD_FD: return "DIR_TD_FD";
    case ArchKind::DIR_TD_TD: return "DIR_TD_TD";
    case ArchKind::DIR_FD_FD: return "DIR_FD_FD";
    case ArchKind::DIR_FD_FD_SPARSE: return "DIR_FD_FD_SPARSE";
  }
  return "?";
}

inline std::optional<ArchKind> parse_arch_kind(std::string_view s) {
  for (auto k : kAllArchKinds) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

namespace detail {

inline void require_pow2_dims(std::size_t K, std::size_t M, const char* what) {
  if (!is_power_of_two(K) || !is_power_of_two(M)) {
    throw InvalidArgument(std::string(what) + ": K and M must be powers of two");
  }
}

}  // namespace detail

/// Complex multiplications per block for modulation plus FD-equalized
/// demodulation, with every n-point transform charged (n/2) log2 n.
[[nodiscard]] inline std::int64_t cm_count(ArchKind kind, std::size_t K, std::size_t M,
                                           std::optional<std::size_t> L = std::nullopt) {
  detail::require_pow2_dims(K, M, "cm_count");
  const auto k = static_cast<std::int64_t>(K);
  const auto m = static_cast<std::int64_t>(M);
  const std::int64_t n = k * m;
  const auto lk = static_cast<std::int64_t>(log2_exact(K));
  const auto lm = static_cast<std::int64_t>(log2_exact(M));
  const std::int64_t ln = lk + lm;
  switch (kind) {
    case ArchKind::FFT_TD_FD: return 2 * n * ln + 2 * n;
    case ArchKind::FFT_TD_TD: return 2 * n * ln + n * lm + 2 * n;
    case ArchKind::FFT_FD_FD: return 2 * n * ln + n * lk + 2 * n;
    case ArchKind::DIR_TD_FD: return n * ln + (k + m) * n;
    case ArchKind::DIR_TD_TD: return n * ln + n * lk + 2 * m * n;
    case ArchKind::DIR_FD_FD: return n * ln + n * lm + 2 * k * n;
    case ArchKind::DIR_FD_FD_SPARSE:
      if (!L) throw InvalidArgument("cm_count: DIR_FD_FD_SPARSE needs the overlap L");
      if (*L == 0 || *L > K) throw InvalidArgument("cm_count: overlap L must lie in [1, K]");
      return n * ln + n * lm + 2 * static_cast<std::int64_t>(*L) * n;
  }
  throw InvalidArgument("cm_count: invalid architecture");
}

/// Block latency in cycles for the three pipelined architectures.
[[nodiscard]] inline std::int64_t latency(ArchKind kind, std::size_t K, std::size_t M,
                                          const CostModel& cost = {}) {
  detail::require_pow2_dims(K, M, "latency");
  const auto k = static_cast<std::int64_t>(K);
  const auto m = static_cast<std::int64_t>(M);
  const std::int64_t n = k * m;
  const std::int64_t pn = cost.p(K * M);
  const std::int64_t tm = cost.t_mul;
  switch (kind) {
    case ArchKind::FFT_TD_FD:
      return 6 * n + 3 * (k + m) + pn + 3 * (cost.p(K) + cost.p(M)) + 2 * tm;
    case ArchKind::DIR_TD_TD:
      return 5 * n + 2 * k + 2 * pn + 2 * cost.p(K) + 2 * tm;
    case ArchKind::DIR_FD_FD:
      return 5 * n + 2 * m + 2 * pn + 2 * cost.p(M) + 2 * tm;
    default:
      throw InvalidArgument(std::string("latency: no latency model for ") + to_string(kind));
  }
}

/// Extra cycles of the FFT-based modem over the direct TD modem.
[[nodiscard]] inline std::int64_t latency_delta(std::size_t K, std::size_t M,
                                                const CostModel& cost = {}) {
  detail::require_pow2_dims(K, M, "latency_delta");
  const auto k = static_cast<std::int64_t>(K);
  const auto m = static_cast<std::int64_t>(M);
  return k * m + k + 3 * m + cost.p(K) + 3 * cost.p(M) - cost.p(K * M);
}

/// Rounds half away from zero to one decimal.
[[nodiscard]] inline double round1(double v) { return std::round(v * 10.0) / 10.0; }

/// 100 * delta / T_direct_td, unrounded.
[[nodiscard]] inline double latency_increase_pct(std::size_t K, std::size_t M,
                                                 const CostModel& cost = {}) {
  return 100.0 * static_cast<double>(latency_delta(K, M, cost)) /
         static_cast<double>(latency(ArchKind::DIR_TD_TD, K, M, cost));
}

enum class ResourceKind { FFT_BASED, DIRECT };

struct ResourceCount {
  int fft_cores = 0;
  int multipliers = 0;
  int rw_rams = 0;
  int r_or_w_rams = 0;

  friend bool operator==(const ResourceCount&, const ResourceCount&) = default;
};

[[nodiscard]] inline ResourceCount resources(ResourceKind kind, int l_max = 1) {
  if (kind == ResourceKind::FFT_BASED) return {7, 2, 4, 2};
  if (l_max < 1) throw InvalidArgument("resources: L_max must be at least 1");
  return {4, 2 * l_max, 2 * l_max, 2 * l_max};
}

/// Multiplications observed in one named processing step.
struct StageCount {
  std::string stage;
  std::uint64_t count = 0;
};

using Trace = std::vector<StageCount>;

[[nodiscard]] inline std::uint64_t trace_total(const Trace& t) {
  std::uint64_t s = 0;
  for (const auto& st : t) s += st.count;
  return s;
}

struct ReconcileReport {
  ArchKind kind = ArchKind::FFT_TD_FD;
  std::size_t K = 0;
  std::size_t M = 0;
  std::uint64_t measured = 0;
  std::int64_t expected = 0;
  bool pass = false;
  Trace stages;

  [[nodiscard]] std::string to_text() const {
    std::ostringstream os;
    os << to_string(kind) << " K=" << K << " M=" << M << " measured=" << measured
       << " formula=" << expected << (pass ? " OK" : " MISMATCH");
    if (!pass) {
      for (const auto& s : stages) os << "\n  " << s.stage << ": " << s.count;
    }
    return os.str();
  }
};

[[nodiscard]] inline ReconcileReport reconcile(ArchKind kind, std::size_t K, std::size_t M,
                                               const Trace& trace,
                                               std::optional<std::size_t> L = std::nullopt) {
  ReconcileReport r;
  r.kind = kind;
  r.K = K;
  r.M = M;
  r.measured = trace_total(trace);
  r.expected = cm_count(kind, K, M, L);
  r.pass = r.expected >= 0 && r.measured == static_cast<std::uint64_t>(r.expected);
  r.stages = trace;
  return r;
}

/// One line of the analysis table. Latency fields are empty for kinds
/// without a latency model or when the cost table lacks a size.
struct AnalysisRow {
  ArchKind kind = ArchKind::FFT_TD_FD;
  std::size_t K = 0;
  std::size_t M = 0;
  std::optional<std::int64_t> cm;
  std::optional<std::int64_t> latency;
  std::optional<std::int64_t> delta;
  std::optional<double> pct;
  std::string note;
};

[[nodiscard]] inline AnalysisRow analyze_row(ArchKind kind, std::size_t K, std::size_t M,
                                             std::optional<std::size_t> L,
                                             const CostModel& cost = {}) {
  AnalysisRow row{kind, K, M, {}, {}, {}, {}, {}};
  try {
    row.cm = cm_count(kind, K, M, L);
  } catch (const InvalidArgument& e) {
    row.note = e.what();
    return row;
  }
  const bool has_latency = kind == ArchKind::FFT_TD_FD || kind == ArchKind::DIR_TD_TD ||
                           kind == ArchKind::DIR_FD_FD;
  if (!has_latency) return row;
  try {
    row.latency = latency(kind, K, M, cost);
    if (kind == ArchKind::DIR_TD_TD) {
      row.delta = latency_delta(K, M, cost);
      row.pct = round1(latency_increase_pct(K, M, cost));
    }
  } catch (const MissingCostEntry&) {
    row.latency.reset();
    row.delta.reset();
    row.pct.reset();
    row.note = "missing cost entry";
  }
  return row;
}

inline constexpr std::string_view kAnalysisCsvHeader = "kind,K,M,N,cm,latency,delta,pct,note";

inline void write_csv_row(std::ostream& os, const AnalysisRow& r) {
  auto opt = [&](const auto& v) {
    if (v) os << *v;
  };
  os << to_string(r.kind) << ',' << r.K << ',' << r.M << ',' << r.K * r.M << ',';
  opt(r.cm);
  os << ',';
  opt(r.latency);
  os << ',';
  opt(r.delta);
  os << ',';
  if (r.pct) {
    std::ostringstream p;
    p.setf(std::ios::fixed);
    p.precision(1);
    p << *r.pct;
    os << p.str();
  }
  os << ',' << r.note << '\n';
}

inline void write_text_row(std::ostream& os, const AnalysisRow& r) {
  os << to_string(r.kind) << "  K=" << r.K << " M=" << r.M << " N=" << r.K * r.M;
  if (r.cm) os << "  CM=" << *r.cm;
  if (r.latency) os << "  T=" << *r.latency;
  if (r.delta) os << "  delta=" << *r.delta;
  if (r.pct) {
    std::ostringstream p;
    p.setf(std::ios::fixed);
    p.precision(1);
    p << *r.pct;
    os << "  +" << p.str() << '%';
  }
  if (!r.note.empty()) os << "  (" << r.note << ')';
  os << '\n';
}

}  // namespace gfdm
