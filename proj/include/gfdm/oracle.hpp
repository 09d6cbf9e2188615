#pragma once

// Naive ground truth: the dense modulation matrix A with
// [A]_{n, k+mK} = g[<n - mK>_N] exp(j2pi n k M / N), matrix-vector
// modulation, MF/ZF demodulation by dense algebra, symbol mapping,
// multi-pulse superposition and FBMC/OQAM generation.
//
// Deliberately O(N^2) (modulation) and O(N^3) (ZF); intended for N <= 4096.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "gfdm/errors.hpp"
#include "gfdm/numerics.hpp"
#include "gfdm/params.hpp"
#include "gfdm/pulses.hpp"

namespace gfdm {

inline constexpr std::size_t kOracleMaxN = 4096;
inline constexpr double kOracleMaxCondition = 1e8;

struct ModMatrix {
  std::size_t K = 0;
  std::size_t M = 0;
  ComplexMat A;  // N x N
};

/// Gabor system with K subcarriers of spacing Q bins and `subsymbols` time
/// shifts of P samples: column k + j*K holds g[<n - jP>] exp(j2pi n k Q/N).
[[nodiscard]] inline ComplexMat build_gabor_matrix(std::span<const cplx> g, std::size_t K,
                                                   std::size_t subsymbols, std::size_t P,
                                                   std::size_t Q) {
  const std::size_t N = g.size();
  if (N == 0 || N > kOracleMaxN) {
    throw InvalidArgument("build_gabor_matrix: N=" + std::to_string(N) + " outside oracle range");
  }
  std::vector<cplx> roots(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(N);
    roots[i] = {std::cos(phi), std::sin(phi)};
  }
  ComplexMat A(N, K * subsymbols);
  for (std::size_t j = 0; j < subsymbols; ++j) {
    const std::size_t shift = (j * P) % N;
    for (std::size_t k = 0; k < K; ++k) {
      const std::size_t col = k + j * K;
      const std::size_t step = (k * Q) % N;
      for (std::size_t n = 0; n < N; ++n) {
        A(n, col) = g[(n + N - shift) % N] * roots[(n * step) % N];
      }
    }
  }
  return A;
}

[[nodiscard]] inline ModMatrix build_matrix(const PrototypePulse& g) {
  const std::size_t K = g.params.K();
  const std::size_t M = g.params.M();
  return {K, M, build_gabor_matrix(g.time, K, M, K, M)};
}

[[nodiscard]] inline ComplexVec matvec(const ComplexMat& A, std::span<const cplx> v) {
  if (A.cols() != v.size()) throw InvalidArgument("matvec: dimension mismatch");
  ComplexVec out(A.rows());
  for (std::size_t r = 0; r < A.rows(); ++r) {
    cplx s{};
    for (std::size_t c = 0; c < A.cols(); ++c) s += A(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

[[nodiscard]] inline ComplexVec matvec_adjoint(const ComplexMat& A, std::span<const cplx> v) {
  if (A.rows() != v.size()) throw InvalidArgument("matvec_adjoint: dimension mismatch");
  ComplexVec out(A.cols());
  for (std::size_t r = 0; r < A.rows(); ++r)
    for (std::size_t c = 0; c < A.cols(); ++c) out[c] += std::conj(A(r, c)) * v[r];
  return out;
}

/// x = A vec(D).
[[nodiscard]] inline ComplexVec oracle_modulate(const ModMatrix& mod, const ComplexMat& D) {
  require_grid_shape(D, mod.K, mod.M, "oracle_modulate");
  return matvec(mod.A, D.vec());
}

/// D^ = unvec(A^H x).
[[nodiscard]] inline ComplexMat oracle_demod_mf(const ModMatrix& mod, std::span<const cplx> x) {
  return ComplexMat::unvec(matvec_adjoint(mod.A, x), mod.K, mod.M);
}

/// LU factorization with partial pivoting, PA = LU.
class DenseLu {
 public:
  explicit DenseLu(ComplexMat a) : lu_(std::move(a)), perm_(lu_.rows()) {
    const std::size_t n = lu_.rows();
    if (lu_.cols() != n) throw InvalidArgument("DenseLu: matrix must be square");
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      double best = std::abs(lu_(k, k));
      for (std::size_t r = k + 1; r < n; ++r) {
        const double v = std::abs(lu_(r, k));
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (best == 0.0) {
        singular_ = true;
        return;
      }
      if (piv != k) {
        for (std::size_t c = 0; c < n; ++c) std::swap(lu_(k, c), lu_(piv, c));
        std::swap(perm_[k], perm_[piv]);
      }
      const cplx inv = 1.0 / lu_(k, k);
      for (std::size_t r = k + 1; r < n; ++r) {
        const cplx f = lu_(r, k) * inv;
        lu_(r, k) = f;
        if (f == cplx{}) continue;
        for (std::size_t c = k + 1; c < n; ++c) lu_(r, c) -= f * lu_(k, c);
      }
    }
  }

  [[nodiscard]] bool singular() const noexcept { return singular_; }

  /// Solves A z = b.
  [[nodiscard]] ComplexVec solve(std::span<const cplx> b) const {
    const std::size_t n = lu_.rows();
    ComplexVec z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) z[i] -= lu_(i, j) * z[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) z[i] -= lu_(i, j) * z[j];
      z[i] /= lu_(i, i);
    }
    return z;
  }

  /// Solves A^H z = b.
  [[nodiscard]] ComplexVec solve_adjoint(std::span<const cplx> b) const {
    const std::size_t n = lu_.rows();
    ComplexVec w(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {  // U^H w = b
      for (std::size_t j = 0; j < i; ++j) w[i] -= std::conj(lu_(j, i)) * w[j];
      w[i] /= std::conj(lu_(i, i));
    }
    for (std::size_t i = n; i-- > 0;)  // L^H t = w
      for (std::size_t j = i + 1; j < n; ++j) w[i] -= std::conj(lu_(j, i)) * w[j];
    ComplexVec z(n);
    for (std::size_t i = 0; i < n; ++i) z[perm_[i]] = w[i];
    return z;
  }

 private:
  ComplexMat lu_;
  std::vector<std::size_t> perm_;
  bool singular_ = false;
};

namespace detail {

inline ComplexVec start_vector(std::size_t n) {
  ComplexVec v(n);
  std::uint64_t s = 0x9E3779B97F4A7C15ULL;
  for (auto& z : v) {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    const double a = static_cast<double>((s * 0x2545F4914F6CDD1DULL) >> 11) * 0x1.0p-53;
    z = {a - 0.5, 0.25 - a * a};
  }
  return v;
}

inline double normalize(ComplexVec& v) {
  const double n = std::sqrt(norm2(v));
  if (n > 0.0) scale(v, 1.0 / n);
  return n;
}

}  // namespace detail

/// 2-norm condition number estimate from power iteration on A^H A
/// (largest eigenvalue) and inverse iteration through the LU factors
/// (smallest eigenvalue).
[[nodiscard]] inline double estimate_condition(const ComplexMat& A, const DenseLu& lu,
                                               int iterations = 60) {
  if (lu.singular()) return std::numeric_limits<double>::infinity();
  ComplexVec v = detail::start_vector(A.cols());
  detail::normalize(v);
  double lmax = 0.0;
  for (int it = 0; it < iterations; ++it) {
    v = matvec_adjoint(A, matvec(A, v));
    lmax = detail::normalize(v);
  }
  ComplexVec u = detail::start_vector(A.cols());
  detail::normalize(u);
  double inv_lmin = 0.0;
  for (int it = 0; it < iterations; ++it) {
    u = lu.solve(lu.solve_adjoint(u));
    inv_lmin = detail::normalize(u);
    if (!std::isfinite(inv_lmin)) return std::numeric_limits<double>::infinity();
  }
  return std::sqrt(lmax * inv_lmin);
}

/// D^ = unvec(A^{-1} x) by dense LU; refuses numerically singular A.
[[nodiscard]] inline ComplexMat oracle_demod_zf(const ModMatrix& mod, std::span<const cplx> x) {
  const DenseLu lu(mod.A);
  const double cond = estimate_condition(mod.A, lu);
  if (!(cond < kOracleMaxCondition)) {
    throw SingularMatrix("oracle_demod_zf: modulation matrix condition estimate " +
                         std::to_string(cond) + " exceeds 1e8");
  }
  return ComplexMat::unvec(lu.solve(x), mod.K, mod.M);
}

/// Places data symbols on the active grid positions, k fastest.
[[nodiscard]] inline ComplexMat map_symbols(std::span<const cplx> d_on, const GfdmParams& params) {
  if (d_on.size() != params.active_count()) {
    throw InvalidArgument("map_symbols: got " + std::to_string(d_on.size()) +
                          " symbols for " + std::to_string(params.active_count()) +
                          " active positions");
  }
  ComplexMat D(params.K(), params.M());
  std::size_t i = 0;
  for (auto m : params.m_on())
    for (auto k : params.k_on()) D(k, m) = d_on[i++];
  return D;
}

[[nodiscard]] inline ComplexVec demap_symbols(const ComplexMat& D, const GfdmParams& params) {
  require_grid_shape(D, params.K(), params.M(), "demap_symbols");
  ComplexVec out;
  out.reserve(params.active_count());
  for (auto m : params.m_on())
    for (auto k : params.k_on()) out.push_back(D(k, m));
  return out;
}

/// Zeroes every grid entry outside the active sets.
[[nodiscard]] inline ComplexMat restrict_to_active(const ComplexMat& D, const GfdmParams& params) {
  return map_symbols(demap_symbols(D, params), params);
}

/// g[<n - s>_N].
[[nodiscard]] inline ComplexVec circular_shift(std::span<const cplx> g, std::size_t s) {
  const std::size_t N = g.size();
  ComplexVec out(N);
  for (std::size_t n = 0; n < N; ++n) out[n] = g[(n + N - s % N) % N];
  return out;
}

/// One GFDM-based stream of a multi-pulse block.
struct PulseStream {
  ComplexVec g;       // time-domain prototype g^(l)
  GfdmParams sets;    // K, M and the active sets of this stream
  ComplexMat D;       // K x M data grid
};

/// x[n] = sum_l x^(l)[n], each stream modulated on its own active sets.
[[nodiscard]] inline ComplexVec compose_multipulse(std::span<const PulseStream> streams) {
  if (streams.empty()) throw InvalidArgument("compose_multipulse: no streams");
  const std::size_t N = streams.front().sets.N();
  ComplexVec x(N);
  for (const auto& s : streams) {
    if (s.sets.N() != N || s.g.size() != N) {
      throw InvalidArgument("compose_multipulse: all streams must share N");
    }
    const ModMatrix mod{s.sets.K(), s.sets.M(),
                        build_gabor_matrix(s.g, s.sets.K(), s.sets.M(), s.sets.K(), s.sets.M())};
    const ComplexVec part = oracle_modulate(mod, restrict_to_active(s.D, s.sets));
    for (std::size_t n = 0; n < N; ++n) x[n] += part[n];
  }
  return x;
}

/// OQAM staggering factors: stream 0 carries j on even subcarriers, stream 1
/// on odd ones.
[[nodiscard]] inline cplx oqam_theta(int stream, std::size_t k) {
  const bool even = k % 2 == 0;
  const bool imag = stream == 0 ? even : !even;
  return imag ? cplx{0.0, 1.0} : cplx{1.0, 0.0};
}

/// FBMC as two GFDM cores: real parts on g, imaginary parts on g shifted by
/// half a subsymbol (K/2 samples).
[[nodiscard]] inline ComplexVec fbmc_oqam_modulate(const ComplexMat& D_qam,
                                                   const PrototypePulse& g) {
  const GfdmParams& p = g.params;
  const std::size_t K = p.K();
  const std::size_t M = p.M();
  if (K % 2 != 0) throw InvalidArgument("fbmc_oqam_modulate: K must be even");
  require_grid_shape(D_qam, K, M, "fbmc_oqam_modulate");
  ComplexMat d0(K, M);
  ComplexMat d1(K, M);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t m = 0; m < M; ++m) {
      if (!p.is_active(k, m)) continue;
      d0(k, m) = oqam_theta(0, k) * D_qam(k, m).real();
      d1(k, m) = oqam_theta(1, k) * D_qam(k, m).imag();
    }
  }
  const ComplexMat A0 = build_gabor_matrix(g.time, K, M, K, M);
  const ComplexMat A1 = build_gabor_matrix(circular_shift(g.time, K / 2), K, M, K, M);
  ComplexVec x = matvec(A0, d0.vec());
  const ComplexVec x1 = matvec(A1, d1.vec());
  for (std::size_t n = 0; n < x.size(); ++n) x[n] += x1[n];
  return x;
}

}  // namespace gfdm
