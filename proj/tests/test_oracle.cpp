#include <gtest/gtest.h>

#include "test_support.hpp"

namespace gfdm {
namespace {

using test::rel_err;
using test::Rng;

TEST(BuildMatrix, OfdmIsScaledInverseDft) {
  const std::size_t N = 8;
  const PrototypePulse g = make_prototype(PulseKind::RectTime, GfdmParams(N, 1));
  const ModMatrix A = build_matrix(g);
  for (std::size_t k = 0; k < N; ++k) {
    ComplexVec e(N);
    e[k] = 1.0;
    ComplexVec ref = test::naive_dft(e, true);
    scale(ref, 1.0 / std::sqrt(static_cast<double>(N)));
    EXPECT_LT(max_abs_diff(A.A.column(k), ref), 1e-14);
  }
}

TEST(BuildMatrix, SingleCarrierImpulseIsIdentity) {
  const PrototypePulse g = make_prototype(PulseKind::Dirichlet, GfdmParams(1, 8));
  const ModMatrix A = build_matrix(g);
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c)
      EXPECT_NEAR(std::abs(A.A(r, c) - cplx(r == c ? 1.0 : 0.0)), 0.0, 1e-14);
}

TEST(BuildMatrix, UnitColumnNorms) {
  for (const auto& c : test::standard_pulses()) {
    const ModMatrix A = build_matrix(test::make(c, 8, 4));
    for (std::size_t j = 0; j < 32; ++j) EXPECT_NEAR(norm2(A.A.column(j)), 1.0, 1e-12) << c.name;
  }
}

TEST(BuildMatrix, DirichletIsOrthonormal) {
  const ModMatrix A = build_matrix(make_prototype(PulseKind::Dirichlet, GfdmParams(8, 4)));
  for (std::size_t i = 0; i < 32; ++i)
    for (std::size_t j = 0; j < 32; ++j) {
      cplx s{};
      for (std::size_t n = 0; n < 32; ++n) s += std::conj(A.A(n, i)) * A.A(n, j);
      EXPECT_NEAR(std::abs(s - cplx(i == j ? 1.0 : 0.0)), 0.0, 1e-8);
    }
}

TEST(BuildMatrix, RejectsOversizedBlock) {
  EXPECT_THROW((void)build_gabor_matrix(ComplexVec(8192), 64, 128, 64, 128), InvalidArgument);
}

TEST(OracleDemod, ZeroForcingInvertsModulation) {
  Rng rng(61);
  const PrototypePulse g = make_prototype(PulseKind::RaisedCosine, GfdmParams(8, 4), 0.5, 0.5);
  const ModMatrix A = build_matrix(g);
  const ComplexMat D = rng.qpsk_grid(8, 4);
  EXPECT_LT(max_abs_diff(oracle_demod_zf(A, oracle_modulate(A, D)).data(), D.data()), 1e-10);
}

TEST(OracleDemod, OfdmMatchedFilterIsExact) {
  Rng rng(62);
  const ModMatrix A = build_matrix(make_prototype(PulseKind::RectTime, GfdmParams(16, 1)));
  const ComplexMat D = rng.qpsk_grid(16, 1);
  EXPECT_LT(max_abs_diff(oracle_demod_mf(A, oracle_modulate(A, D)).data(), D.data()), 1e-12);
}

TEST(OracleDemod, SingularMatrixDetected) {
  const ModMatrix A = build_matrix(make_prototype(PulseKind::RaisedCosine, GfdmParams(4, 4), 0.0, 0.0));
  EXPECT_THROW((void)oracle_demod_zf(A, ComplexVec(16)), SingularMatrix);
}

TEST(DenseLu, SolvesRandomSystems) {
  Rng rng(63);
  for (int t = 0; t < 5; ++t) {
    const std::size_t n = 4 + rng.index(20);
    const ComplexMat A = rng.mat(n, n);
    const ComplexVec x = rng.vec(n);
    const DenseLu lu(A);
    ASSERT_FALSE(lu.singular());
    EXPECT_LT(rel_err(lu.solve(matvec(A, x)), x), 1e-9);
    EXPECT_LT(rel_err(lu.solve_adjoint(matvec_adjoint(A, x)), x), 1e-9);
  }
}

TEST(Mapping, FullSetsReshape) {
  Rng rng(64);
  const GfdmParams p(4, 8);
  const ComplexVec d = rng.vec(32);
  const ComplexMat D = map_symbols(d, p);
  EXPECT_EQ(D, ComplexMat::unvec(d, 4, 8));
  EXPECT_EQ(demap_symbols(D, p), d);
}

TEST(Mapping, SingleActivePosition) {
  const GfdmParams p(4, 2, {1}, {0});
  const ComplexMat D = map_symbols(ComplexVec{cplx{1.0, 0.0}}, p);
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t m = 0; m < 2; ++m) EXPECT_EQ(D(k, m), cplx(k == 1 && m == 0 ? 1.0 : 0.0));
  EXPECT_THROW((void)map_symbols(ComplexVec(2), p), InvalidArgument);
}

TEST(MappingProperty, RandomSetsRoundTrip) {
  Rng rng(65);
  for (int t = 0; t < 30; ++t) {
    const std::size_t K = std::size_t{1} << rng.index(5);
    const std::size_t M = std::size_t{1} << rng.index(5);
    const GfdmParams p(K, M, rng.subset(K), rng.subset(M));
    const ComplexVec d = rng.vec(p.active_count());
    const ComplexMat D = map_symbols(d, p);
    EXPECT_EQ(demap_symbols(D, p), d);
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t m = 0; m < M; ++m)
        if (!p.is_active(k, m)) { EXPECT_EQ(D(k, m), cplx{}); }
  }
}

TEST(Multipulse, SinglePulseEqualsOracle) {
  Rng rng(66);
  const PrototypePulse g = make_prototype(PulseKind::RaisedCosine, GfdmParams(8, 4), 0.5, 0.5);
  const ComplexMat D = rng.qpsk_grid(8, 4);
  const PulseStream s{g.time, g.params, D};
  EXPECT_LT(rel_err(compose_multipulse(std::span(&s, 1)), oracle_modulate(build_matrix(g), D)), 1e-12);
}

TEST(Multipulse, HalfShiftedPairIsOversampledGabor) {
  Rng rng(67);
  const std::size_t K = 8, M = 4, N = K * M;
  const PrototypePulse g = make_prototype(PulseKind::RaisedCosine, GfdmParams(K, M), 0.5, 0.5);
  const ComplexMat D0 = rng.qpsk_grid(K, M);
  const ComplexMat D1 = rng.qpsk_grid(K, M);
  const std::vector<PulseStream> streams{{g.time, GfdmParams(K, M), D0},
                                         {circular_shift(g.time, K / 2), GfdmParams(K, M), D1}};
  // Merged grid: subsymbol j = 2m + l with shift j*K/2.
  ComplexMat merged(K, 2 * M);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t m = 0; m < M; ++m) {
      merged(k, 2 * m) = D0(k, m);
      merged(k, 2 * m + 1) = D1(k, m);
    }
  const ComplexMat A = build_gabor_matrix(g.time, K, 2 * M, K / 2, M);
  const ComplexVec ref = matvec(A, merged.vec());
  ASSERT_EQ(ref.size(), N);
  EXPECT_LT(rel_err(compose_multipulse(streams), ref), 1e-12);
}

TEST(Multipulse, RestrictsToActiveSets) {
  Rng rng(68);
  const PrototypePulse g = make_prototype(PulseKind::Dirichlet, GfdmParams(4, 4));
  const GfdmParams even(4, 4, {0, 1, 2, 3}, {0, 2});
  const ComplexMat D = rng.qpsk_grid(4, 4);
  const PulseStream s{g.time, even, D};
  EXPECT_LT(rel_err(compose_multipulse(std::span(&s, 1)),
                    oracle_modulate(build_matrix(g), restrict_to_active(D, even))),
            1e-12);
}

TEST(Multipulse, ZeroGridsGiveZero) {
  const PrototypePulse g = make_prototype(PulseKind::Dirichlet, GfdmParams(4, 4));
  const std::vector<PulseStream> s{{g.time, g.params, ComplexMat(4, 4)},
                                   {circular_shift(g.time, 2), g.params, ComplexMat(4, 4)}};
  EXPECT_EQ(max_abs(compose_multipulse(s)), 0.0);
  EXPECT_THROW((void)compose_multipulse(std::span<const PulseStream>{}), InvalidArgument);
}

TEST(Oqam, ThetaPattern) {
  EXPECT_EQ(oqam_theta(0, 0), cplx(0.0, 1.0));
  EXPECT_EQ(oqam_theta(0, 1), cplx(1.0, 0.0));
  EXPECT_EQ(oqam_theta(1, 0), cplx(1.0, 0.0));
  EXPECT_EQ(oqam_theta(1, 1), cplx(0.0, 1.0));
}

TEST(Oqam, RealInputUsesFirstStreamOnly) {
  Rng rng(69);
  const PrototypePulse g = make_prototype(PulseKind::RootRaisedCosine, GfdmParams(8, 4), 0.5, 0.5);
  ComplexMat D(8, 4);
  ComplexMat d0(8, 4);
  for (std::size_t k = 0; k < 8; ++k)
    for (std::size_t m = 0; m < 4; ++m) {
      D(k, m) = rng.uniform();
      d0(k, m) = oqam_theta(0, k) * D(k, m);
    }
  EXPECT_LT(rel_err(fbmc_oqam_modulate(D, g), oracle_modulate(build_matrix(g), d0)), 1e-12);
}

TEST(Oqam, OddSubcarrierCountRejected) {
  const PrototypePulse g = make_prototype(PulseKind::Dirichlet, GfdmParams(1, 8));
  EXPECT_THROW((void)fbmc_oqam_modulate(ComplexMat(1, 8), g), InvalidArgument);
}

}  // namespace
}  // namespace gfdm
