#include "dense_oracle.hpp"
#include "sixvertex/vertex_ops.hpp"

#include <gtest/gtest.h>

using namespace sixvertex;

namespace {

double max_offblock(const Matrix& dense, int M) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < dense.rows(); ++i)
    for (Eigen::Index j = 0; j < dense.cols(); ++j)
      if (std::popcount(std::uint32_t(i)) != std::popcount(std::uint32_t(j)))
        worst = std::max(worst, std::abs(dense(i, j)));
  (void)M;
  return worst;
}

}  // namespace

TEST(BuildR, TrivialAuxiliarySpace) {
  const auto root = make_root_of_unity(5, 2);
  const cplx z{0.6, -1.2};
  const auto v = build_R_fused(root, 0, z);
  ASSERT_EQ(v.aux_dim, 1);
  EXPECT_NEAR(std::abs(v.block(0, 0)(0, 0) - (z * root.q - 1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v.block(1, 1)(0, 0) - (z * root.q - 1.0)), 0.0, 1e-15);
  EXPECT_EQ(v.block(0, 1)(0, 0), cplx(0.0));
  EXPECT_EQ(v.block(1, 0)(0, 0), cplx(0.0));
}

TEST(BuildR, LowerLeftBlockAndZeroSpectralParameter) {
  const auto root = make_root_of_unity(7, 1);
  const auto rep = eval_rep(root, 1);
  const auto v = build_R_fused(root, 1, cplx(0.4, 0.3));
  EXPECT_LT(relative_residual(v.block(1, 0), (root.q - 1.0 / root.q) * rep.e * rep.k_half_inv), 1e-15);
  EXPECT_EQ(build_R_fused(root, 3, 0.0).block(0, 1).norm(), 0.0);
}

TEST(BuildL, LowerTriangularAtZero) {
  const auto root = make_root_of_unity(8, 3);
  const auto v = build_L(root, Sign::plus, 0.0, 1.0, cplx(0.3, 0.2));
  EXPECT_EQ(v.block(0, 1).norm(), 0.0);
}

TEST(BuildL, MinusIsSpinFlip) {
  const auto root = make_root_of_unity(6, 1);
  const cplx z{0.2, 0.9}, r{1.1, 0.2}, s{-0.4, 0.3};
  const auto plus = build_L(root, Sign::plus, z, r, s);
  const auto minus = build_L(root, Sign::minus, z, r, s);
  Matrix flip = kron(Matrix::Identity(plus.aux_dim, plus.aux_dim), oracle::elementary(0, 1) + oracle::elementary(1, 0));
  EXPECT_LT(relative_residual(minus.to_dense(), flip * plus.to_dense() * flip), 1e-15);
}

TEST(BuildL, GammaBlockHandEvaluationAtOrderFour) {
  // q = i, s = 0, r = 1: e_1|1> = (1 - q^2)/(q - q^-1)^2 |0> = -1/2 |0>,
  // q^{-h_1/2}|1> = q |1>, so gamma(0,1) = (2i)(-1/2)(i) = 1.
  const auto root = make_root_of_unity(4, 1);
  const auto v = build_L(root, Sign::plus, cplx(0.7, 0.1), 1.0, 0.0);
  const Matrix& gamma = v.block(1, 0);
  EXPECT_NEAR(std::abs(gamma(0, 1) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(gamma(0, 0), cplx(0.0));
  EXPECT_EQ(gamma(1, 0), cplx(0.0));
  EXPECT_EQ(gamma(1, 1), cplx(0.0));
}

TEST(TraceMonodromy, TrivialAuxiliaryGivesPower) {
  const auto root = make_root_of_unity(6, 1);
  const cplx z{0.3, 0.8};
  for (int M = 1; M <= 5; ++M) {
    const auto t = trace_monodromy(build_R_fused(root, 0, z), M);
    EXPECT_LT(relative_residual(t, SectorOperator::identity(M, ipow(z * root.q - 1.0, M))), 1e-14);
  }
}

TEST(TraceMonodromy, SpinHalfAuxiliarySingleSite) {
  const auto root = make_root_of_unity(5, 1);
  const cplx w{1.3, -0.2};
  const auto t = trace_monodromy(build_R_fused(root, 1, w), 1);
  const cplx expected = (w * root.q - 1.0) * (root.q_half + 1.0 / root.q_half);
  EXPECT_LT(relative_residual(t, SectorOperator::identity(1, expected)), 1e-15);
}

TEST(TraceMonodromy, NoLeakageBetweenSectors) {
  const auto root = make_root_of_unity(7, 2);
  for (int M = 1; M <= 5; ++M) {
    EXPECT_EQ(max_offblock(trace_monodromy_dense(build_L(root, Sign::plus, cplx(0.5, 0.7), 1.3, cplx(0.2, -0.6)), M), M), 0.0);
    EXPECT_EQ(max_offblock(trace_monodromy_dense(build_R_fused(root, 3, cplx(0.5, 0.7)), M), M), 0.0);
  }
}

TEST(TraceMonodromy, OnlySectorAndGuard) {
  const auto root = make_root_of_unity(4, 1);
  TraceOptions opt;
  opt.only_sector = 1;
  const auto t = trace_monodromy(build_R_fused(root, 1, 0.5), 3, opt);
  EXPECT_EQ(t.blocks().size(), 1u);
  EXPECT_EQ(t.block(1).rows(), 3);
  opt.only_sector = 2;
  EXPECT_THROW(trace_monodromy(build_R_fused(root, 1, 0.5), 3, opt), DomainError);
  TraceOptions small;
  small.guard_entries = 100;
  EXPECT_THROW(trace_monodromy(build_R_fused(root, 2, 0.5), 4, small), ResourceGuardError);
  small.guard_override = true;
  EXPECT_NO_THROW(trace_monodromy(build_R_fused(root, 2, 0.5), 4, small));
}

TEST(FusionMatrix, QuantumDeterminant) {
  for (int N : {3, 4, 7}) {
    const auto root = make_root_of_unity(N, 1);
    const cplx z{-0.4, 1.1};
    for (int M = 1; M <= 4; ++M)
      EXPECT_LT(relative_residual(fusion_matrix(root, 1, z, M), quantum_determinant(root, z, M)), 1e-13);
  }
}

TEST(FusionMatrix, SingleColumnTransferMatrix) {
  const auto root = make_root_of_unity(4, 1);
  const cplx z{0.8, 0.3};
  const cplx expected = (z * root.q - 1.0) * (root.q_half + 1.0 / root.q_half);
  EXPECT_LT(relative_residual(transfer_matrix(root, z, 1), SectorOperator::identity(1, expected)), 1e-15);
}

TEST(FusionMatrix, ZeroFusionIsZero) {
  EXPECT_EQ(fusion_matrix(make_root_of_unity(5, 1), 0, 0.7, 3).norm(), 0.0);
  EXPECT_THROW(fusion_matrix(make_root_of_unity(5, 1), -1, 0.7, 3), DomainError);
}

TEST(FusionMatrix, EigenvaluesMatchDenseOracle) {
  const auto root = make_root_of_unity(4, 1);
  const cplx z{0.9, -0.5};
  const auto t = fusion_matrix(root, 2, z, 2);
  const Matrix dense = oracle::dense_monodromy_trace(build_R_fused(root, 1, z * root.power(2)), 2);
  Eigen::ComplexEigenSolver<Matrix> a(t.to_dense()), b(dense);
  std::vector<cplx> ea(a.eigenvalues().data(), a.eigenvalues().data() + 4);
  std::vector<cplx> eb(b.eigenvalues().data(), b.eigenvalues().data() + 4);
  for (const cplx& x : ea) {
    double best = 1e9;
    for (const cplx& y : eb) best = std::min(best, std::abs(x - y));
    EXPECT_LT(best, 1e-10);
  }
}

TEST(OracleEquivalence, SectorBlocksMatchDenseKronecker) {
  for (int N : {3, 4, 6, 8}) {
    const auto root = make_root_of_unity(N, 1);
    const cplx z{0.7, 0.4};
    for (int M = 1; M <= 4; ++M) {
      for (int spin = 0; spin <= 2; ++spin) {
        const auto v = build_R_fused(root, spin, z);
        EXPECT_LT((trace_monodromy(v, M).to_dense() - oracle::dense_monodromy_trace(v, M)).cwiseAbs().maxCoeff(), 1e-12);
      }
      for (Sign sign : {Sign::plus, Sign::minus}) {
        const auto v = build_L(root, sign, z, cplx(1.2, -0.3), cplx(0.4, 0.5));
        EXPECT_LT((trace_monodromy(v, M).to_dense() - oracle::dense_monodromy_trace(v, M)).cwiseAbs().maxCoeff(), 1e-12);
      }
    }
  }
}

TEST(AuxMatrix, NormalizationAtZero) {
  for (int N : {3, 4, 5, 6, 8}) {
    const auto root = make_root_of_unity(N, 1);
    for (int M = 1; M <= 4; ++M) {
      const auto q0 = aux_matrix(root, 0.0, cplx(0.6, -0.2), M);
      const auto expected = SectorOperator::sz_function(M, [&](TwoSz k) {
        cplx sum = 0.0;
        for (int l = 0; l < root.N_prime; ++l) sum += root.half_power(2L * l * k);
        return ipow(-1.0, M) * sum;
      });
      EXPECT_LT(relative_residual(q0, expected), 1e-14);
    }
  }
}

TEST(AuxMatrix, OrderFourThreeColumnsSpinHalf) {
  const auto root = make_root_of_unity(4, 1);
  const auto q0 = aux_matrix(root, 0.0, cplx(2.0, 1.0), 3);
  EXPECT_LT(relative_residual(q0.block(1), -(cplx(1.0, 1.0)) * Matrix::Identity(3, 3)), 1e-15);
}

TEST(AuxMatrix, MinusIsSpinReversedPlus) {
  const auto root = make_root_of_unity(5, 1);
  for (int M = 1; M <= 5; ++M) {
    const auto plus = aux_limit(root, Sign::plus, cplx(0.6, 0.6), M);
    const auto minus = aux_limit(root, Sign::minus, cplx(0.6, 0.6), M);
    EXPECT_LT(relative_residual(minus.spin_reversed(), plus), 1e-14);
  }
}

TEST(AuxMatrix, ParameterRExtraction) {
  const auto root = make_root_of_unity(7, 3);
  const cplx z{0.4, -0.9}, r{1.4, 0.6}, s{0.3, 0.3};
  for (int M = 1; M <= 5; ++M) {
    const auto lhs = aux_matrix(root, z, r, s, Sign::plus, M);
    const cplx r_half = std::sqrt(r);
    const auto rhs = aux_matrix(root, z, s, M).scaled_by_sz([&](TwoSz k) { return ipow(r_half, -k); });
    EXPECT_LT(relative_residual(lhs, rhs), 1e-12);
  }
}

TEST(AuxMatrix, SZeroLimitIgnoresInputs) {
  const auto root = make_root_of_unity(6, 1);
  const auto a = aux_matrix(root, cplx(0.3, 0.1), cplx(9.0, 1.0), cplx(7.0, 2.0), Sign::plus, 3, true);
  const auto b = aux_matrix(root, cplx(0.3, 0.1), 1.0, 0.0, Sign::plus, 3);
  EXPECT_EQ(relative_residual(a, b), 0.0);
}

TEST(TransferMatrix, TranspositionSymmetry) {
  for (int N : {3, 4, 5, 6, 8}) {
    const auto root = make_root_of_unity(N, 1);
    const cplx z{0.9, 0.35};
    for (int M = 1; M <= 5; ++M) {
      const auto lhs = transfer_matrix(root, z, M);
      const auto rhs = transfer_matrix(root.inverse(), z * root.power(2), M).transpose();
      EXPECT_LT(relative_residual(lhs, rhs), 1e-12);
    }
  }
}

TEST(SymmetryOps, SmallChains) {
  const auto two = symmetry_ops(2);
  EXPECT_EQ(two.sz.block(2)(0, 0), cplx(1.0));
  EXPECT_EQ(two.sz.block(0), Matrix::Zero(2, 2));
  EXPECT_EQ(two.sz.block(-2)(0, 0), cplx(-1.0));
  const auto one = symmetry_ops(1);
  Matrix sx(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  EXPECT_EQ(one.reversal_dense(), sx);
  EXPECT_EQ(one.parity.to_dense(), sz);
  for (int M = 1; M <= 5; ++M) {
    const auto ops = symmetry_ops(M);
    const Matrix r = ops.reversal_dense();
    EXPECT_EQ(r * r, Matrix::Identity(r.rows(), r.cols()));
    const Matrix p = ops.parity.to_dense();
    EXPECT_EQ(p * p, Matrix::Identity(p.rows(), p.cols()));
    const auto t = transfer_matrix(make_root_of_unity(5, 2), cplx(0.2, 0.4), M);
    EXPECT_LT((ops.reverse(t).to_dense() - r * t.to_dense() * r).norm(), 1e-13);
  }
  EXPECT_THROW(symmetry_ops(0), DomainError);
}

TEST(PartitionFunction, Examples) {
  const auto root = make_root_of_unity(4, 1);
  const cplx z{0.5, 0.5};
  const cplx single = (z * root.q - 1.0) * (root.q_half + 1.0 / root.q_half);
  EXPECT_LT(relative_residual(partition_function(root, z, 1, 1), 2.0 * single), 1e-14);
  EXPECT_EQ(partition_function(root, z, 3, 0), cplx(8.0));
  const Matrix t = oracle::dense_monodromy_trace(build_R_fused(root, 1, z), 2);
  EXPECT_LT(relative_residual(partition_function(root, z, 2, 2), (t * t).trace()), 1e-10);
  EXPECT_THROW(partition_function(root, z, 2, -1), DomainError);
}
