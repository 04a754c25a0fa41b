#include "sixvertex/cyclo.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace sixvertex;

namespace {
const cplx I{0.0, 1.0};
}

TEST(RootOfUnity, OrderFourIsImaginaryUnit) {
  const auto root = make_root_of_unity(4, 1);
  EXPECT_NEAR(std::abs(root.q - I), 0.0, 1e-15);
  EXPECT_EQ(root.N_prime, 2);
}

TEST(RootOfUnity, OrderSix) {
  const auto root = make_root_of_unity(6, 1);
  EXPECT_NEAR(std::abs(root.q - std::polar(1.0, std::numbers::pi / 3)), 0.0, 1e-15);
  EXPECT_EQ(root.N_prime, 3);
}

TEST(RootOfUnity, RejectsNonPrimitiveAndSmallOrders) {
  EXPECT_THROW(make_root_of_unity(4, 2), PrimitivityError);
  EXPECT_THROW(make_root_of_unity(6, 3), PrimitivityError);
  EXPECT_THROW(make_root_of_unity(2, 1), DomainError);
  EXPECT_THROW(make_root_of_unity(5, 0), DomainError);
  EXPECT_THROW(make_root_of_unity(5, 5), DomainError);
}

TEST(RootOfUnity, PrimitivityAndBranches) {
  for (int N = 3; N <= 12; ++N)
    for (int n = 1; n < N; ++n) {
      if (std::gcd(N, n) != 1) continue;
      const auto root = make_root_of_unity(N, n);
      EXPECT_NEAR(std::abs(ipow(root.q, N) - 1.0), 0.0, 1e-12);
      for (int k = 1; k < N; ++k) EXPECT_GT(std::abs(ipow(root.q, k) - 1.0), 1e-12);
      EXPECT_NEAR(std::abs(root.q_half * root.q_half - root.q), 0.0, 1e-15);
      EXPECT_NEAR(std::abs(root.q_half - std::polar(1.0, std::numbers::pi * n / N)), 0.0, 1e-15);
      EXPECT_EQ(root.N_prime, N % 2 ? N : N / 2);
      const auto inv = root.inverse();
      EXPECT_NEAR(std::abs(inv.q * root.q - 1.0), 0.0, 1e-15);
      EXPECT_NEAR(std::abs(inv.half_power(3) * root.half_power(3) - 1.0), 0.0, 1e-14);
    }
}

TEST(EvalRep, SpinHalfRaisingEntry) {
  const auto rep = eval_rep(make_root_of_unity(5, 2), 1);
  ASSERT_EQ(rep.dim(), 2);
  EXPECT_NEAR(std::abs(rep.e(0, 1) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(rep.e(1, 0), cplx(0.0));
  EXPECT_EQ(rep.e(0, 0), cplx(0.0));
  EXPECT_EQ(rep.e(1, 1), cplx(0.0));
}

TEST(EvalRep, QIntegerTwoVanishesAtOrderFour) {
  // [2]_q = q + q^{-1} = i - i.
  const auto rep = eval_rep(make_root_of_unity(4, 1), 2);
  EXPECT_NEAR(std::abs(rep.e(0, 1)), 0.0, 1e-15);
}

TEST(EvalRep, CartanOnHighestWeight) {
  const auto root = make_root_of_unity(7, 3);
  const auto rep = eval_rep(root, 3);
  EXPECT_NEAR(std::abs(rep.k(0, 0) - ipow(root.q, 3)), 0.0, 1e-14);
}

TEST(EvalRep, MatchesDefiningActionEntrywise) {
  const auto root = make_root_of_unity(8, 3);
  for (int n = 0; n <= 6; ++n) {
    const auto rep = eval_rep(root, n);
    for (int m = 0; m <= n; ++m)
      for (int l = 0; l <= n; ++l) {
        const cplx e_expected = (l == m - 1) ? q_integer(root, n - m + 1) : cplx(0.0);
        const cplx f_expected = (l == m + 1) ? q_integer(root, m + 1) : cplx(0.0);
        const cplx k_expected = (l == m) ? ipow(root.q, n - 2 * m) : cplx(0.0);
        EXPECT_NEAR(std::abs(rep.e(l, m) - e_expected), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(rep.f(l, m) - f_expected), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(rep.k(l, m) - k_expected), 0.0, 1e-14);
      }
  }
}

TEST(EvalRep, AlgebraRelationsHold) {
  for (int N : {3, 4, 5, 6, 7, 8})
    for (int n = 1; n < N; ++n) {
      if (std::gcd(N, n) != 1) continue;
      const auto root = make_root_of_unity(N, n);
      for (int spin = 0; spin <= 6; ++spin)
        EXPECT_LT(eval_rep_relation_residual(root, eval_rep(root, spin)), 1e-12) << N << " " << spin;
    }
}

TEST(EvalRep, SerreRelationsHold) {
  for (int N : {3, 4, 5, 6, 7, 8}) {
    const auto root = make_root_of_unity(N, 1);
    for (int spin = 0; spin <= 4; ++spin)
      EXPECT_LT(eval_serre_residual(root, eval_rep(root, spin), cplx(0.7, -0.4)), 1e-10);
  }
}

TEST(EvalRep, RejectsNegativeSpin) { EXPECT_THROW(eval_rep(make_root_of_unity(4, 1), -1), DomainError); }

TEST(BorelRep, LoweringEntryAtOrderFour) {
  // q = i: (s + 1 - q^2 - s q^-2) / (q - q^-1)^2 = (2 + 2s) / (2i)^2 = -(1 + s) / 2.
  const auto root = make_root_of_unity(4, 1);
  const cplx s{0.3, -1.1};
  const auto rep = borel_rep(root, Sign::plus, cplx(0.5, 0.2), 1.0, s);
  EXPECT_NEAR(std::abs(rep.e1(0, 1) - (-(1.0 + s) / 2.0)), 0.0, 1e-15);
}

TEST(BorelRep, SZeroLoweringAndBoundary) {
  const auto root = make_root_of_unity(8, 3);
  const auto rep = borel_rep(root, Sign::plus, cplx(1.3, 0.4), cplx(0.8, 0.1), 0.0);
  const cplx dq = root.q - 1.0 / root.q;
  for (int j = 1; j < root.N_prime; ++j)
    EXPECT_NEAR(std::abs(rep.e1(j - 1, j) - (1.0 - ipow(root.q, 2 * j)) / (dq * dq)), 0.0, 1e-14);
  // e_1|0> = 0 and e_0|N'-1> = 0.
  EXPECT_EQ(rep.e1.col(0).norm(), 0.0);
  EXPECT_EQ(rep.e0.col(root.N_prime - 1).norm(), 0.0);
}

TEST(BorelRep, ZeroSpectralParameterKillsE0) {
  const auto rep = borel_rep(make_root_of_unity(6, 1), Sign::plus, 0.0, 1.0, cplx(0.2, 0.3));
  EXPECT_EQ(rep.e0.norm(), 0.0);
}

TEST(BorelRep, RelationsHoldForBothSigns) {
  for (int N : {3, 4, 5, 6, 7, 8}) {
    const auto root = make_root_of_unity(N, 1);
    for (Sign sign : {Sign::plus, Sign::minus}) {
      const auto rep = borel_rep(root, sign, cplx(0.4, -0.9), cplx(1.3, 0.5), cplx(-0.6, 0.2));
      EXPECT_LT(borel_relation_residual(root, rep), 1e-12) << N;
    }
  }
}

TEST(BorelRep, MinusIsOmegaSwapOfPlus) {
  const auto root = make_root_of_unity(7, 2);
  const cplx z{0.3, 0.4}, r{1.2, -0.3}, s{0.5, 0.5};
  const auto plus = borel_rep(root, Sign::plus, z, r, s);
  const auto minus = borel_rep(root, Sign::minus, z, r, s);
  EXPECT_EQ(minus.e0, plus.e1);
  EXPECT_EQ(minus.e1, plus.e0);
  EXPECT_EQ(minus.k0, plus.k1);
  EXPECT_EQ(minus.k1, plus.k0);
  EXPECT_EQ(minus.k0_half, plus.k1_half);
}
