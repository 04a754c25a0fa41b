#include "sixvertex/bethe.hpp"

#include <gtest/gtest.h>

using namespace sixvertex;

namespace {

std::vector<cplx> v(std::initializer_list<cplx> xs) { return xs; }

}  // namespace

TEST(ElementarySymmetric, Examples) {
  const cplx q{0.0, 1.0};
  const auto single = elementary_symmetric({-q}, q);
  ASSERT_EQ(single.size(), 2u);
  EXPECT_NEAR(std::abs(single[1] + 1.0), 0.0, 1e-15);

  const auto empty = elementary_symmetric({}, q);
  ASSERT_EQ(empty.size(), 1u);
  EXPECT_EQ(empty[0], cplx(1.0));

  const cplx a{0.3, 1.2}, b{-2.0, 0.5};
  const auto two = elementary_symmetric({a, b}, q);
  EXPECT_NEAR(std::abs(two[1] - (a + b) / q), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(two[2] - a * b / (q * q)), 0.0, 1e-15);
}

TEST(WronskianResidual, SingleSiteClosedForm) {
  const auto root = make_root_of_unity(4, 1);
  EXPECT_NEAR(wronskian_residual(v({1.0}), v({1.0, -1.0}), 1, 1, root), 0.0, 1e-15);
  EXPECT_NEAR(wronskian_residual(v({1.0, -1.0}), v({1.0}), -1, 1, root), 0.0, 1e-15);
  EXPECT_GT(wronskian_residual(v({1.0}), v({1.0, 0.5}), 1, 1, root), 1.0);
}

TEST(WronskianResidual, GuardsVanishingDenominatorAndParity) {
  EXPECT_THROW(wronskian_residual(v({1.0}), v({1.0, 1.0, 1.0, 1.0}), 3, 3, make_root_of_unity(3, 1)), DomainError);
  EXPECT_THROW(wronskian_residual(v({1.0, 1.0}), v({1.0, 1.0}), 0, 2, make_root_of_unity(4, 1)), DomainError);
}

TEST(WronskianResidual, SpectraZeroesOrderFourThreeSites) {
  const auto root = make_root_of_unity(4, 1);
  for (TwoSz k : {-3, -1, 1, 3})
    for (const auto& s : bethe_from_spectrum(analyze_sector(root, 3, k), root, 3)) EXPECT_LT(s.residual_wronskian, 1e-8);
}

TEST(Solver, SingleSiteUniqueSolution) {
  const auto root = make_root_of_unity(4, 1);
  const auto res = solve_wronskian_system(root, 1, 1);
  ASSERT_EQ(res.solutions.size(), 1u);
  EXPECT_NEAR(std::abs(res.solutions[0].e_minus[1] + 1.0), 0.0, 1e-12);
  EXPECT_EQ(res.bound, 1u);
}

TEST(Solver, RecoversEverySpectraSolution) {
  const auto root = make_root_of_unity(4, 1);
  for (TwoSz k : {-1, 1}) {
    const auto oracle = bethe_from_spectrum(analyze_sector(root, 3, k), root, 3);
    const auto res = solve_wronskian_system(root, 3, k);
    EXPECT_LE(res.solutions.size(), res.bound);
    for (const auto& o : oracle) {
      const Vector target = detail::pack(o.e_plus, o.e_minus);
      const bool hit = std::any_of(res.solutions.begin(), res.solutions.end(), [&](const BetheSolution& s) {
        return (detail::pack(s.e_plus, s.e_minus) - target).cwiseAbs().maxCoeff() < 1e-8;
      });
      EXPECT_TRUE(hit);
    }
    for (const auto& s : res.solutions) EXPECT_LT(s.residual_wronskian, 1e-10);
  }
}

TEST(Solver, OneSidedSectorIsLinear) {
  const auto root = make_root_of_unity(6, 1);
  const auto res = solve_wronskian_system(root, 3, 3);
  ASSERT_EQ(res.solutions.size(), 1u);
  EXPECT_EQ(res.solutions[0].e_plus.size(), 1u);
  EXPECT_EQ(res.solutions[0].e_minus.size(), 4u);
}

TEST(Solver, SpinReversalSwapsSides) {
  const auto root = make_root_of_unity(4, 1);
  const auto up = solve_wronskian_system(root, 3, 1), down = solve_wronskian_system(root, 3, -1);
  ASSERT_EQ(up.solutions.size(), down.solutions.size());
  for (const auto& s : up.solutions) {
    const Vector swapped = detail::pack(s.e_minus, s.e_plus);
    const bool hit = std::any_of(down.solutions.begin(), down.solutions.end(), [&](const BetheSolution& t) {
      return (detail::pack(t.e_plus, t.e_minus) - swapped).cwiseAbs().maxCoeff() < 1e-8;
    });
    EXPECT_TRUE(hit);
  }
}

TEST(Solver, DeterministicOrder) {
  const auto root = make_root_of_unity(8, 1);
  const auto a = solve_wronskian_system(root, 3, 1), b = solve_wronskian_system(root, 3, 1);
  ASSERT_EQ(a.solutions.size(), b.solutions.size());
  for (std::size_t i = 0; i < a.solutions.size(); ++i) EXPECT_EQ(a.solutions[i].e_plus, b.solutions[i].e_plus);
}

TEST(Certify, SingleSiteMoebiusPoint) {
  const auto root = make_root_of_unity(4, 1);
  BetheSolution s;
  s.two_sz = 1;
  s.e_minus = {1.0, -1.0};
  const auto c = bethe_certify(s, root, 1);
  ASSERT_EQ(c.k_minus.size(), 1u);
  EXPECT_NEAR(std::abs(c.k_minus[0]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(c.x_minus[0] + root.q), 0.0, 1e-12);
  EXPECT_EQ(c.residual_bae, 0.0);
  EXPECT_TRUE(c.k_plus.empty());
}

TEST(Certify, SingularInversionThrows) {
  const auto root = make_root_of_unity(4, 1);
  BetheSolution s;
  s.two_sz = 1;
  s.e_minus = {1.0, root.q};  // root x q^{-1} = q
  EXPECT_THROW(bethe_certify(s, root, 1), BranchError);
}

TEST(Certify, SpectraSolutionsSatisfyBetheEquations) {
  for (int N : {4, 6}) {
    const auto root = make_root_of_unity(N, 1);
    for (TwoSz k : {-3, -1, 1, 3})
      for (const auto& s : bethe_from_spectrum(analyze_sector(root, 3, k), root, 3))
        EXPECT_LT(bethe_certify(s, root, 3).residual_bae, 1e-7) << "N=" << N << " 2Sz=" << k;
  }
}
