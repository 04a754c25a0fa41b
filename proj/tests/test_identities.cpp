#include "sixvertex/identities.hpp"

#include <gtest/gtest.h>

using namespace sixvertex;

namespace {

CheckOptions samples(int n, double tol = 1e-8) {
  CheckOptions opt;
  opt.samples = n;
  opt.tol = tol;
  return opt;
}

}  // namespace

TEST(Identities, NamesRoundTrip) {
  for (IdentityId id : all_identities()) EXPECT_EQ(identity_from_string(to_string(id)), id);
  EXPECT_FALSE(identity_from_string("NOPE").has_value());
}

TEST(Identities, AllPassAtOrderFourThreeSites) {
  const auto root = make_root_of_unity(4, 1);
  for (IdentityId id : all_identities()) {
    const auto rep = check_identity(id, root, 3, samples(3));
    EXPECT_TRUE(rep.pass) << rep.identity << " " << rep.max_residual << " " << rep.witness;
    EXPECT_FALSE(rep.skipped) << rep.identity;
  }
}

TEST(Identities, TQZeroBelowTenToMinusTen) {
  const auto rep = check_identity(IdentityId::TQ0, make_root_of_unity(4, 1), 3, samples(5, 1e-10));
  EXPECT_TRUE(rep.pass) << rep.max_residual;
  EXPECT_EQ(rep.samples.size(), 5u);
}

TEST(Identities, FusionAtLevelOneIsQuantumDeterminant) {
  const auto rep = check_identity(IdentityId::FUS, make_root_of_unity(7, 3), 4, samples(2, 1e-12));
  EXPECT_TRUE(rep.pass) << rep.max_residual;
}

TEST(Identities, QCommutativityOddAndEightOrders) {
  for (int N : {5, 7, 8}) {
    const auto rep = check_identity(IdentityId::QCOMM, make_root_of_unity(N, 1), 4, samples(2, 1e-9));
    EXPECT_TRUE(rep.pass) << N << " " << rep.max_residual;
    EXPECT_EQ(rep.note, "numerical evidence, not proof");
  }
}

TEST(Identities, PreconditionsSkipNotFail) {
  const auto odd = check_identity(IdentityId::SUMQP, make_root_of_unity(5, 1), 3, samples(1));
  EXPECT_TRUE(odd.skipped);
  EXPECT_TRUE(odd.pass);
  const auto even_length = check_identity(IdentityId::FACTOR, make_root_of_unity(4, 1), 2, samples(1));
  EXPECT_TRUE(even_length.skipped);
  const auto w = fusion_from_Q(FusionMethod::WRONSKI, make_root_of_unity(6, 1), 2, 1, samples(1));
  EXPECT_TRUE(w.skipped);
}

TEST(Identities, SectorRestriction) {
  auto opt = samples(2);
  opt.sector = 1;
  const auto rep = check_identity(IdentityId::TQ0, make_root_of_unity(6, 1), 3, opt);
  EXPECT_TRUE(rep.pass);
  ASSERT_TRUE(rep.sector.has_value());
  EXPECT_EQ(*rep.sector, 1);
}

TEST(Identities, FailsAgainstImpossibleTolerance) {
  const auto rep = check_identity(IdentityId::TCOMM, make_root_of_unity(5, 2), 3, samples(1, 0.0));
  EXPECT_FALSE(rep.pass);
  EXPECT_GE(rep.max_residual, 0.0);
}

TEST(Identities, SeededReportsAreReproducible) {
  const auto root = make_root_of_unity(6, 1);
  const auto a = check_identity(IdentityId::RQ, root, 3, samples(2));
  const auto b = check_identity(IdentityId::RQ, root, 3, samples(2));
  EXPECT_EQ(a.max_residual, b.max_residual);
  EXPECT_EQ(a.witness, b.witness);
}

TEST(Identities, OddLengthSweepSmallGrid) {
  for (int N = 3; N <= 8; ++N)
    for (int M = 1; M <= 4; ++M)
      for (IdentityId id : all_identities()) {
        const auto rep = check_identity(id, make_root_of_unity(N, 1), M, samples(1));
        EXPECT_TRUE(rep.pass) << to_string(id) << " N=" << N << " M=" << M << " " << rep.max_residual;
      }
}

TEST(Identities, SmallSApproachesSZeroLimit) {
  const auto root = make_root_of_unity(4, 1);
  const cplx z{0.8, 0.5};
  const auto limit = aux_limit(root, Sign::plus, z, 3);
  const double far = relative_residual(aux_matrix(root, z, 1e-3, 3).to_dense(), limit.to_dense());
  const double near = relative_residual(aux_matrix(root, z, 1e-4, 3).to_dense(), limit.to_dense());
  EXPECT_LT(near, far);
  EXPECT_LT(near, 1e-3);
}

TEST(FusionFromQ, WronskianSingleSiteGivesQuantumDeterminant) {
  auto opt = samples(3, 1e-12);
  opt.sector = 1;
  const auto rep = fusion_from_Q(FusionMethod::WRONSKI, make_root_of_unity(4, 1), 1, 1, opt);
  EXPECT_FALSE(rep.skipped);
  EXPECT_TRUE(rep.pass) << rep.max_residual;
}

TEST(FusionFromQ, SpecLevelTwoOrderSix) {
  const auto rep = fusion_from_Q(FusionMethod::SPEC, make_root_of_unity(6, 1), 3, 2, samples(3));
  EXPECT_TRUE(rep.pass) << rep.max_residual;
}

TEST(FusionFromQ, WronskianAtTopLevelAgreesWithFunctionalEquation) {
  const auto root = make_root_of_unity(4, 1);
  const auto w = fusion_from_Q(FusionMethod::WRONSKI, root, 3, root.N_prime, samples(3));
  const auto f = check_identity(IdentityId::FUNC, root, 3, samples(3));
  EXPECT_TRUE(w.pass) << w.max_residual;
  EXPECT_TRUE(f.pass) << f.max_residual;
}

TEST(FusionFromQ, OddOrderWithVanishingQIsSkipped) {
  const auto rep = fusion_from_Q(FusionMethod::SPEC, make_root_of_unity(5, 1), 3, 2, samples(1));
  EXPECT_TRUE(rep.skipped);
  EXPECT_FALSE(rep.note.empty());
}
