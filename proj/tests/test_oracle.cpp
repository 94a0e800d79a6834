#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "sqgame/errors.hpp"
#include "sqgame/oracle.hpp"

using namespace sqgame;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Ppt, PhiPlusAndMaximallyMixed) {
  const Operator phi = phi_plus("A0", "B0").projector();
  EXPECT_TRUE(ppt_entangled(phi));
  EXPECT_NEAR(min_pt_eigenvalue(phi.matrix()), -0.5, 1e-14);
  EXPECT_FALSE(ppt_entangled(Operator(Matrix::Identity(4, 4) / 4.0, SubsystemShape::qubits({"A0", "B0"}))));
  EXPECT_THROW(ppt_entangled(Operator::identity(SubsystemShape({"A", "B"}, {2, 3}))), ShapeError);
}

TEST(Ppt, IdealEffectiveElementMinimum) {
  // PT of |psi><psi| for cos chi|00> + sin chi|11> has minimum -cos chi sin chi.
  const double chi = 0.4;
  const Ket psi = schmidt_target(chi);
  const EffectiveElement e = effective_element(ideal_strategy(psi));
  EXPECT_NEAR(min_pt_eigenvalue(e.op.matrix() * 4.0), -std::cos(chi) * std::sin(chi), 1e-13);
  EXPECT_TRUE(ppt_entangled(e.op));
}

TEST(Theorem1Probe, NoViolationsEitherSide) {
  const ProbeReport a = theorem1_probe(300, 1);
  const ProbeReport b = theorem1_probe(300, 1, true);
  EXPECT_EQ(a.violations, 0);
  EXPECT_EQ(b.violations, 0);
  EXPECT_GE(a.worst_value, -1e-9);
  EXPECT_GE(a.extras.at("min_witness_value"), -1e-9);
}

TEST(Theorem1Probe, WorstSeedReplays) {
  const ProbeReport a = theorem1_probe(100, 9);
  EXPECT_EQ(theorem1_value(a.worst_seed, false).min_pt_eigenvalue, a.worst_value);
}

TEST(Theorem1, ProductMeasurementGivesProductElement) {
  Rng rng(4);
  const Matrix p = random_density_matrix(2, 2, rng), q = random_density_matrix(2, 1, rng);
  const Matrix rho = random_density_matrix(4, 3, rng);
  const Matrix mb = ketbra(haar_vector(4, rng));
  const Matrix m = contract_outer(rho, kron(p, q), mb);
  // Tr_A0 then re-tensor: a product operator equals (Tr_B0 m) (x) (Tr_A0 m) / Tr m.
  const Matrix ma0 = oracle::partial_trace(m, {2, 2}, {true, false});
  const Matrix mb0 = oracle::partial_trace(m, {2, 2}, {false, true});
  EXPECT_LT(oracle::fro(m, oracle::kron(ma0, mb0) / m.trace()), 1e-12);
}

TEST(Lemma1Probe, NoRankCollapse) {
  const ProbeReport r = lemma1_probe(300, 2, 0.1, kPi / 8);
  EXPECT_EQ(r.violations, 0);
  EXPECT_GT(r.worst_value, 1e-8);
  EXPECT_EQ(lemma1_value(r.worst_seed, 0.1, kPi / 8), r.worst_value);
}

TEST(Lemma1, ProductMeasurementsCollapseRankDespiteMixedState) {
  // The boundary excluded by min_angle: product projectors on both sides.
  Matrix p = Matrix::Zero(4, 4);
  p(0, 0) = 1.0;
  Rng rng(5);
  const Matrix rho = random_density_matrix(4, 4, rng);
  const Spectrum s = eig_hermitian(contract_outer(rho, p, p));
  EXPECT_LT(std::abs(s.eigenvalues(1)), 1e-15);
  EXPECT_GT(s.eigenvalues(0), 1e-3);
}

TEST(Lemma1, PureStateControlIsRankOne) {
  Rng rng(6);
  const Matrix rho = ketbra(haar_vector(4, rng));
  const Spectrum s = eig_hermitian(contract_outer(rho, sample_entangled_projector(rng, kPi / 8),
                                                  sample_entangled_projector(rng, kPi / 8)));
  EXPECT_LT(std::abs(s.eigenvalues(1)), 1e-14);
}

TEST(Lemma2Probe, NoRankCollapse) {
  const ProbeReport r = lemma2_probe(200, 3, kPi / 8);
  EXPECT_EQ(r.n_samples, 400);
  EXPECT_EQ(r.violations, 0);
  const RankSide side = r.extras.at("worst_side") == 0.0 ? RankSide::alice : RankSide::bob;
  EXPECT_EQ(lemma2_value(r.worst_seed, kPi / 8, side), r.worst_value);
}

TEST(Lemma2, IdentityMeasurementGivesMixedElement) {
  Rng rng(7);
  const Matrix rho = sample_entangled_projector(rng, kPi / 8);
  const Spectrum s = eig_hermitian(contract_outer(rho, Matrix::Identity(4, 4),
                                                  sample_entangled_projector(rng, kPi / 8)));
  EXPECT_GT(s.eigenvalues(1), 1e-6);
}

TEST(Lemma3, SampledInstancesSatisfyConstraints) {
  for (const auto& [da, db] : std::vector<std::pair<int, int>>{{2, 2}, {3, 4}}) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const Lemma3Instance inst = lemma3_sample(da, db, seed);
      EXPECT_LT(inst.orthogonality_residual(), 1e-12);
      EXPECT_NEAR(inst.psi.norm(), 1.0, 1e-14);
      EXPECT_LE(lemma3_value(inst), 1.0 + 1e-9);
    }
  }
  EXPECT_THROW(lemma3_sample(1, 2, 0), ConstraintError);
}

TEST(Lemma3, EqualityAndOutsideSupport) {
  const Lemma3Instance eq = lemma3_equality_instance(2, 2, 1);
  EXPECT_NEAR(lemma3_value(eq), 1.0, 1e-12);
  EXPECT_LT(eq.orthogonality_residual(), 1e-14);
  EXPECT_NEAR(eq.theta, kPi / 2, 1e-15);
  const Lemma3Instance out = lemma3_outside_support_instance(3, 2, 1);
  EXPECT_LT(out.orthogonality_residual(), 1e-14);
  EXPECT_LT(lemma3_value(out), 1.0 - 1e-3);
  EXPECT_THROW(lemma3_outside_support_instance(2, 2, 1), ConstraintError);
}

TEST(Lemma3Check, ReportsNoViolations) {
  const ProbeReport r = lemma3_check(2000, {{2, 2}, {2, 3}, {3, 3}, {4, 4}}, 4);
  EXPECT_EQ(r.violations, 0);
  EXPECT_LT(r.worst_value, 1.0);
  EXPECT_LT(r.extras.at("equality_max_deviation"), 1e-12);
  EXPECT_LT(r.extras.at("outside_support_max"), 1.0);
}

TEST(AppendixD, CandidateClosedFormAgrees) {
  const AppendixDReport r = appendixD_scan(kPi / 3, kPi / 3, 1000);
  EXPECT_NEAR(r.f1, r.f1_closed, 1e-12);
  EXPECT_NEAR(r.a, 0.125, 1e-15);
  EXPECT_NEAR(r.c, 5.0 / 3.0, 1e-14);
  EXPECT_TRUE(r.below_one);
}

TEST(AppendixD, StationaryPointMatchesGridMaximum) {
  // The stationary point of f solves b(1 - 2cx^2) = -2a sqrt(x^2 - c x^4), giving
  // x^2 = 1/(2c) + a / (2c sqrt(a^2 + b^2 c)).
  for (const double t : {0.3, 0.7, 1.1}) {
    const AppendixDReport r = appendixD_scan(t, 0.9, 20000);
    EXPECT_NEAR(r.grid_max, std::max(r.f1, r.f3), 1e-6) << t;
    EXPECT_GE(r.f3 + 1e-15, r.f1);
  }
}

TEST(AppendixD, ValuesApproachOneNearBoundary) {
  double previous = 0.0;
  for (const double t : {1.4, 1.5, 1.55}) {
    const AppendixDReport r = appendixD_scan(t, t, 4000);
    EXPECT_GT(r.grid_max, previous);
    EXPECT_LE(r.grid_max, 1.0);
    previous = r.grid_max;
  }
  EXPECT_GT(previous, 0.99);
}

TEST(AppendixD, DegenerateThetaReducesToConstant) {
  // Near theta = pi/2, b -> 0 and a -> 0, so the maximum tends to d = sin^2 gamma.
  const AppendixDReport r = appendixD_scan(kPi / 2 - 1e-9, 0.6, 1000);
  EXPECT_NEAR(r.grid_max, std::sin(0.6) * std::sin(0.6), 1e-6);
}

TEST(AppendixD, BoundaryRejected) {
  EXPECT_THROW(appendixD_scan(0.0, 0.5, 100), ConstraintError);
  EXPECT_THROW(appendixD_scan(0.5, kPi / 2, 100), ConstraintError);
  EXPECT_THROW(appendixD_scan(0.5, 0.5, 5), ConstraintError);
}

TEST(Probes, DeterministicAcrossThreadCounts) {
  const ProbeReport a = lemma3_check(500, {{2, 2}, {3, 3}}, 8);
  setenv("SQGAME_THREADS", "1", 1);
  const ProbeReport b = lemma3_check(500, {{2, 2}, {3, 3}}, 8);
  unsetenv("SQGAME_THREADS");
  EXPECT_EQ(a.worst_value, b.worst_value);
  EXPECT_EQ(a.worst_seed, b.worst_seed);
}
