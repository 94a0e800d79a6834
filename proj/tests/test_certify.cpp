#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "random_strategies.hpp"
#include "sqgame/certify.hpp"
#include "sqgame/errors.hpp"

using namespace sqgame;

namespace {

using big = boost::multiprecision::cpp_dec_float_50;

big bound_reference(big alpha, big beta, big chi) {
  using boost::multiprecision::cos;
  using boost::multiprecision::sin;
  const big p = sin(alpha) * sin(alpha) * sin(beta) * sin(beta);
  const big q = cos(alpha) * cos(alpha) * cos(beta) * cos(beta);
  return p * q / (p * cos(chi) * cos(chi) + q * sin(chi) * sin(chi));
}

// Maximum of the bound over alpha = beta (where it peaks), from calculus:
// 1 / (cos^(2/3) chi + sin^(2/3) chi)^3.
double bound_peak(double chi) {
  return 1.0 / std::pow(std::cbrt(std::cos(chi) * std::cos(chi)) +
                            std::cbrt(std::sin(chi) * std::sin(chi)),
                        3);
}

TripleVariables random_vars(std::uint64_t seed) {
  Rng rng(seed);
  return {testing_support::random_state(4, rng), testing_support::random_effect(4, rng),
          testing_support::random_effect(4, rng)};
}

SeeSawConfig config(std::uint64_t seed, int restarts = 32) {
  SeeSawConfig c;
  c.seed = seed;
  c.restarts = restarts;
  return c;
}

}  // namespace

TEST(TripleFunctional, ReproducesScoreForEverySlot) {
  const SemiQuantumGame g = make_game(schmidt_target(0.4));
  const TripleProblem p = game_problem(g);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TripleVariables v = random_vars(seed);
    const double s = triple_score(p, v);
    const Strategy st = make_strategy(v.center, v.left, v.right);
    EXPECT_NEAR(s, score_effective(g, st), 1e-10);
    for (const TripleSlot slot : {TripleSlot::center, TripleSlot::left, TripleSlot::right}) {
      const Matrix f = triple_functional(p, v, slot);
      const Matrix& x = slot == TripleSlot::center ? v.center
                        : slot == TripleSlot::left ? v.left
                                                   : v.right;
      EXPECT_NEAR((f * x).trace().real(), s, 1e-10);
      EXPECT_LT(hermiticity_defect(f), 1e-12);
    }
  }
}

TEST(SeeSaw, TrajectoryIsMonotone) {
  const SemiQuantumGame g = make_game(schmidt_target(0.3));
  const TripleProblem p = game_problem(g);
  const TripleRun run = seesaw_run(p, random_initial(p, 5, 0), config(5), 0);
  ASSERT_GE(run.trajectory.size(), 2u);
  for (std::size_t i = 1; i < run.trajectory.size(); ++i) {
    EXPECT_GE(run.trajectory[i], run.trajectory[i - 1] - 1e-12) << i;
  }
}

TEST(SeeSaw, CertifiesMaximallyEntangledTarget) {
  const SemiQuantumGame g = make_game(schmidt_target(std::numbers::pi / 4));
  const OptResult r = seesaw_optimize(g, config(7));
  EXPECT_NEAR(r.final_score, 0.25, 1e-6);
  EXPECT_TRUE(r.converged);
  const CertificationReport rep = certification_report(r, g);
  EXPECT_EQ(rep.verdict, Verdict::certified);
  EXPECT_NEAR(rep.rho_schmidt.angle, std::numbers::pi / 4, 1e-6);
  EXPECT_NEAR(rep.m_a_schmidt.angle, std::numbers::pi / 4, 1e-6);
  EXPECT_NEAR(rep.m_b_schmidt.angle, std::numbers::pi / 4, 1e-6);
  EXPECT_TRUE(rep.diagnostics.empty());
}

TEST(SeeSaw, PartiallyEntangledTargetAdmitsScoreAboveQuarter) {
  // The score bound peaks at 1/(cos^(2/3) chi + sin^(2/3) chi)^3, above 1/4
  // for chi != pi/4; with finite L the optimiser can do slightly better still.
  const double chi = std::numbers::pi / 6;
  const SemiQuantumGame g = make_game(schmidt_target(chi));
  const OptResult r = seesaw_optimize(g, config(7));
  EXPECT_GE(r.final_score, bound_peak(chi) - 1e-6);
  EXPECT_GT(r.final_score, 0.25 + 1e-2);
  EXPECT_EQ(certification_report(r, g).verdict, Verdict::not_certified);
}

TEST(SeeSaw, DeterministicAcrossRunsAndThreadCounts) {
  const SemiQuantumGame g = make_game(schmidt_target(0.5));
  const SeeSawConfig c = config(11, 8);
  const OptResult a = seesaw_optimize(g, c);
  setenv("SQGAME_THREADS", "1", 1);
  const OptResult b = seesaw_optimize(g, c);
  unsetenv("SQGAME_THREADS");
  EXPECT_EQ(a.score_trajectory, b.score_trajectory);
  EXPECT_EQ(a.restart_index, b.restart_index);
  EXPECT_EQ(a.strategy.rho.matrix(), b.strategy.rho.matrix());
}

TEST(SeeSaw, RelaxedModeReachesQuarter) {
  const SemiQuantumGame g = make_game(schmidt_target(std::numbers::pi / 4));
  SeeSawConfig c = config(3, 8);
  c.mode = SeeSawMode::psd_relaxed;
  EXPECT_NEAR(seesaw_optimize(g, c).final_score, 0.25, 1e-6);
}

TEST(SeeSaw, StarvedRunDoesNotConverge) {
  const SemiQuantumGame g = make_game(schmidt_target(std::numbers::pi / 4));
  SeeSawConfig c = config(1, 1);
  c.max_iters = 1;
  EXPECT_FALSE(seesaw_optimize(g, c).converged);
}

TEST(SeeSaw, StartingAtIdealStaysThere) {
  const SemiQuantumGame g = make_game(schmidt_target(std::numbers::pi / 4));
  const OptResult r = seesaw_from(g, ideal_strategy(g.witness.target), config(0, 1));
  EXPECT_NEAR(r.final_score, 0.25, 1e-12);
  EXPECT_TRUE(r.converged);
}

TEST(SeeSawConfig, Validation) {
  SeeSawConfig c;
  c.restarts = 0;
  EXPECT_THROW(c.validate(), ConstraintError);
  c = SeeSawConfig{};
  c.tol_score = 0.0;
  EXPECT_THROW(c.validate(), ConstraintError);
}

TEST(Bound, MatchesMultiprecisionReference) {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(0.01, 1.56), b = rng.uniform(0.01, 1.56), chi = rng.uniform(0.01, 0.785);
    const double ref = static_cast<double>(bound_reference(big(a), big(b), big(chi)));
    EXPECT_NEAR(theorem2_bound(a, b, chi), ref, 1e-14 * std::max(1.0, ref));
  }
}

TEST(Bound, QuarterAtCentreForMaximalEntanglement) {
  const double q = std::numbers::pi / 4;
  EXPECT_NEAR(theorem2_bound(q, q, q), 0.25, 1e-15);
  const BoundScan scan = bound_scan(q, 40);
  EXPECT_NEAR(scan.best.bound, 0.25, 1e-15);
  EXPECT_NEAR(scan.best.alpha, q, 1e-12);
  EXPECT_NEAR(scan.best.beta, q, 1e-12);
}

TEST(Bound, PeakExceedsQuarterAwayFromMaximalEntanglement) {
  const double chi = std::numbers::pi / 6;
  EXPECT_NEAR(bound_peak(chi), 0.2745932553409633, 1e-12);
  const BoundScan scan = bound_scan(chi, 400);
  EXPECT_LE(scan.best.bound, bound_peak(chi) + 1e-15);
  EXPECT_NEAR(scan.best.bound, bound_peak(chi), 1e-4);
  EXPECT_NEAR(scan.best.alpha, scan.best.beta, 1e-12);
}

TEST(Bound, RejectsInvalidArguments) {
  EXPECT_THROW(theorem2_bound(0.3, 0.3, 0.0), NotEntangledError);
  EXPECT_THROW(theorem2_bound(0.3, 0.3, 1.0), ConstraintError);
  EXPECT_THROW(theorem2_bound(-0.1, 0.3, 0.5), ConstraintError);
  EXPECT_THROW(bound_scan(0.5, 2), ConstraintError);
}

TEST(Bound, CsvLayout) {
  std::ostringstream os;
  write_csv(os, bound_scan(0.5, 3));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "alpha,beta,bound");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Certification, MixedStateListsEveryFailure) {
  const SemiQuantumGame g = make_game(schmidt_target(std::numbers::pi / 4));
  OptResult r;
  r.strategy = make_strategy(Matrix::Identity(4, 4) / 4.0, ketbra(phi_plus("A0", "A").amplitudes()),
                             ketbra(phi_plus("B", "B0").amplitudes()));
  r.final_score = score(g, r.strategy);
  const CertificationReport rep = certification_report(r, g);
  EXPECT_EQ(rep.verdict, Verdict::not_certified);
  ASSERT_GE(rep.diagnostics.size(), 2u);
  EXPECT_EQ(rep.diagnostics[0], "score gap");
  EXPECT_EQ(rep.diagnostics[1], "state purity");
  EXPECT_TRUE(rep.checks.at("measurement Schmidt angle"));
}

TEST(LocalUnitaryEquivalence, ComparesSchmidtCoefficients) {
  const Ket a = schmidt_target(0.4);
  const Matrix u = kron(random_unitary(SubsystemShape::qubits({"A0"}), 1).matrix(),
                        random_unitary(SubsystemShape::qubits({"B0"}), 2).matrix());
  const Ket b(u * a.amplitudes(), a.shape());
  EXPECT_TRUE(lu_equivalent_pure(a, b, 1e-12));
  EXPECT_FALSE(lu_equivalent_pure(a, schmidt_target(0.5), 1e-6));
}
