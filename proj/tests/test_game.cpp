#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "random_strategies.hpp"
#include "sqgame/errors.hpp"
#include "sqgame/game.hpp"

using namespace sqgame;
using testing_support::random_strategy;

namespace {

const double kChis[] = {std::numbers::pi / 4, std::numbers::pi / 6, std::numbers::pi / 12, 0.1};

Matrix canon(const Operator& op, std::vector<std::string> order) {
  return permute(op, order).matrix();
}

}  // namespace

TEST(Contraction, MatchesFullTensorOracle) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Strategy s = random_strategy(seed);
    const Matrix fast = contract_outer(s.rho.matrix(), s.m_a.matrix(), s.m_b.matrix());
    const Matrix full = oracle::effective_element(s.rho.matrix(), s.m_a.matrix(), s.m_b.matrix());
    const Matrix loops = oracle::effective_element_loops(s.rho.matrix(), s.m_a.matrix(), s.m_b.matrix());
    EXPECT_LT(oracle::fro(fast, full), 1e-13) << seed;
    EXPECT_LT(oracle::fro(full, loops), 1e-13) << seed;
  }
}

TEST(Contraction, LabelOrderIsIrrelevant) {
  const Strategy s = random_strategy(11);
  const Strategy shuffled{permute(s.rho, std::vector<std::string>{"B", "A"}),
                          permute(s.m_a, std::vector<std::string>{"A", "A0"}),
                          permute(s.m_b, std::vector<std::string>{"B0", "B"})};
  const EffectiveElement e1 = effective_element(s);
  const EffectiveElement e2 = effective_element(shuffled);
  EXPECT_LT(oracle::fro(e1.op.matrix(), e2.op.matrix()), 1e-14);
}

TEST(Contraction, ProductMeasurementGivesProductElement) {
  // m_A = P (x) Q, m_B = R (x) S: M~ = P (x) S times Tr[rho (Q (x) R)].
  Rng rng(3);
  const Matrix p = ketbra(haar_vector(2, rng)), q = ketbra(haar_vector(2, rng));
  const Matrix r = ketbra(haar_vector(2, rng)), s = ketbra(haar_vector(2, rng));
  const Matrix rho = random_density_matrix(4, 4, rng);
  const Matrix m = contract_outer(rho, kron(p, q), kron(r, s));
  const cplx w = (rho * oracle::kron(q, r)).trace();
  EXPECT_LT(oracle::fro(m, w * oracle::kron(p, s)), 1e-14);
}

TEST(Contraction, WeightIsProbability) {
  // With complete POVMs {M, I - M} on both sides the four weights sum to 1.
  const Strategy s = random_strategy(21);
  const Matrix ia = Matrix::Identity(4, 4) - s.m_a.matrix();
  const Matrix ib = Matrix::Identity(4, 4) - s.m_b.matrix();
  double total = 0.0;
  for (const Matrix& a : {Matrix(s.m_a.matrix()), ia})
    for (const Matrix& b : {Matrix(s.m_b.matrix()), ib})
      total += contract_outer(s.rho.matrix(), a, b).trace().real();
  EXPECT_NEAR(total, 4.0, 1e-12);  // Tr over A0 B0 of I gives dimension 4.
}

TEST(IdealStrategy, EffectiveElementIsQuarterTarget) {
  for (const double chi : kChis) {
    const Ket psi = schmidt_target(chi);
    const EffectiveElement e = effective_element(ideal_strategy(psi));
    EXPECT_LT(oracle::fro(e.op.matrix(), ketbra(psi.amplitudes()) / 4.0), 1e-12) << chi;
    EXPECT_NEAR(e.weight, 0.25, 1e-14);
  }
}

TEST(IdealStrategy, EffectiveElementWithFullOracle) {
  const Ket psi = schmidt_target(0.3);
  const Strategy s = ideal_strategy(psi);
  const Matrix m = oracle::effective_element(canon(s.rho, {"A", "B"}), canon(s.m_a, {"A0", "A"}),
                                             canon(s.m_b, {"B", "B0"}));
  EXPECT_LT(oracle::fro(m, ketbra(psi.amplitudes()) / 4.0), 1e-14);
}

TEST(Score, IdealReachesQuarterL1) {
  for (const double chi : kChis) {
    const SemiQuantumGame g = make_game(schmidt_target(chi));
    EXPECT_NEAR(score(g, ideal_strategy(g.witness.target)), 0.25, 1e-12) << chi;
  }
  const SemiQuantumGame g2 = make_game(schmidt_target(0.5), {2.0, 100.0, 10.0});
  EXPECT_NEAR(score(g2, ideal_strategy(g2.witness.target)), 0.5, 1e-12);
}

TEST(Score, InputSumEqualsTraceAgainstWitness) {
  const SemiQuantumGame g = make_game(schmidt_target(std::numbers::pi / 6), {}, pauli6_states());
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const Strategy s = random_strategy(seed);
    const Matrix m = oracle::effective_element(s.rho.matrix(), s.m_a.matrix(), s.m_b.matrix());
    const double expect = (g.witness.op.matrix() * m).trace().real();
    EXPECT_NEAR(score(g, s), expect, 1e-10) << seed;
  }
}

TEST(Score, RandomStrategiesStayBelowQuarterAtMaximalEntanglement) {
  const SemiQuantumGame g = make_game(schmidt_target(std::numbers::pi / 4));
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    EXPECT_LE(score(g, random_strategy(derive_seed(77, seed))), 0.25 + 1e-9);
  }
}

TEST(Strategy, ValidationRejectsBadInputs) {
  const Strategy good = random_strategy(1);
  Strategy bad_trace = good;
  bad_trace.rho = Operator(good.rho.matrix() * 2.0, good.rho.shape());
  EXPECT_THROW(bad_trace.validate(), ConstraintError);

  Strategy above_identity = good;
  above_identity.m_a = Operator(Matrix::Identity(4, 4) * 1.5, good.m_a.shape());
  EXPECT_THROW(above_identity.validate(), ConstraintError);

  Strategy wrong_labels = good;
  wrong_labels.m_a = good.m_a.relabelled({"A0", "X"});
  EXPECT_THROW(wrong_labels.validate(), ShapeError);
}
