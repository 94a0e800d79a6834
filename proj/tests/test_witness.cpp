#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "sqgame/errors.hpp"
#include "sqgame/witness.hpp"

using namespace sqgame;

TEST(Witness, MaximallyEntangledSpectrum) {
  const Witness w = build_certification_witness(schmidt_target(std::numbers::pi / 4));
  ASSERT_EQ(w.spectrum.eigenvalues.size(), 4);
  EXPECT_NEAR(w.spectrum.eigenvalues(0), 1.0, 1e-12);
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(w.spectrum.eigenvalues(k), -100.0, 1e-12);
  const Matrix p = ketbra(w.target.amplitudes());
  EXPECT_LT(oracle::fro(w.op.matrix(), p - 100.0 * (Matrix::Identity(4, 4) - p)), 1e-12);
  EXPECT_TRUE(w.warnings.empty());
}

TEST(Witness, SpectrumVectorsAreOrthonormalAndRebuildOperator) {
  const Witness w = build_certification_witness(schmidt_target(0.3), {2.0, 50.0, 10.0});
  Matrix rebuilt = Matrix::Zero(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const cplx ip = w.spectrum.eigenvectors[i].dot(w.spectrum.eigenvectors[j]);
      EXPECT_NEAR(std::abs(ip - cplx(i == j ? 1.0 : 0.0)), 0.0, 1e-12);
    }
    rebuilt += w.spectrum.eigenvalues(static_cast<Eigen::Index>(i)) * ketbra(w.spectrum.eigenvectors[i]);
  }
  EXPECT_LT(oracle::fro(rebuilt, w.op.matrix()), 1e-11);
  EXPECT_NEAR(w.spectrum.eigenvalues(0), 2.0, 1e-12);
}

TEST(Witness, ProductTargetRejected) {
  EXPECT_THROW(build_certification_witness(schmidt_target(0.0)), NotEntangledError);
}

TEST(Witness, WeakPenaltyWarns) {
  const Witness w = build_certification_witness(schmidt_target(0.5), {1.0, 10.0, 100.0});
  EXPECT_FALSE(w.warnings.empty());
}

TEST(Witness, NonPositiveWeightsRejected) {
  EXPECT_THROW(build_certification_witness(schmidt_target(0.5), {0.0, 10.0, 100.0}),
               ConstraintError);
}

TEST(Ensemble, StandardEnsemblesAreComplete) {
  EXPECT_EQ(tetrahedral_states().gram_rank(), 4);
  EXPECT_EQ(pauli6_states().gram_rank(), 4);
  EXPECT_EQ(tetrahedral_states().states.size(), 4u);
  EXPECT_EQ(pauli6_states().states.size(), 6u);
}

TEST(Ensemble, RejectsNonDensity) {
  EXPECT_THROW(custom_ensemble("bad", {Matrix::Identity(2, 2)}), ConstraintError);
}

TEST(Decompose, ReconstructsWitnessForBothEnsembles) {
  const Witness w = build_certification_witness(schmidt_target(std::numbers::pi / 6));
  for (const InputEnsemble& e : {tetrahedral_states(), pauli6_states()}) {
    const ScoreTable t = decompose_witness(w, e, e);
    EXPECT_LT(t.residual, 1e-10) << e.name;
    EXPECT_LT(oracle::fro(reconstruct(t).matrix(), w.op.matrix()), 1e-10) << e.name;
  }
}

TEST(Decompose, IdentityOnTetrahedralGivesUniformQuarter) {
  // The four tetrahedral projectors sum to 2I, so I (x) I = sum (1/4) psi_x (x) psi_y.
  const Operator id = Operator::identity(SubsystemShape::qubits({"A0", "B0"}));
  const ScoreTable t = decompose(id, tetrahedral_states(), tetrahedral_states());
  for (Eigen::Index x = 0; x < 4; ++x)
    for (Eigen::Index y = 0; y < 4; ++y) EXPECT_NEAR(t.beta(x, y), 0.25, 1e-12);
}

TEST(Decompose, IncompleteEnsembleReportsRank) {
  Matrix zero = Matrix::Zero(2, 2), one = Matrix::Zero(2, 2), plus(2, 2);
  zero(0, 0) = 1.0;
  one(1, 1) = 1.0;
  plus << 0.5, 0.5, 0.5, 0.5;
  const InputEnsemble e = custom_ensemble("zx", {zero, one, plus});
  const Witness w = build_certification_witness(schmidt_target(0.4));
  try {
    decompose_witness(w, e, tetrahedral_states());
    FAIL() << "expected CompletenessError";
  } catch (const CompletenessError& err) {
    EXPECT_EQ(err.gram_rank(), 3);
  }
}
