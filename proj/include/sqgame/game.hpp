#pragma once

// Semi-quantum game evaluation for the (a, b) = (0, 0) outcome.
//
// Subsystems are labelled A0, A, B, B0. The shared state lives on (A, B),
// Alice's measurement element on (A0, A), Bob's on (B, B0). Inputs may carry
// their labels in any order; they are canonicalised before contraction.

#include "sqgame/qlin.hpp"
#include "sqgame/witness.hpp"

namespace sqgame {

struct Strategy {
  Operator rho;  // density on (A, B)
  Operator m_a;  // POVM element on (A0, A)
  Operator m_b;  // POVM element on (B, B0)

  /// Throws ConstraintError / ShapeError when an invariant fails.
  void validate() const;
};

/// Qubit strategy from raw matrices, labelled canonically.
Strategy make_strategy(const Matrix& rho, const Matrix& m_a, const Matrix& m_b);

struct EffectiveElement {
  Operator op;  // on (A0, B0)
  double weight = 0.0;
};

struct TripleDims {
  int a0 = 2, a = 2, b = 2, b0 = 2;
};

/// Tr_AB[(I_A0 (x) center (x) I_B0)(left (x) right)] for matrices already in
/// canonical order: center on (A, B), left on (A0, A), right on (B, B0).
/// Result on (A0, B0).
Matrix contract_outer(const Matrix& center, const Matrix& left, const Matrix& right,
                      const TripleDims& dims = {});

/// Labelled version; canonicalises subsystem order and checks dimensions.
Operator contract_outer(const Operator& center, const Operator& left, const Operator& right);

EffectiveElement effective_element(const Strategy& s);

struct SemiQuantumGame {
  Witness witness;
  ScoreTable scores;
  double target_chi = 0.0;
};

SemiQuantumGame make_game(const Ket& psi1, const WitnessOptions& opts = {},
                          const InputEnsemble& ensemble = tetrahedral_states());

/// Average score as the explicit sum over input pairs,
///   S = sum_{x,y} beta(x,y) Tr[(psi_x (x) rho (x) psi_y)(M_A (x) M_B)],
/// cross-checked against Tr[W M~]; a disagreement above 1e-10 throws
/// NumericalError.
double score(const SemiQuantumGame& g, const Strategy& s);

/// Tr[W M~].
double score_effective(const SemiQuantumGame& g, const Strategy& s);

/// rho = (|psi1><psi1|)^T, M_A = M_B = |Phi+><Phi+|.
Strategy ideal_strategy(const Ket& psi1);

/// |Phi+> = (|00> + |11>)/sqrt(2) on the given two labels.
Ket phi_plus(const std::string& first, const std::string& second);

}  // namespace sqgame
