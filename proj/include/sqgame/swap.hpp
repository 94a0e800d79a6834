#pragma once

// Source-independent entanglement swapping: two uncharacterised sources on
// (A0, A) and (B, B0), a joint measurement on (A, B), trusted tomography on
// (A0, B0). Structurally this is the semi-quantum game with the roles of
// states and measurement effects exchanged; dualize() exposes that mapping.

#include <map>
#include <string>
#include <vector>

#include "sqgame/certify.hpp"

namespace sqgame {

struct SwapInstance {
  Operator rho_a0a;                  // density on (A0, A)
  Operator rho_bb0;                  // density on (B, B0)
  std::vector<Operator> joint_povm;  // effects on (A, B), summing to I

  /// Throws ConstraintError / ShapeError on a violated invariant.
  void validate() const;
};

/// rho~_i = Tr_AB[(I (x) M_i (x) I)(rho_A0A (x) rho_BB0)] on (A0, B0).
EffectiveElement swap_effective(const SwapInstance& inst, std::size_t outcome);

struct SwapGame {
  Operator v;  // on (A0, B0)
  Ket target;
  double l = 100.0;
};

/// V = |psi><psi| - l (I - |psi><psi|).
SwapGame swap_game_operator(const Ket& psi, double l = 100.0);

/// Tr[V rho~_0] (the first POVM element is the scored outcome).
double swap_score(const SwapGame& g, const SwapInstance& inst);

/// Projectors onto Phi+, Phi-, Psi+, Psi- on (A, B), in that order.
std::vector<Operator> bsm_projectors();

/// Bell sources and {(|psi><psi|)^T, I - (|psi><psi|)^T}.
SwapInstance ideal_swap_instance(const Ket& psi);
/// Bell sources and the complete Bell state measurement.
SwapInstance bell_swap_instance();
/// Werner source v |Phi+><Phi+| + (1 - v) I/4 on the given labels.
Operator werner_state(double visibility, const std::string& first, const std::string& second);

/// Dual form as a see-saw problem. Variable mapping:
///   center (A,B)  <- joint effect M_1      (effect role)
///   left   (A0,A) <- source rho_A0A        (density role)
///   right  (B,B0) <- source rho_BB0        (density role)
/// The contraction is identical to the game's effective element, so the
/// certify engine runs unchanged.
TripleProblem dualize(const SwapGame& g);

struct SwapOptResult {
  SwapInstance instance;  // POVM completed as {M_1, I - M_1}
  std::vector<double> score_trajectory;
  double final_score = 0.0;
  bool converged = false;
  int restart_index = 0;
};

SwapOptResult swap_optimize(const SwapGame& g, const SeeSawConfig& cfg);
SwapOptResult swap_optimize_from(const SwapGame& g, const SwapInstance& init,
                                 const SeeSawConfig& cfg);

struct CorollaryOutcome {
  double probability = 0.0;
  double purity = 0.0;  // top eigenvalue of the normalised rho~_i
  std::vector<double> schmidt_coefficients;
  double alignment_error = 0.0;  // Frobenius distance to the matched Bell projector
  int matched_bell = -1;
};

struct CorollaryReport {
  std::vector<CorollaryOutcome> outcomes;
  std::map<std::string, bool> clauses;  // probability, purity_schmidt, bell_alignment
  bool passed = false;
  Matrix u_a0;  // local unitaries found by alignment
  Matrix u_b0;
  std::string verdict;
  std::vector<std::string> diagnostics;
};

/// Throws ConstraintError when the POVM is incomplete or not four elements.
CorollaryReport corollary_check(const SwapInstance& inst, double tol = 1e-6);

}  // namespace sqgame
