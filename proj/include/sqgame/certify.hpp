#pragma once

// Score maximisation and certification verdicts.
//
// The see-saw engine works on a generic "triple contraction" problem:
// maximise Tr[S E] with E = Tr_AB[(I (x) center (x) I)(left (x) right)], where
// each of center (A,B), left (A0,A) and right (B,B0) is either a density
// operator or a POVM effect. The semi-quantum game uses (state, effect,
// effect); the entanglement-swapping dual uses (effect, state, state).

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sqgame/game.hpp"

namespace sqgame {

enum class SeeSawMode { rank_one, psd_relaxed };

struct SeeSawConfig {
  int restarts = 32;
  int max_iters = 500;
  double tol_score = 1e-10;
  // A run counts as converged once the score improvement drops below
  // tol_score, but keeps sweeping until every variable also moves less than
  // this (Frobenius) or max_iters is hit. Score improvement alone is
  // quadratic in the distance to a maximiser; this keeps operators accurate.
  double tol_variables = 1e-9;
  SeeSawMode mode = SeeSawMode::rank_one;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class VariableRole { density, effect };

struct TripleProblem {
  Matrix score_op;  // on (A0, B0)
  TripleDims dims;
  VariableRole center_role = VariableRole::density;
  VariableRole left_role = VariableRole::effect;
  VariableRole right_role = VariableRole::effect;
};

struct TripleVariables {
  Matrix center, left, right;
};

enum class TripleSlot { center, left, right };

/// Score Tr[S E] for the given variables.
double triple_score(const TripleProblem& p, const TripleVariables& v);

/// Hermitian F with Tr[F X] = score when every other variable is held fixed
/// and X replaces the variable in `slot`.
Matrix triple_functional(const TripleProblem& p, const TripleVariables& v, TripleSlot slot);

struct TripleRun {
  TripleVariables variables;
  std::vector<double> trajectory;  // initial score followed by one entry per sweep
  double final_score = 0.0;
  bool converged = false;
  int iterations = 0;
  int restart_index = 0;
};

TripleRun seesaw_run(const TripleProblem& p, TripleVariables init, const SeeSawConfig& cfg,
                     int restart_index = 0);
/// Random rank-one initialisation for restart `restart_index`.
TripleVariables random_initial(const TripleProblem& p, std::uint64_t seed, int restart_index);
/// Runs cfg.restarts independent restarts (in parallel) and keeps the best.
TripleRun seesaw_best(const TripleProblem& p, const SeeSawConfig& cfg);

// ---------------------------------------------------------------------------
// Semi-quantum game front end

struct OptResult {
  Strategy strategy;
  std::vector<double> score_trajectory;
  double final_score = 0.0;
  bool converged = false;
  int iterations = 0;
  int restart_index = 0;
};

TripleProblem game_problem(const SemiQuantumGame& g);
OptResult seesaw_optimize(const SemiQuantumGame& g, const SeeSawConfig& cfg);
/// Single run started from `init`.
OptResult seesaw_from(const SemiQuantumGame& g, const Strategy& init, const SeeSawConfig& cfg);

// ---------------------------------------------------------------------------
// Closed-form bound

/// sin^2a sin^2b cos^2a cos^2b / (sin^2a sin^2b cos^2chi + cos^2a cos^2b sin^2chi).
double theorem2_bound(double alpha, double beta, double chi);

struct BoundRow {
  double alpha = 0.0, beta = 0.0, bound = 0.0;
};

struct BoundScan {
  double chi = 0.0;
  int grid_n = 0;
  std::vector<BoundRow> rows;  // sorted by (alpha, beta)
  BoundRow best;
};

/// Grid alpha_i = beta_i = i * pi / (2 grid_n), i = 1 .. grid_n - 1.
BoundScan bound_scan(double chi, int grid_n);
void write_csv(std::ostream& os, const BoundScan& scan);

// ---------------------------------------------------------------------------
// Certification

/// Pure bipartite LU equivalence across the first-subsystem cut.
bool lu_equivalent_pure(const Ket& u, const Ket& v, double tol);

enum class Verdict { certified, not_certified };

struct CertificationReport {
  double final_score = 0.0;
  double gap = 0.0;
  SchmidtForm rho_schmidt;
  SchmidtForm m_a_schmidt;
  SchmidtForm m_b_schmidt;
  double target_chi = 0.0;
  Verdict verdict = Verdict::not_certified;
  std::map<std::string, bool> checks;
  std::vector<std::string> diagnostics;  // failed checks, in evaluation order
};

CertificationReport certification_report(const OptResult& opt, const SemiQuantumGame& g,
                                         double tol = 1e-6);

std::string to_string(Verdict v);

}  // namespace sqgame
