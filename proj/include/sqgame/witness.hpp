#pragma once

// Certification witnesses on A0 (x) B0 and their decomposition into products
// of trusted qubit inputs with real score coefficients.

#include <string>
#include <vector>

#include "sqgame/qlin.hpp"

namespace sqgame {

struct WitnessOptions {
  double l1 = 1.0;
  double l_negative = 100.0;       // L: magnitude of the three negative eigenvalues
  double dominance_ratio = 100.0;  // warn when L / l1 falls below this
};

struct Witness {
  Operator op;        // on (A0, B0)
  Spectrum spectrum;  // l_i with |psi_i>, psi_1 first, complement by Gram-Schmidt
  Ket target;         // |psi_1> on (A0, B0)
  double l1 = 1.0;
  double l_negative = 100.0;
  std::vector<std::string> warnings;
};

/// cos(chi)|00> + sin(chi)|11> on (A0, B0).
Ket schmidt_target(double chi);

/// W = l1 |psi1><psi1| - L (I - |psi1><psi1|). Throws NotEntangledError when
/// the Schmidt angle of psi1 is at most 1e-6.
Witness build_certification_witness(const Ket& psi1, const WitnessOptions& opts = {});

struct InputEnsemble {
  std::string name;
  std::vector<Matrix> states;  // 2x2 density matrices

  /// Rank of the Gram matrix of the Bloch 4-vectors (1, r_x, r_y, r_z).
  int gram_rank() const;
  void validate() const;
};

InputEnsemble tetrahedral_states();
InputEnsemble pauli6_states();
/// Throws ConstraintError when a state is not a 2x2 density matrix.
InputEnsemble custom_ensemble(std::string name, std::vector<Matrix> states);

struct ScoreTable {
  Eigen::MatrixXd beta;  // beta(x, y)
  InputEnsemble ensemble_a;
  InputEnsemble ensemble_b;
  double residual = 0.0;  // Frobenius residual of the reconstruction
};

/// Minimum-norm least-squares solve of W = sum_{x,y} beta(x,y) psi_x (x) psi_y.
/// Throws CompletenessError for a tomographically incomplete ensemble.
ScoreTable decompose(const Operator& w, const InputEnsemble& ens_a, const InputEnsemble& ens_b);
ScoreTable decompose_witness(const Witness& w, const InputEnsemble& ens_a,
                             const InputEnsemble& ens_b);

/// sum_{x,y} beta(x,y) psi_x (x) psi_y on (A0, B0).
Operator reconstruct(const ScoreTable& table);

}  // namespace sqgame
