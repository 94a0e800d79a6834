#include "sqgame/witness.hpp"

#include <cmath>
#include <sstream>

namespace sqgame {

namespace {

const SubsystemShape& outer_shape() {
  static const SubsystemShape shape = SubsystemShape::qubits({"A0", "B0"});
  return shape;
}

void require_two_qubits(const SubsystemShape& shape, const char* what) {
  if (shape.rank() != 2 || shape.dims()[0] != 2 || shape.dims()[1] != 2) {
    throw ShapeError(std::string(what) + " must live on two qubits, got " + to_string(shape));
  }
}

Matrix pauli(int k) {
  Matrix m(2, 2);
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

Matrix bloch_state(double x, double y, double z) {
  return 0.5 * (pauli(0) + x * pauli(1) + y * pauli(2) + z * pauli(3));
}

Eigen::Vector4d bloch_coordinates(const Matrix& state) {
  Eigen::Vector4d v;
  for (int k = 0; k < 4; ++k) v(k) = (state * pauli(k)).trace().real();
  return v;
}

// Real image of a complex matrix: (Re vec, Im vec) stacked.
Eigen::VectorXd real_vec(const Matrix& m) {
  const auto n = m.size();
  Eigen::VectorXd v(2 * n);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const auto k = i * m.cols() + j;
      v(k) = m(i, j).real();
      v(n + k) = m(i, j).imag();
    }
  }
  return v;
}

}  // namespace

Ket schmidt_target(double chi) {
  Vector v = Vector::Zero(4);
  v(0) = std::cos(chi);
  v(3) = std::sin(chi);
  return Ket(v, outer_shape());
}

Witness build_certification_witness(const Ket& psi1, const WitnessOptions& opts) {
  require_two_qubits(psi1.shape(), "certification target");
  if (psi1.norm_kind() != NormKind::unit) throw ConstraintError("target must be a unit vector");
  if (!(opts.l1 > 0.0) || !(opts.l_negative > 0.0)) {
    throw ConstraintError("witness requires l1 > 0 and L > 0");
  }
  const Ket target = psi1.relabelled({"A0", "B0"});
  const double chi = schmidt(target, {"A0"}).angle;
  if (chi <= 1e-6) throw NotEntangledError("target not entangled (Schmidt angle " +
                                           std::to_string(chi) + ")");

  const Matrix p = ketbra(target.amplitudes());
  const Matrix id = Matrix::Identity(4, 4);
  Matrix w = opts.l1 * p - opts.l_negative * (id - p);
  w = 0.5 * (w + w.adjoint());

  Witness out;
  out.op = Operator(w, outer_shape(), true);
  out.target = target;
  out.l1 = opts.l1;
  out.l_negative = opts.l_negative;

  // Eigenbasis: psi1, then Gram-Schmidt over |00>, |01>, |10>, |11>.
  std::vector<Vector> basis{target.amplitudes()};
  for (int k = 0; k < 4 && basis.size() < 4; ++k) {
    Vector e = Vector::Zero(4);
    e(k) = 1.0;
    for (const auto& b : basis) e -= b.dot(e) * b;
    const double n = e.norm();
    if (n > 1e-3) basis.push_back(e / n);
  }
  out.spectrum.eigenvalues = RealVector(4);
  out.spectrum.eigenvalues << opts.l1, -opts.l_negative, -opts.l_negative, -opts.l_negative;
  for (auto& b : basis) {
    fix_phase(b);
    out.spectrum.eigenvectors.push_back(b);
  }

  if (opts.l_negative / opts.l1 < opts.dominance_ratio) {
    std::ostringstream os;
    os << "dominance ratio L/l1 = " << opts.l_negative / opts.l1 << " below "
       << opts.dominance_ratio;
    out.warnings.push_back(os.str());
  }
  return out;
}

int InputEnsemble::gram_rank() const {
  if (states.empty()) return 0;
  Eigen::MatrixXd bloch(static_cast<Eigen::Index>(states.size()), 4);
  for (std::size_t i = 0; i < states.size(); ++i) {
    bloch.row(static_cast<Eigen::Index>(i)) = bloch_coordinates(states[i]).transpose();
  }
  const Eigen::MatrixXd gram = bloch * bloch.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  const double top = solver.eigenvalues().cwiseAbs().maxCoeff();
  int rank = 0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    if (solver.eigenvalues()(k) > 1e-10 * std::max(1.0, top)) ++rank;
  }
  return rank;
}

void InputEnsemble::validate() const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    const Matrix& s = states[i];
    const std::string where = name + "[" + std::to_string(i) + "]";
    if (s.rows() != 2 || s.cols() != 2) throw ShapeError(where + " is not 2x2");
    if (hermiticity_defect(s) > kTol.structural) throw ConstraintError(where + " not Hermitian");
    if (std::abs(s.trace() - cplx(1.0)) > kTol.structural) {
      throw ConstraintError(where + " does not have unit trace");
    }
    if (min_eigenvalue(s) < -kTol.spectral) throw ConstraintError(where + " is not PSD");
  }
}

InputEnsemble tetrahedral_states() {
  const double r = 1.0 / std::sqrt(3.0);
  return {"tetrahedral",
          {bloch_state(r, r, r), bloch_state(r, -r, -r), bloch_state(-r, r, -r),
           bloch_state(-r, -r, r)}};
}

InputEnsemble pauli6_states() {
  return {"pauli6",
          {bloch_state(1, 0, 0), bloch_state(-1, 0, 0), bloch_state(0, 1, 0),
           bloch_state(0, -1, 0), bloch_state(0, 0, 1), bloch_state(0, 0, -1)}};
}

InputEnsemble custom_ensemble(std::string name, std::vector<Matrix> states) {
  InputEnsemble e{std::move(name), std::move(states)};
  e.validate();
  return e;
}

ScoreTable decompose(const Operator& w, const InputEnsemble& ens_a, const InputEnsemble& ens_b) {
  require_two_qubits(w.shape(), "witness");
  if (!w.hermitian()) throw ConstraintError("witness operator must be Hermitian");
  ens_a.validate();
  ens_b.validate();
  for (const auto* ens : {&ens_a, &ens_b}) {
    const int rank = ens->gram_rank();
    if (rank < 4) {
      throw CompletenessError("ensemble '" + ens->name +
                                  "' is not tomographically complete (Gram rank " +
                                  std::to_string(rank) + ")",
                              rank);
    }
  }

  const auto nx = static_cast<Eigen::Index>(ens_a.states.size());
  const auto ny = static_cast<Eigen::Index>(ens_b.states.size());
  Eigen::MatrixXd system(32, nx * ny);
  for (Eigen::Index x = 0; x < nx; ++x) {
    for (Eigen::Index y = 0; y < ny; ++y) {
      system.col(x * ny + y) =
          real_vec(kron(ens_a.states[static_cast<std::size_t>(x)], ens_b.states[static_cast<std::size_t>(y)]));
    }
  }
  const Eigen::VectorXd rhs = real_vec(w.matrix());
  const Eigen::VectorXd solution = system.completeOrthogonalDecomposition().solve(rhs);

  ScoreTable table;
  table.beta.resize(nx, ny);
  for (Eigen::Index x = 0; x < nx; ++x) {
    for (Eigen::Index y = 0; y < ny; ++y) table.beta(x, y) = solution(x * ny + y);
  }
  table.ensemble_a = ens_a;
  table.ensemble_b = ens_b;
  table.residual = frobenius_distance(reconstruct(table).matrix(), w.matrix());
  return table;
}

ScoreTable decompose_witness(const Witness& w, const InputEnsemble& ens_a,
                             const InputEnsemble& ens_b) {
  return decompose(w.op, ens_a, ens_b);
}

Operator reconstruct(const ScoreTable& table) {
  Matrix sum = Matrix::Zero(4, 4);
  for (Eigen::Index x = 0; x < table.beta.rows(); ++x) {
    for (Eigen::Index y = 0; y < table.beta.cols(); ++y) {
      sum += table.beta(x, y) * kron(table.ensemble_a.states[static_cast<std::size_t>(x)],
                                     table.ensemble_b.states[static_cast<std::size_t>(y)]);
    }
  }
  sum = 0.5 * (sum + sum.adjoint());
  return Operator(sum, outer_shape(), true);
}

}  // namespace sqgame
