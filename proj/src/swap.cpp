#include "sqgame/swap.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <Eigen/Geometry>

namespace sqgame {

namespace {

const std::vector<std::string> kSourceA{"A0", "A"};
const std::vector<std::string> kSourceB{"B", "B0"};
const std::vector<std::string> kJoint{"A", "B"};

void check_density(const Operator& op, const char* what) {
  if (!op.hermitian()) throw ConstraintError(std::string(what) + " is not Hermitian");
  if (min_eigenvalue(op.matrix()) < -kTol.spectral) {
    throw ConstraintError(std::string(what) + " is not positive semidefinite");
  }
  if (std::abs(op.trace() - cplx(1.0)) > kTol.spectral) {
    throw ConstraintError(std::string(what) + " does not have unit trace");
  }
}

Operator canonical(const Operator& op, const std::vector<std::string>& order, const char* what) {
  if (op.shape().rank() != order.size()) {
    throw ShapeError(std::string(what) + " has shape " + to_string(op.shape()));
  }
  return permute(op, order);
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

Vector bell_vector(int k) {
  const double h = 1.0 / std::sqrt(2.0);
  Vector v = Vector::Zero(4);
  switch (k) {
    case 0: v(0) = h; v(3) = h; break;   // Phi+
    case 1: v(0) = h; v(3) = -h; break;  // Phi-
    case 2: v(1) = h; v(2) = h; break;   // Psi+
    default: v(1) = h; v(2) = -h; break; // Psi-
  }
  return v;
}

// Unitary whose rows are the conjugated basis vectors: maps basis[k] to |k>.
Matrix basis_to_computational(const std::vector<Ket>& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Matrix u(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    u.row(k) = basis[static_cast<std::size_t>(k)].amplitudes().adjoint();
  }
  return u;
}

// SU(2) element V with V (n.sigma) V^dag = (R n).sigma.
Matrix su2_from_rotation(const Eigen::Matrix3d& r) {
  const Eigen::AngleAxisd aa(r);
  const double half = aa.angle() / 2.0;
  Matrix v = std::cos(half) * pauli(0);
  for (int k = 0; k < 3; ++k) v -= cplx(0.0, std::sin(half) * aa.axis()(k)) * pauli(k + 1);
  return v;
}

}  // namespace

void SwapInstance::validate() const {
  const Operator a = canonical(rho_a0a, kSourceA, "source rho_A0A");
  const Operator b = canonical(rho_bb0, kSourceB, "source rho_BB0");
  check_density(a, "source rho_A0A");
  check_density(b, "source rho_BB0");
  if (joint_povm.empty()) throw ConstraintError("joint POVM is empty");
  const SubsystemShape joint({"A", "B"}, {a.shape().dim_of("A"), b.shape().dim_of("B")});
  const auto n = static_cast<Eigen::Index>(joint.size());
  Matrix sum = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < joint_povm.size(); ++i) {
    const Operator m = canonical(joint_povm[i], kJoint, "POVM element");
    if (m.shape() != joint) throw ShapeError("POVM element dimensions disagree with sources");
    if (!m.hermitian() || min_eigenvalue(m.matrix()) < -kTol.spectral) {
      throw ConstraintError("POVM element " + std::to_string(i) + " is not PSD");
    }
    sum += m.matrix();
  }
  if ((sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > kTol.spectral) {
    throw ConstraintError("POVM completeness violated: elements do not sum to I");
  }
}

EffectiveElement swap_effective(const SwapInstance& inst, std::size_t outcome) {
  if (outcome >= inst.joint_povm.size()) {
    throw ConstraintError("outcome index " + std::to_string(outcome) + " out of range");
  }
  inst.validate();
  Operator op = contract_outer(inst.joint_povm[outcome], inst.rho_a0a, inst.rho_bb0);
  const double w = op.trace().real();
  return {std::move(op), w};
}

SwapGame swap_game_operator(const Ket& psi, double l) {
  if (!(l > 0.0)) throw ConstraintError("swap penalty l must be positive");
  if (psi.shape().rank() != 2 || psi.shape().size() != 4) {
    throw ShapeError("swap target must be a two-qubit vector");
  }
  const Ket target = psi.relabelled({"A0", "B0"});
  if (schmidt(target, {"A0"}).angle <= 1e-6) {
    throw NotEntangledError("swap target not entangled");
  }
  const Matrix p = ketbra(target.amplitudes());
  Matrix v = p - l * (Matrix::Identity(4, 4) - p);
  v = 0.5 * (v + v.adjoint());
  return SwapGame{Operator(v, target.shape(), true), target, l};
}

double swap_score(const SwapGame& g, const SwapInstance& inst) {
  const EffectiveElement e = swap_effective(inst, 0);
  return (g.v.matrix() * e.op.matrix()).trace().real();
}

std::vector<Operator> bsm_projectors() {
  std::vector<Operator> out;
  for (int k = 0; k < 4; ++k) {
    out.emplace_back(ketbra(bell_vector(k)), SubsystemShape::qubits({"A", "B"}), true);
  }
  return out;
}

Operator werner_state(double visibility, const std::string& first, const std::string& second) {
  const Matrix m = visibility * ketbra(bell_vector(0)) +
                   (1.0 - visibility) * Matrix::Identity(4, 4) / 4.0;
  return Operator(m, SubsystemShape::qubits({first, second}), true);
}

SwapInstance ideal_swap_instance(const Ket& psi) {
  const Matrix m1 = ketbra(psi.amplitudes()).transpose();
  const SubsystemShape joint = SubsystemShape::qubits({"A", "B"});
  return SwapInstance{werner_state(1.0, "A0", "A"), werner_state(1.0, "B", "B0"),
                      {Operator(m1, joint, true),
                       Operator(Matrix::Identity(4, 4) - m1, joint, true)}};
}

SwapInstance bell_swap_instance() {
  return SwapInstance{werner_state(1.0, "A0", "A"), werner_state(1.0, "B", "B0"),
                      bsm_projectors()};
}

TripleProblem dualize(const SwapGame& g) {
  TripleProblem p;
  p.score_op = g.v.matrix();
  p.center_role = VariableRole::effect;
  p.left_role = VariableRole::density;
  p.right_role = VariableRole::density;
  return p;
}

namespace {

SwapOptResult to_swap_result(const TripleRun& run) {
  const SubsystemShape joint = SubsystemShape::qubits({"A", "B"});
  const Matrix& m1 = run.variables.center;
  SwapOptResult out;
  out.instance = SwapInstance{
      Operator(run.variables.left, SubsystemShape::qubits({"A0", "A"})),
      Operator(run.variables.right, SubsystemShape::qubits({"B", "B0"})),
      {Operator(m1, joint), Operator(Matrix::Identity(4, 4) - m1, joint)}};
  out.score_trajectory = run.trajectory;
  out.final_score = run.final_score;
  out.converged = run.converged;
  out.restart_index = run.restart_index;
  return out;
}

}  // namespace

SwapOptResult swap_optimize(const SwapGame& g, const SeeSawConfig& cfg) {
  return to_swap_result(seesaw_best(dualize(g), cfg));
}

SwapOptResult swap_optimize_from(const SwapGame& g, const SwapInstance& init,
                                 const SeeSawConfig& cfg) {
  init.validate();
  TripleVariables v{permute(init.joint_povm.front(), kJoint).matrix(),
                    permute(init.rho_a0a, kSourceA).matrix(),
                    permute(init.rho_bb0, kSourceB).matrix()};
  return to_swap_result(seesaw_run(dualize(g), std::move(v), cfg, 0));
}

// ---------------------------------------------------------------------------

CorollaryReport corollary_check(const SwapInstance& inst, double tol) {
  if (inst.joint_povm.size() != 4) {
    throw ConstraintError("corollary check needs a four-outcome joint measurement");
  }
  inst.validate();
  CorollaryReport rep;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  bool probabilities_ok = true;
  bool purity_ok = true;
  std::vector<Vector> states;

  for (std::size_t i = 0; i < 4; ++i) {
    const EffectiveElement e = swap_effective(inst, i);
    CorollaryOutcome oc;
    oc.probability = e.weight;
    if (std::abs(oc.probability - 0.25) > tol) {
      probabilities_ok = false;
      rep.diagnostics.push_back("outcome " + std::to_string(i) + ": probability " +
                                std::to_string(oc.probability) + " != 1/4");
    }
    Vector top = Vector::Zero(4);
    if (oc.probability > kTol.spectral) {
      const Spectrum s = eig_hermitian(Matrix(e.op.matrix() / oc.probability));
      oc.purity = s.eigenvalues(0);
      top = s.eigenvectors.front();
      oc.schmidt_coefficients = schmidt(Ket(top, e.op.shape()), {"A0"}).coefficients;
    } else {
      oc.schmidt_coefficients = {0.0, 0.0};
    }
    const bool pure = oc.purity >= 1.0 - tol;
    const bool maximal = std::abs(oc.schmidt_coefficients[0] - inv_sqrt2) <= tol &&
                         std::abs(oc.schmidt_coefficients[1] - inv_sqrt2) <= tol;
    if (!pure) {
      purity_ok = false;
      rep.diagnostics.push_back("outcome " + std::to_string(i) + ": purity " +
                                std::to_string(oc.purity) + " below 1");
    }
    if (!maximal) {
      purity_ok = false;
      rep.diagnostics.push_back("outcome " + std::to_string(i) +
                                ": Schmidt coefficients not maximally entangled");
    }
    states.push_back(top);
    rep.outcomes.push_back(std::move(oc));
  }

  // Align outcome 0 with Phi+ through its Schmidt bases, then fix the
  // remaining (V (x) conj V) freedom by rotating the other three outcomes
  // onto Pauli frames.
  bool aligned = false;
  rep.u_a0 = Matrix::Identity(2, 2);
  rep.u_b0 = Matrix::Identity(2, 2);
  if (rep.outcomes[0].probability > kTol.spectral) {
    const SchmidtForm s0 = schmidt(Ket(states[0], SubsystemShape::qubits({"A0", "B0"})), {"A0"});
    const Matrix ua = basis_to_computational(s0.left_basis);
    const Matrix ub = basis_to_computational(s0.right_basis);
    const Matrix local = kron(ua, ub);

    Eigen::Matrix3d frame = Eigen::Matrix3d::Zero();
    for (int i = 1; i < 4; ++i) {
      const Vector w = local * states[static_cast<std::size_t>(i)];
      Matrix x(2, 2);
      x << w(0), w(1), w(2), w(3);
      x *= std::sqrt(2.0);
      Eigen::Vector3cd z;
      for (int k = 0; k < 3; ++k) z(k) = (pauli(k + 1) * x).trace() / 2.0;
      Eigen::Index kmax = 0;
      z.cwiseAbs().maxCoeff(&kmax);
      const cplx phase = std::abs(z(kmax)) > 0 ? z(kmax) / std::abs(z(kmax)) : cplx(1.0);
      frame.row(i - 1) = (z * std::conj(phase)).real().transpose();
    }
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(frame, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d rotation = svd.matrixU() * svd.matrixV().transpose();
    if (rotation.determinant() < 0) {
      // A reflected frame is a phase flip of one outcome away from a proper one.
      Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
      flip(2, 2) = -1.0;
      rotation = flip * rotation;
    }
    const Matrix v = su2_from_rotation(rotation);
    rep.u_a0 = v * ua;
    rep.u_b0 = v.conjugate() * ub;
    const Matrix total = kron(rep.u_a0, rep.u_b0);

    aligned = true;
    std::set<int> used;
    for (std::size_t i = 0; i < 4; ++i) {
      const Matrix p = ketbra(total * states[i]);
      double best = std::numeric_limits<double>::infinity();
      int best_k = -1;
      for (int k = 0; k < 4; ++k) {
        const double d = frobenius_distance(p, ketbra(bell_vector(k)));
        if (d < best) {
          best = d;
          best_k = k;
        }
      }
      rep.outcomes[i].alignment_error = best;
      rep.outcomes[i].matched_bell = best_k;
      if (best > tol || !used.insert(best_k).second) {
        aligned = false;
        rep.diagnostics.push_back("outcome " + std::to_string(i) +
                                  ": not mapped onto a distinct Bell state (error " +
                                  std::to_string(best) + ")");
      }
    }
  } else {
    rep.diagnostics.push_back("outcome 0 has zero probability; cannot align local bases");
  }

  rep.clauses["probability"] = probabilities_ok;
  rep.clauses["purity_schmidt"] = purity_ok;
  rep.clauses["bell_alignment"] = aligned;
  rep.passed = probabilities_ok && purity_ok && aligned;
  rep.verdict = rep.passed
                    ? "joint measurement is a complete BSM and both sources are Bell states"
                    : "not certified";
  return rep;
}

}  // namespace sqgame
