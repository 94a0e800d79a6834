#include "sqgame/game.hpp"

#include <cmath>
#include <sstream>

namespace sqgame {

namespace {

const std::vector<std::string> kCenter{"A", "B"};
const std::vector<std::string> kLeft{"A0", "A"};
const std::vector<std::string> kRight{"B", "B0"};

Operator canonical(const Operator& op, const std::vector<std::string>& order, const char* what) {
  if (op.shape().rank() != order.size()) {
    throw ShapeError(std::string(what) + " must have subsystems " + order[0] + "," + order[1] +
                     "; got " + to_string(op.shape()));
  }
  return permute(op, order);
}

void check_psd(const Operator& op, const char* what, double max_eig_limit) {
  if (!op.hermitian()) throw ConstraintError(std::string(what) + " is not Hermitian");
  const Spectrum s = eig_hermitian(op);
  if (s.eigenvalues(s.eigenvalues.size() - 1) < -kTol.spectral) {
    throw ConstraintError(std::string(what) + " is not positive semidefinite");
  }
  if (s.eigenvalues(0) > max_eig_limit + kTol.spectral) {
    throw ConstraintError(std::string(what) + " exceeds the identity");
  }
}

}  // namespace

void Strategy::validate() const {
  const Operator r = canonical(rho, kCenter, "state");
  const Operator a = canonical(m_a, kLeft, "Alice's measurement");
  const Operator b = canonical(m_b, kRight, "Bob's measurement");
  if (a.shape().dim_of("A") != r.shape().dim_of("A") ||
      b.shape().dim_of("B") != r.shape().dim_of("B")) {
    throw ShapeError("strategy dimensions of A/B disagree between state and measurements");
  }
  check_psd(r, "state", 1.0);
  if (std::abs(r.trace() - cplx(1.0)) > kTol.spectral) {
    throw ConstraintError("state trace is not 1");
  }
  check_psd(a, "Alice's measurement", 1.0);
  check_psd(b, "Bob's measurement", 1.0);
}

Strategy make_strategy(const Matrix& rho, const Matrix& m_a, const Matrix& m_b) {
  return Strategy{Operator(rho, SubsystemShape::qubits({"A", "B"})),
                  Operator(m_a, SubsystemShape::qubits({"A0", "A"})),
                  Operator(m_b, SubsystemShape::qubits({"B", "B0"}))};
}

Matrix contract_outer(const Matrix& center, const Matrix& left, const Matrix& right,
                      const TripleDims& d) {
  const int da0 = d.a0, da = d.a, db = d.b, db0 = d.b0;
  Matrix out(da0 * db0, da0 * db0);
  // M~[(a0 b0), (a0' b0')] = Tr[center (L_{a0 a0'} (x) R_{b0 b0'})] with
  // L_{a0 a0'}[a'', a] = left[(a0 a''), (a0' a)] and
  // R_{b0 b0'}[b'', b] = right[(b'' b0), (b b0')].
  for (int a0 = 0; a0 < da0; ++a0) {
    for (int a0p = 0; a0p < da0; ++a0p) {
      const auto lblk = left.block(a0 * da, a0p * da, da, da);
      for (int b0 = 0; b0 < db0; ++b0) {
        for (int b0p = 0; b0p < db0; ++b0p) {
          cplx acc = 0.0;
          for (int a = 0; a < da; ++a) {
            for (int b = 0; b < db; ++b) {
              const int row = a * db + b;
              for (int app = 0; app < da; ++app) {
                const cplx l = lblk(app, a);
                if (l == cplx(0.0)) continue;
                for (int bpp = 0; bpp < db; ++bpp) {
                  const cplx r = right(bpp * db0 + b0, b * db0 + b0p);
                  acc += center(row, app * db + bpp) * l * r;
                }
              }
            }
          }
          out(a0 * db0 + b0, a0p * db0 + b0p) = acc;
        }
      }
    }
  }
  return out;
}

Operator contract_outer(const Operator& center, const Operator& left, const Operator& right) {
  const Operator c = canonical(center, kCenter, "center operator");
  const Operator l = canonical(left, kLeft, "left operator");
  const Operator r = canonical(right, kRight, "right operator");
  TripleDims d;
  d.a0 = l.shape().dim_of("A0");
  d.a = c.shape().dim_of("A");
  d.b = c.shape().dim_of("B");
  d.b0 = r.shape().dim_of("B0");
  if (l.shape().dim_of("A") != d.a || r.shape().dim_of("B") != d.b) {
    throw ShapeError("shape mismatch between center and outer operators");
  }
  Matrix m = contract_outer(c.matrix(), l.matrix(), r.matrix(), d);
  const bool herm = c.hermitian() && l.hermitian() && r.hermitian();
  if (herm) m = 0.5 * (m + m.adjoint());
  return Operator(std::move(m), SubsystemShape({"A0", "B0"}, {d.a0, d.b0}), herm);
}

EffectiveElement effective_element(const Strategy& s) {
  s.validate();
  Operator op = contract_outer(s.rho, s.m_a, s.m_b);
  const double w = op.trace().real();
  return {std::move(op), w};
}

SemiQuantumGame make_game(const Ket& psi1, const WitnessOptions& opts,
                          const InputEnsemble& ensemble) {
  SemiQuantumGame g;
  g.witness = build_certification_witness(psi1, opts);
  g.scores = decompose_witness(g.witness, ensemble, ensemble);
  g.target_chi = schmidt(g.witness.target, {"A0"}).angle;
  return g;
}

double score_effective(const SemiQuantumGame& g, const Strategy& s) {
  const EffectiveElement e = effective_element(s);
  return (g.witness.op.matrix() * e.op.matrix()).trace().real();
}

double score(const SemiQuantumGame& g, const Strategy& s) {
  s.validate();
  const Matrix rho = permute(s.rho, kCenter).matrix();
  const Matrix measurement =
      kron(permute(s.m_a, kLeft).matrix(), permute(s.m_b, kRight).matrix());
  const Matrix mt = measurement.transpose();
  const auto& table = g.scores;
  double total = 0.0;
  for (Eigen::Index x = 0; x < table.beta.rows(); ++x) {
    const Matrix left = kron(table.ensemble_a.states[static_cast<std::size_t>(x)], rho);
    for (Eigen::Index y = 0; y < table.beta.cols(); ++y) {
      const Matrix input = kron(left, table.ensemble_b.states[static_cast<std::size_t>(y)]);
      // Tr[X Y] = sum_ij X_ij Y_ji
      total += table.beta(x, y) * input.cwiseProduct(mt).sum().real();
    }
  }
  const double via_effective = score_effective(g, s);
  if (!std::isfinite(total) || std::abs(total - via_effective) > 1e-10) {
    std::ostringstream os;
    os.precision(17);
    os << "score paths disagree: input-sum " << total << " vs Tr[W M~] " << via_effective;
    throw NumericalError(os.str());
  }
  return total;
}

Ket phi_plus(const std::string& first, const std::string& second) {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return Ket(v, SubsystemShape::qubits({first, second}));
}

Strategy ideal_strategy(const Ket& psi1) {
  if (psi1.shape().size() != 4 || psi1.shape().rank() != 2) {
    throw ShapeError("ideal strategy needs a two-qubit target");
  }
  const Matrix rho = ketbra(psi1.amplitudes()).transpose();
  return Strategy{Operator(rho, SubsystemShape::qubits({"A", "B"}), true),
                  phi_plus("A0", "A").projector(), phi_plus("B", "B0").projector()};
}

}  // namespace sqgame
