#pragma once

// Independent reference implementations used only by the tests. They work on
// raw index arithmetic and full tensor products, never on the library's
// contraction routines.

#include <cmath>
#include <vector>

#include "sqgame/qlin.hpp"

namespace oracle {

using sqgame::cplx;
using sqgame::Matrix;

// Partial trace over the subsystems whose flag is false, by explicit
// multi-index enumeration.
inline Matrix partial_trace(const Matrix& m, const std::vector<int>& dims,
                            const std::vector<bool>& keep) {
  const int n = static_cast<int>(dims.size());
  int kept = 1, total = 1;
  for (int k = 0; k < n; ++k) {
    total *= dims[k];
    if (keep[k]) kept *= dims[k];
  }
  Matrix out = Matrix::Zero(kept, kept);
  std::vector<int> ri(n), ci(n);
  for (int r = 0; r < total; ++r) {
    int rem = r;
    for (int k = n - 1; k >= 0; --k) {
      ri[k] = rem % dims[k];
      rem /= dims[k];
    }
    for (int c = 0; c < total; ++c) {
      rem = c;
      for (int k = n - 1; k >= 0; --k) {
        ci[k] = rem % dims[k];
        rem /= dims[k];
      }
      bool diagonal = true;
      int kr = 0, kc = 0;
      for (int k = 0; k < n; ++k) {
        if (keep[k]) {
          kr = kr * dims[k] + ri[k];
          kc = kc * dims[k] + ci[k];
        } else if (ri[k] != ci[k]) {
          diagonal = false;
        }
      }
      if (diagonal) out(kr, kc) += m(r, c);
    }
  }
  return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Tr_AB[(I_A0 (x) rho_AB (x) I_B0)(M_A0A (x) M_BB0)] on four qubits.
inline Matrix effective_element(const Matrix& rho, const Matrix& m_a, const Matrix& m_b) {
  const Matrix id = Matrix::Identity(2, 2);
  const Matrix big = kron(kron(id, rho), id) * kron(m_a, m_b);
  return partial_trace(big, {2, 2, 2, 2}, {true, false, false, true});
}

// Quadruple loop over the traced indices of the same expression.
inline Matrix effective_element_loops(const Matrix& rho, const Matrix& m_a, const Matrix& m_b) {
  Matrix out = Matrix::Zero(4, 4);
  for (int a0 = 0; a0 < 2; ++a0)
    for (int b0 = 0; b0 < 2; ++b0)
      for (int a0p = 0; a0p < 2; ++a0p)
        for (int b0p = 0; b0p < 2; ++b0p) {
          cplx acc = 0.0;
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              for (int ap = 0; ap < 2; ++ap)
                for (int bp = 0; bp < 2; ++bp)
                  acc += rho(a * 2 + b, ap * 2 + bp) * m_a(a0 * 2 + ap, a0p * 2 + a) *
                         m_b(bp * 2 + b0, b * 2 + b0p);
          out(a0 * 2 + b0, a0p * 2 + b0p) = acc;
        }
  return out;
}

// Tr_AB[(I_A0 (x) M_AB (x) I_B0)(rho_A0A (x) rho_BB0)].
inline Matrix swap_effective(const Matrix& m_ab, const Matrix& rho_a0a, const Matrix& rho_bb0) {
  return effective_element(m_ab, rho_a0a, rho_bb0);
}

inline Matrix pauli(int k) {
  Matrix m(2, 2);
  if (k == 0) m << 1, 0, 0, 1;
  if (k == 1) m << 0, 1, 1, 0;
  if (k == 2) m << 0, cplx(0, -1), cplx(0, 1), 0;
  if (k == 3) m << 1, 0, 0, -1;
  return m;
}

inline double fro(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

}  // namespace oracle
