#pragma once

// Seeded samplers for strategies and swap instances used by property tests.

#include "sqgame/swap.hpp"

namespace testing_support {

using namespace sqgame;

inline Matrix random_effect(int dim, Rng& rng) {
  // Half the time a rank-one projector, otherwise a mixed PSD operator <= I.
  if (rng.uniform() < 0.5) return ketbra(haar_vector(dim, rng));
  const int rank = 1 + static_cast<int>(rng.uniform() * dim) % dim;
  Matrix m = random_density_matrix(dim, rank, rng);
  return m * (rng.uniform(0.1, 1.0) / max_eigenvalue(m));
}

inline Matrix random_state(int dim, Rng& rng) {
  const int rank = 1 + static_cast<int>(rng.uniform() * dim) % dim;
  return random_density_matrix(dim, rank, rng);
}

inline Strategy random_strategy(std::uint64_t seed) {
  Rng rng(seed);
  const Matrix rho = random_state(4, rng);
  const Matrix m_a = random_effect(4, rng);
  const Matrix m_b = random_effect(4, rng);
  return make_strategy(rho, m_a, m_b);
}

inline SwapInstance random_swap_instance(std::uint64_t seed) {
  Rng rng(seed);
  const SubsystemShape joint = SubsystemShape::qubits({"A", "B"});
  const Matrix rho_a = random_state(4, rng);
  const Matrix rho_b = random_state(4, rng);
  const Matrix m = random_effect(4, rng);
  return SwapInstance{Operator(rho_a, SubsystemShape::qubits({"A0", "A"})),
                      Operator(rho_b, SubsystemShape::qubits({"B", "B0"})),
                      {Operator(m, joint), Operator(Matrix::Identity(4, 4) - m, joint)}};
}

}  // namespace testing_support
