#pragma once

// Sampling probes for the structural lemmas. Every probe evaluates one value
// per sample from an independently derived seed, so a report's worst_seed can
// be replayed with the matching *_value function.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sqgame/game.hpp"

namespace sqgame {

/// Min eigenvalue of the partial transpose below -1e-10. 2x2 only.
bool ppt_entangled(const Operator& op);
double min_pt_eigenvalue(const Matrix& two_qubit);

struct ProbeReport {
  std::string probe;
  std::int64_t n_samples = 0;
  std::int64_t violations = 0;
  double worst_value = 0.0;
  std::uint64_t worst_seed = 0;
  std::string notes;
  std::map<std::string, double> extras;
};

// --- separable measurement propagation ------------------------------------

struct Theorem1Value {
  double min_pt_eigenvalue = 0.0;
  double witness_value = 0.0;  // Tr[W_c M~] with W_c = c0^2 I - |phi><phi|
};

/// One sample: separable mA (or mB when mirrored) built from at most three
/// product terms, arbitrary state and other measurement.
Theorem1Value theorem1_value(std::uint64_t sample_seed, bool mirrored);
ProbeReport theorem1_probe(std::int64_t n, std::uint64_t seed, bool mirrored = false);

// --- rank collapse ---------------------------------------------------------

/// Second eigenvalue of M~ for a mixed state and rank-one entangled measurements.
double lemma1_value(std::uint64_t sample_seed, double min_mix, double min_angle);
ProbeReport lemma1_probe(std::int64_t n, std::uint64_t seed, double min_mix, double min_angle);

enum class RankSide { alice, bob };

/// Second eigenvalue of M~ for a pure state, a rank-two projective
/// measurement on `side` and a rank-one measurement on the other side.
double lemma2_value(std::uint64_t sample_seed, double min_angle, RankSide side);
/// Runs n samples per side.
ProbeReport lemma2_probe(std::int64_t n, std::uint64_t seed, double min_angle);

/// Rank-one projector onto (U (x) V)(cos t|00> + sin t|11>), t uniform in
/// [min_angle, pi/2 - min_angle].
Matrix sample_entangled_projector(Rng& rng, double min_angle);

// --- overlap inequality ------------------------------------------------------

struct Lemma3Instance {
  int d_a = 2, d_b = 2;
  Vector psi;  // on A (x) B
  Vector phi_a, phi_a_bar, phi_b, phi_b_bar;
  double theta = 0.0, gamma = 0.0;  // arccos |<phi|phi_bar>| per side

  /// Largest of |<Psi|phi_a phi_b_bar>| and |<Psi|phi_a_bar phi_b>|.
  double orthogonality_residual() const;
};

Lemma3Instance lemma3_sample(int d_a, int d_b, std::uint64_t seed);
/// theta = gamma = pi/2 with Psi on span{phi_a phi_b, phi_a_bar phi_b_bar}.
Lemma3Instance lemma3_equality_instance(int d_a, int d_b, std::uint64_t seed);
/// theta = gamma = pi/2 with part of Psi outside that span. Needs d_a >= 3.
Lemma3Instance lemma3_outside_support_instance(int d_a, int d_b, std::uint64_t seed);
/// |<Psi|phi_a phi_b>|^2 + |<Psi|phi_a_bar phi_b_bar>|^2.
double lemma3_value(const Lemma3Instance& inst);
ProbeReport lemma3_check(std::int64_t n, const std::vector<std::pair<int, int>>& dims,
                         std::uint64_t seed);

// --- f(x) = a x^2 + b x sqrt(1 - c x^2) + d ----------------------------------

struct AppendixDReport {
  double theta = 0.0, gamma = 0.0;
  int grid_n = 0;
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  double x1 = 0.0, f1 = 0.0, f1_closed = 0.0;  // x = sqrt(1/c)
  double x2 = 0.0, f2 = 0.0;                   // stated interior candidate, NaN if undefined
  double x3 = 0.0, f3 = 0.0;                   // stationary point of f (diagnostic)
  double grid_max = 0.0, grid_argmax = 0.0, grid_tolerance = 0.0;
  bool below_one = false;          // grid max <= 1 + 1e-9
  bool within_candidates = false;  // grid max <= max(f1, f2) + grid tolerance
};

double appendixD_f(double a, double b, double c, double d, double x);
/// Throws ConstraintError at theta or gamma on the boundary of (0, pi/2).
AppendixDReport appendixD_scan(double theta, double gamma, int grid_n);

/// Interior n x n grid of (theta, gamma); counts cells violating either check.
ProbeReport appendixD_sweep(int n, int grid_n);

}  // namespace sqgame
