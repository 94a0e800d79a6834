#pragma once

// Dense complex linear algebra over small labelled tensor-product spaces.
//
// Every operator and ket carries a SubsystemShape: an ordered list of
// (label, dimension) pairs. The basis of the full space is the lexicographic
// product basis in declared label order, i.e. for labels (A0, A) with dims
// (2, 3) the basis index is a0 * 3 + a.

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sqgame/errors.hpp"

namespace sqgame {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerances shared by every module. Acceptance runs tune these here only.
struct NumericPolicy {
  double structural = 1e-12;
  double spectral = 1e-10;
  double reconstruction = 1e-9;
};

inline constexpr NumericPolicy kTol{};

class SubsystemShape {
 public:
  SubsystemShape() = default;
  SubsystemShape(std::vector<std::string> labels, std::vector<int> dims);

  /// Shape made of two-dimensional factors with the given labels.
  static SubsystemShape qubits(std::initializer_list<std::string> labels);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& dims() const { return dims_; }
  std::size_t rank() const { return labels_.size(); }
  /// Product of all dimensions.
  std::size_t size() const;

  bool contains(std::string_view label) const;
  std::size_t index_of(std::string_view label) const;
  int dim_of(std::string_view label) const;

  /// Shape restricted to `labels`, kept in this shape's declared order.
  SubsystemShape subset(std::span<const std::string> labels) const;
  SubsystemShape reordered(std::span<const std::string> order) const;
  SubsystemShape concat(const SubsystemShape& other) const;

  bool operator==(const SubsystemShape&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<int> dims_;
};

std::string to_string(const SubsystemShape& shape);

class Operator {
 public:
  Operator() = default;
  /// Hermiticity is detected from the entries (structural tolerance).
  Operator(Matrix entries, SubsystemShape shape);
  /// Explicit flag; a set flag is validated against the entries.
  Operator(Matrix entries, SubsystemShape shape, bool hermitian);

  static Operator identity(const SubsystemShape& shape);

  const Matrix& matrix() const { return entries_; }
  const SubsystemShape& shape() const { return shape_; }
  bool hermitian() const { return hermitian_; }
  Eigen::Index side() const { return entries_.rows(); }

  cplx trace() const { return entries_.trace(); }
  /// Same entries under new labels (dims must match).
  Operator relabelled(std::vector<std::string> labels) const;

 private:
  Matrix entries_;
  SubsystemShape shape_;
  bool hermitian_ = false;
};

enum class NormKind { unit, subnormalized };

class Ket {
 public:
  Ket() = default;
  Ket(Vector amplitudes, SubsystemShape shape, NormKind kind = NormKind::unit);

  const Vector& amplitudes() const { return amplitudes_; }
  const SubsystemShape& shape() const { return shape_; }
  NormKind norm_kind() const { return kind_; }
  double norm() const { return amplitudes_.norm(); }

  /// |v><v| as a Hermitian operator with the ket's shape.
  Operator projector() const;
  Ket relabelled(std::vector<std::string> labels) const;

 private:
  Vector amplitudes_;
  SubsystemShape shape_;
  NormKind kind_ = NormKind::unit;
};

struct Spectrum {
  RealVector eigenvalues;        // descending
  std::vector<Vector> eigenvectors;  // phase-fixed, orthonormal
};

struct SchmidtForm {
  std::vector<double> coefficients;  // descending, nonnegative
  std::vector<Ket> left_basis;
  std::vector<Ket> right_basis;
  // atan2(c1, c0): arccos of the larger normalised coefficient, in [0, pi/4].
  double angle = 0.0;
};

// ---------------------------------------------------------------------------
// Structural operations

Operator tensor(std::span<const Operator> ops);
Operator tensor(const Operator& a, const Operator& b);
Ket tensor(const Ket& a, const Ket& b);

/// Reorders subsystems; `order` must be a permutation of the shape's labels.
Operator permute(const Operator& op, std::span<const std::string> order);
Ket permute(const Ket& v, std::span<const std::string> order);

/// Traces out every subsystem not in `keep`. Kept subsystems retain their
/// declared order. An empty keep set is rejected; use Operator::trace().
Operator partial_trace(const Operator& op, std::span<const std::string> keep);
Operator partial_trace(const Operator& op, std::initializer_list<std::string> keep);

Operator partial_transpose(const Operator& op, std::string_view subsystem);

Spectrum eig_hermitian(const Operator& op);
Spectrum eig_hermitian(const Matrix& m);

/// Schmidt decomposition across the cut `left | rest`.
SchmidtForm schmidt(const Ket& v, std::span<const std::string> left);
SchmidtForm schmidt(const Ket& v, std::initializer_list<std::string> left);

// ---------------------------------------------------------------------------
// Small helpers

Matrix ketbra(const Vector& v);
Matrix kron(const Matrix& a, const Matrix& b);
double hermiticity_defect(const Matrix& m);
double min_eigenvalue(const Matrix& hermitian);
double max_eigenvalue(const Matrix& hermitian);
/// Multiplies `v` by a phase so its first component with modulus > 1e-8 is
/// real and positive.
void fix_phase(Vector& v);
double frobenius_distance(const Matrix& a, const Matrix& b);

// ---------------------------------------------------------------------------
// Seeded sampling

/// Deterministic stream for a 64-bit seed. Distinct logical draws derive their
/// own seeds through derive_seed so parallel consumers partition seed space.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  cplx complex_normal() { return {normal(), normal()}; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// splitmix64 of (seed, counter); the counter-based seed derivation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter);

Vector haar_vector(int dim, Rng& rng);
Matrix haar_unitary(int dim, Rng& rng);
/// Unitary-conjugated diagonal of a flat Dirichlet weight vector, truncated to
/// `rank` nonzero weights.
Matrix random_density_matrix(int dim, int rank, Rng& rng);

Ket random_ket(const SubsystemShape& shape, std::uint64_t seed);
Operator random_density(const SubsystemShape& shape, int rank, std::uint64_t seed);
Operator random_unitary(const SubsystemShape& shape, std::uint64_t seed);

}  // namespace sqgame
