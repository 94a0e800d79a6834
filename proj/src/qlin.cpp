#include "sqgame/qlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace sqgame {

namespace {

std::vector<std::size_t> strides_of(const std::vector<int>& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) {
    strides[k - 1] = strides[k] * static_cast<std::size_t>(dims[k]);
  }
  return strides;
}

std::size_t digit(std::size_t index, std::size_t stride, int dim) {
  return (index / stride) % static_cast<std::size_t>(dim);
}

void require_square(const Matrix& m, const SubsystemShape& shape) {
  if (m.rows() != m.cols()) {
    throw ShapeError("operator matrix is not square");
  }
  if (static_cast<std::size_t>(m.rows()) != shape.size()) {
    throw ShapeError("operator side " + std::to_string(m.rows()) +
                     " does not match shape " + to_string(shape));
  }
}

// Old-index -> new-index map for a subsystem reordering.
std::vector<std::size_t> permutation_map(const SubsystemShape& shape,
                                         std::span<const std::string> order) {
  if (order.size() != shape.rank()) {
    throw ShapeError("permutation must list every subsystem exactly once");
  }
  std::vector<std::size_t> source(order.size());
  std::set<std::string> seen;
  for (std::size_t j = 0; j < order.size(); ++j) {
    if (!seen.insert(order[j]).second) {
      throw ShapeError("duplicate label in permutation: " + order[j]);
    }
    source[j] = shape.index_of(order[j]);
  }
  const auto old_strides = strides_of(shape.dims());
  std::vector<int> new_dims(order.size());
  for (std::size_t j = 0; j < order.size(); ++j) new_dims[j] = shape.dims()[source[j]];
  const auto new_strides = strides_of(new_dims);

  std::vector<std::size_t> map(shape.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    std::size_t target = 0;
    for (std::size_t j = 0; j < order.size(); ++j) {
      const std::size_t k = source[j];
      target += digit(i, old_strides[k], shape.dims()[k]) * new_strides[j];
    }
    map[i] = target;
  }
  return map;
}

}  // namespace

// ---------------------------------------------------------------------------
// SubsystemShape

SubsystemShape::SubsystemShape(std::vector<std::string> labels, std::vector<int> dims)
    : labels_(std::move(labels)), dims_(std::move(dims)) {
  if (labels_.size() != dims_.size()) {
    throw ShapeError("labels and dims differ in length");
  }
  std::set<std::string> seen;
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (dims_[k] <= 0) throw ShapeError("subsystem dimension must be positive");
    if (!seen.insert(labels_[k]).second) {
      throw ShapeError("label collision: " + labels_[k]);
    }
  }
}

SubsystemShape SubsystemShape::qubits(std::initializer_list<std::string> labels) {
  return SubsystemShape(std::vector<std::string>(labels),
                        std::vector<int>(labels.size(), 2));
}

std::size_t SubsystemShape::size() const {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1},
                         [](std::size_t acc, int d) { return acc * static_cast<std::size_t>(d); });
}

bool SubsystemShape::contains(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t SubsystemShape::index_of(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw ShapeError("unknown subsystem label: " + std::string(label));
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

int SubsystemShape::dim_of(std::string_view label) const { return dims_[index_of(label)]; }

SubsystemShape SubsystemShape::subset(std::span<const std::string> labels) const {
  for (const auto& l : labels) index_of(l);
  std::vector<std::string> out_labels;
  std::vector<int> out_dims;
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (std::find(labels.begin(), labels.end(), labels_[k]) != labels.end()) {
      out_labels.push_back(labels_[k]);
      out_dims.push_back(dims_[k]);
    }
  }
  return SubsystemShape(std::move(out_labels), std::move(out_dims));
}

SubsystemShape SubsystemShape::reordered(std::span<const std::string> order) const {
  std::vector<std::string> out_labels(order.begin(), order.end());
  std::vector<int> out_dims;
  for (const auto& l : order) out_dims.push_back(dim_of(l));
  return SubsystemShape(std::move(out_labels), std::move(out_dims));
}

SubsystemShape SubsystemShape::concat(const SubsystemShape& other) const {
  auto labels = labels_;
  auto dims = dims_;
  labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
  dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
  return SubsystemShape(std::move(labels), std::move(dims));
}

std::string to_string(const SubsystemShape& shape) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < shape.rank(); ++k) {
    if (k) os << ", ";
    os << shape.labels()[k] << ':' << shape.dims()[k];
  }
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// Operator / Ket

Operator::Operator(Matrix entries, SubsystemShape shape)
    : entries_(std::move(entries)), shape_(std::move(shape)) {
  require_square(entries_, shape_);
  hermitian_ = hermiticity_defect(entries_) <= kTol.structural;
}

Operator::Operator(Matrix entries, SubsystemShape shape, bool hermitian)
    : entries_(std::move(entries)), shape_(std::move(shape)), hermitian_(hermitian) {
  require_square(entries_, shape_);
  if (hermitian_ && hermiticity_defect(entries_) > kTol.structural) {
    throw ConstraintError("operator flagged Hermitian but |X - X^dag| = " +
                          std::to_string(hermiticity_defect(entries_)));
  }
}

Operator Operator::identity(const SubsystemShape& shape) {
  const auto n = static_cast<Eigen::Index>(shape.size());
  return Operator(Matrix::Identity(n, n), shape, true);
}

Operator Operator::relabelled(std::vector<std::string> labels) const {
  return Operator(entries_, SubsystemShape(std::move(labels), shape_.dims()), hermitian_);
}

Ket::Ket(Vector amplitudes, SubsystemShape shape, NormKind kind)
    : amplitudes_(std::move(amplitudes)), shape_(std::move(shape)), kind_(kind) {
  if (static_cast<std::size_t>(amplitudes_.size()) != shape_.size()) {
    throw ShapeError("ket length does not match shape " + to_string(shape_));
  }
  const double n = amplitudes_.norm();
  if (kind_ == NormKind::unit && std::abs(n - 1.0) > kTol.structural) {
    throw ConstraintError("unit ket has norm " + std::to_string(n));
  }
  if (kind_ == NormKind::subnormalized && n > 1.0 + kTol.structural) {
    throw ConstraintError("subnormalized ket has norm " + std::to_string(n));
  }
}

Operator Ket::projector() const { return Operator(ketbra(amplitudes_), shape_, true); }

Ket Ket::relabelled(std::vector<std::string> labels) const {
  return Ket(amplitudes_, SubsystemShape(std::move(labels), shape_.dims()), kind_);
}

// ---------------------------------------------------------------------------
// Structural operations

Operator tensor(std::span<const Operator> ops) {
  if (ops.empty()) throw ShapeError("tensor of an empty list");
  Matrix m = ops.front().matrix();
  SubsystemShape shape = ops.front().shape();
  bool herm = ops.front().hermitian();
  for (std::size_t k = 1; k < ops.size(); ++k) {
    m = kron(m, ops[k].matrix());
    shape = shape.concat(ops[k].shape());
    herm = herm && ops[k].hermitian();
  }
  return Operator(std::move(m), std::move(shape), herm);
}

Operator tensor(const Operator& a, const Operator& b) {
  const Operator ops[] = {a, b};
  return tensor(ops);
}

Ket tensor(const Ket& a, const Ket& b) {
  Vector v(a.amplitudes().size() * b.amplitudes().size());
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) {
    v.segment(i * b.amplitudes().size(), b.amplitudes().size()) =
        a.amplitudes()(i) * b.amplitudes();
  }
  const bool unit = a.norm_kind() == NormKind::unit && b.norm_kind() == NormKind::unit;
  return Ket(std::move(v), a.shape().concat(b.shape()),
             unit ? NormKind::unit : NormKind::subnormalized);
}

Operator permute(const Operator& op, std::span<const std::string> order) {
  const auto map = permutation_map(op.shape(), order);
  const auto n = op.side();
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j])) = op.matrix()(i, j);
    }
  }
  return Operator(std::move(out), op.shape().reordered(order), op.hermitian());
}

Ket permute(const Ket& v, std::span<const std::string> order) {
  const auto map = permutation_map(v.shape(), order);
  Vector out(v.amplitudes().size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out(static_cast<Eigen::Index>(map[i])) = v.amplitudes()(i);
  }
  return Ket(std::move(out), v.shape().reordered(order), v.norm_kind());
}

Operator partial_trace(const Operator& op, std::span<const std::string> keep) {
  if (keep.empty()) {
    throw ShapeError("partial trace with empty keep set; use the full trace");
  }
  const auto& shape = op.shape();
  const SubsystemShape kept = shape.subset(keep);
  if (kept.rank() != keep.size()) throw ShapeError("duplicate label in keep set");

  const auto strides = strides_of(shape.dims());
  const auto n = static_cast<std::size_t>(op.side());
  // Split each full index into (kept index, traced index).
  std::vector<std::size_t> kept_index(n, 0), traced_index(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t ki = 0, ti = 0;
    for (std::size_t k = 0; k < shape.rank(); ++k) {
      const std::size_t d = digit(i, strides[k], shape.dims()[k]);
      const auto dim = static_cast<std::size_t>(shape.dims()[k]);
      if (kept.contains(shape.labels()[k])) {
        ki = ki * dim + d;
      } else {
        ti = ti * dim + d;
      }
    }
    kept_index[i] = ki;
    traced_index[i] = ti;
  }

  const auto m = static_cast<Eigen::Index>(kept.size());
  Matrix out = Matrix::Zero(m, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (traced_index[i] != traced_index[j]) continue;
      out(static_cast<Eigen::Index>(kept_index[i]), static_cast<Eigen::Index>(kept_index[j])) +=
          op.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return Operator(std::move(out), kept, op.hermitian());
}

Operator partial_trace(const Operator& op, std::initializer_list<std::string> keep) {
  const std::vector<std::string> v(keep);
  return partial_trace(op, std::span<const std::string>(v));
}

Operator partial_transpose(const Operator& op, std::string_view subsystem) {
  const auto& shape = op.shape();
  const std::size_t k = shape.index_of(subsystem);
  const auto strides = strides_of(shape.dims());
  const auto n = op.side();
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto di = digit(static_cast<std::size_t>(i), strides[k], shape.dims()[k]);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto dj = digit(static_cast<std::size_t>(j), strides[k], shape.dims()[k]);
      const auto shift = (static_cast<Eigen::Index>(dj) - static_cast<Eigen::Index>(di)) *
                         static_cast<Eigen::Index>(strides[k]);
      // Swap the k-th digit between row and column index.
      out(i + shift, j - shift) = op.matrix()(i, j);
    }
  }
  return Operator(std::move(out), shape, op.hermitian());
}

Spectrum eig_hermitian(const Operator& op) {
  if (!op.hermitian()) throw ConstraintError("eig_hermitian on a non-Hermitian operator");
  return eig_hermitian(op.matrix());
}

Spectrum eig_hermitian(const Matrix& m) {
  if (hermiticity_defect(m) > kTol.structural * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    throw ConstraintError("eig_hermitian on a non-Hermitian matrix");
  }
  const Matrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  const auto n = sym.rows();
  Spectrum s;
  s.eigenvalues.resize(n);
  s.eigenvectors.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;
    s.eigenvalues(k) = solver.eigenvalues()(src);
    Vector v = solver.eigenvectors().col(src);
    fix_phase(v);
    s.eigenvectors.push_back(std::move(v));
  }
  return s;
}

SchmidtForm schmidt(const Ket& v, std::span<const std::string> left) {
  const auto& shape = v.shape();
  if (left.empty() || left.size() >= shape.rank()) {
    throw ShapeError("Schmidt cut must leave both sides nonempty");
  }
  std::vector<std::string> order(left.begin(), left.end());
  for (const auto& l : shape.labels()) {
    if (std::find(left.begin(), left.end(), l) == left.end()) order.push_back(l);
  }
  const Ket ordered = permute(v, order);  // validates labels
  const std::vector<std::string> left_labels(order.begin(), order.begin() + static_cast<long>(left.size()));
  const std::vector<std::string> right_labels(order.begin() + static_cast<long>(left.size()), order.end());
  const SubsystemShape lshape = shape.reordered(left_labels);
  const SubsystemShape rshape = shape.reordered(right_labels);
  const auto dl = static_cast<Eigen::Index>(lshape.size());
  const auto dr = static_cast<Eigen::Index>(rshape.size());

  Matrix amp(dl, dr);
  for (Eigen::Index i = 0; i < dl; ++i) {
    for (Eigen::Index j = 0; j < dr; ++j) amp(i, j) = ordered.amplitudes()(i * dr + j);
  }
  Eigen::JacobiSVD<Matrix> svd(amp, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SchmidtForm form;
  const auto terms = std::min(dl, dr);
  for (Eigen::Index k = 0; k < terms; ++k) {
    form.coefficients.push_back(svd.singularValues()(k));
    form.left_basis.emplace_back(Vector(svd.matrixU().col(k)), lshape);
    form.right_basis.emplace_back(Vector(svd.matrixV().col(k).conjugate()), rshape);
  }
  form.angle = std::atan2(form.coefficients.size() > 1 ? form.coefficients[1] : 0.0,
                          form.coefficients[0]);
  return form;
}

SchmidtForm schmidt(const Ket& v, std::initializer_list<std::string> left) {
  const std::vector<std::string> l(left);
  return schmidt(v, std::span<const std::string>(l));
}

// ---------------------------------------------------------------------------
// Helpers

Matrix ketbra(const Vector& v) { return v * v.adjoint(); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (hermitian + hermitian.adjoint()),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double max_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (hermitian + hermitian.adjoint()),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

void fix_phase(Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-8) {
      v *= std::conj(v(i)) / mag;
      v(i) = cplx(mag, 0.0);
      return;
    }
  }
}

double frobenius_distance(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

// ---------------------------------------------------------------------------
// Sampling

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vector haar_vector(int dim, Rng& rng) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

Matrix haar_unitary(int dim, Rng& rng) {
  Matrix z(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) z(i, j) = rng.complex_normal();
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

Matrix random_density_matrix(int dim, int rank, Rng& rng) {
  if (rank <= 0) throw ConstraintError("density rank must be positive");
  if (rank > dim) throw ConstraintError("density rank exceeds dimension");
  RealVector weights = RealVector::Zero(dim);
  double total = 0.0;
  for (int k = 0; k < rank; ++k) {
    weights(k) = -std::log(1.0 - rng.uniform());
    total += weights(k);
  }
  weights /= total;
  const Matrix u = haar_unitary(dim, rng);
  Matrix rho = u * weights.cast<cplx>().asDiagonal() * u.adjoint();
  return 0.5 * (rho + rho.adjoint());
}

Ket random_ket(const SubsystemShape& shape, std::uint64_t seed) {
  Rng rng(seed);
  return Ket(haar_vector(static_cast<int>(shape.size()), rng), shape);
}

Operator random_density(const SubsystemShape& shape, int rank, std::uint64_t seed) {
  Rng rng(seed);
  return Operator(random_density_matrix(static_cast<int>(shape.size()), rank, rng), shape, true);
}

Operator random_unitary(const SubsystemShape& shape, std::uint64_t seed) {
  Rng rng(seed);
  return Operator(haar_unitary(static_cast<int>(shape.size()), rng), shape, false);
}

}  // namespace sqgame
