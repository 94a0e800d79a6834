#include "sqgame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sqgame/parallel.hpp"

namespace sqgame {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

int uniform_int(Rng& rng, int lo, int hi) {
  const int span = hi - lo + 1;
  return lo + std::min(span - 1, static_cast<int>(rng.uniform() * span));
}

Vector vkron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix random_effect(int dim, Rng& rng) {
  Matrix m = random_density_matrix(dim, uniform_int(rng, 1, dim), rng);
  return m * (rng.uniform(0.2, 1.0) / max_eigenvalue(m));
}

Vector entangled_vector(Rng& rng, double min_angle) {
  const double t = rng.uniform(min_angle, kHalfPi - min_angle);
  Vector v = Vector::Zero(4);
  v(0) = std::cos(t);
  v(3) = std::sin(t);
  return kron(haar_unitary(2, rng), haar_unitary(2, rng)) * v;
}

double schmidt_angle_2x2(const Vector& v) {
  Matrix m(2, 2);
  m << v(0), v(1), v(2), v(3);
  const Eigen::Vector2d s = Eigen::JacobiSVD<Matrix>(m).singularValues();
  return std::atan2(s(1), s(0));
}

double second_eigenvalue(const Matrix& m) { return eig_hermitian(m).eigenvalues(1); }

Matrix contract(const Matrix& rho, const Matrix& m_a, const Matrix& m_b) {
  Matrix out = contract_outer(rho, m_a, m_b, TripleDims{});
  return 0.5 * (out + out.adjoint());
}

// Unit vector orthogonal to every column of `basis` (orthonormal columns).
Vector orthogonal_haar(const Matrix& basis, int dim, Rng& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Vector v = haar_vector(dim, rng);
    for (int pass = 0; pass < 2; ++pass) v -= basis * (basis.adjoint() * v);
    const double n = v.norm();
    if (n > 1e-6) return v / n;
  }
  throw NumericalError("could not sample a vector in the orthogonal complement");
}

Matrix columns(std::initializer_list<Vector> vs) {
  Matrix m(vs.begin()->size(), static_cast<Eigen::Index>(vs.size()));
  Eigen::Index k = 0;
  for (const Vector& v : vs) m.col(k++) = v;
  return m;
}

double overlap_angle(const Vector& u, const Vector& v) {
  return std::acos(std::min(1.0, std::abs(u.dot(v))));
}

// Evaluates `value(i)` for every sample in parallel, then reduces serially so
// the result does not depend on the worker count.
template <typename Value>
std::vector<double> sample_all(std::int64_t n, Value&& value) {
  std::vector<double> out(static_cast<std::size_t>(n));
  parallel_for(out.size(), [&](std::size_t i) { out[i] = value(i); });
  return out;
}

}  // namespace

double min_pt_eigenvalue(const Matrix& m) {
  if (m.rows() != 4 || m.cols() != 4) throw ShapeError("partial transpose check needs a 4x4 operator");
  Matrix pt(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp) pt(a * 2 + b, ap * 2 + bp) = m(a * 2 + bp, ap * 2 + b);
  return min_eigenvalue(0.5 * (pt + pt.adjoint()));
}

bool ppt_entangled(const Operator& op) {
  if (op.shape().rank() != 2 || op.shape().dims() != std::vector<int>{2, 2}) {
    throw ShapeError("ppt_entangled needs a 2x2 operator, got " + to_string(op.shape()));
  }
  return min_pt_eigenvalue(op.matrix()) < -1e-10;
}

// ---------------------------------------------------------------------------

Theorem1Value theorem1_value(std::uint64_t sample_seed, bool mirrored) {
  Rng rng(sample_seed);
  Matrix separable = Matrix::Zero(4, 4);
  const int terms = uniform_int(rng, 1, 3);
  for (int k = 0; k < terms; ++k) {
    const Matrix n0 = random_density_matrix(2, uniform_int(rng, 1, 2), rng);
    const Matrix n1 = random_density_matrix(2, uniform_int(rng, 1, 2), rng);
    separable += rng.uniform() * kron(n0, n1);
  }
  separable *= rng.uniform(0.2, 1.0) / max_eigenvalue(separable);
  const Matrix rho = random_density_matrix(4, uniform_int(rng, 1, 4), rng);
  const Matrix other = random_effect(4, rng);
  const Matrix m = mirrored ? contract(rho, other, separable) : contract(rho, separable, other);

  const Vector phi = haar_vector(4, rng);
  Matrix coeffs(2, 2);
  coeffs << phi(0), phi(1), phi(2), phi(3);
  const double c0 = Eigen::JacobiSVD<Matrix>(coeffs).singularValues()(0);
  const Matrix witness = c0 * c0 * Matrix::Identity(4, 4) - ketbra(phi);
  return {min_pt_eigenvalue(m), (witness * m).trace().real()};
}

ProbeReport theorem1_probe(std::int64_t n, std::uint64_t seed, bool mirrored) {
  if (n < 1) throw ConstraintError("probe needs n >= 1");
  std::vector<Theorem1Value> values(static_cast<std::size_t>(n));
  parallel_for(values.size(), [&](std::size_t i) {
    values[i] = theorem1_value(derive_seed(seed, i), mirrored);
  });
  ProbeReport rep;
  rep.probe = mirrored ? "theorem1_mirrored" : "theorem1";
  rep.n_samples = n;
  rep.worst_value = std::numeric_limits<double>::infinity();
  double worst_witness = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Theorem1Value& v = values[i];
    if (v.min_pt_eigenvalue < -1e-9 || v.witness_value < -1e-9) ++rep.violations;
    if (v.min_pt_eigenvalue < rep.worst_value) {
      rep.worst_value = v.min_pt_eigenvalue;
      rep.worst_seed = derive_seed(seed, i);
    }
    worst_witness = std::min(worst_witness, v.witness_value);
  }
  rep.extras["min_witness_value"] = worst_witness;
  rep.notes = std::string("separable ") + (mirrored ? "m_B" : "m_A") +
              "; worst_value is the smallest partial-transpose eigenvalue of M~; "
              "violation when it or Tr[W_c M~] is below -1e-9";
  return rep;
}

// ---------------------------------------------------------------------------

Matrix sample_entangled_projector(Rng& rng, double min_angle) {
  return ketbra(entangled_vector(rng, min_angle));
}

double lemma1_value(std::uint64_t sample_seed, double min_mix, double min_angle) {
  Rng rng(sample_seed);
  Eigen::Vector4d w;
  for (int k = 0; k < 4; ++k) w(k) = -std::log(1.0 - rng.uniform());
  w /= w.sum();
  const Eigen::Vector4d spectrum =
      (1.0 - 2.0 * min_mix) * w + min_mix * Eigen::Vector4d(1.0, 1.0, 0.0, 0.0);
  const Matrix u = haar_unitary(4, rng);
  const Matrix rho = u * spectrum.cast<cplx>().asDiagonal() * u.adjoint();
  const Matrix m_a = sample_entangled_projector(rng, min_angle);
  const Matrix m_b = sample_entangled_projector(rng, min_angle);
  return second_eigenvalue(contract(rho, m_a, m_b));
}

namespace {

void check_probe_args(std::int64_t n, double min_angle) {
  if (n < 1) throw ConstraintError("probe needs n >= 1");
  if (!(min_angle > 0.0) || min_angle > std::numbers::pi / 4) {
    throw ConstraintError("min_angle must lie in (0, pi/4]");
  }
}

void reduce_min(ProbeReport& rep, const std::vector<double>& values,
                const std::vector<std::uint64_t>& seeds, double threshold) {
  rep.worst_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > threshold)) ++rep.violations;
    if (values[i] < rep.worst_value) {
      rep.worst_value = values[i];
      rep.worst_seed = seeds[i];
    }
  }
}

}  // namespace

ProbeReport lemma1_probe(std::int64_t n, std::uint64_t seed, double min_mix, double min_angle) {
  check_probe_args(n, min_angle);
  if (!(min_mix > 0.0) || min_mix > 0.5) throw ConstraintError("min_mix must lie in (0, 0.5]");
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = derive_seed(seed, i);
  const auto values = sample_all(n, [&](std::size_t i) {
    return lemma1_value(seeds[i], min_mix, min_angle);
  });
  ProbeReport rep;
  rep.probe = "lemma1";
  rep.n_samples = n;
  reduce_min(rep, values, seeds, 1e-8);
  rep.notes = "worst_value is the smallest second eigenvalue of M~ over mixed states "
              "and rank-one entangled measurements; violation when it is <= 1e-8";
  return rep;
}

double lemma2_value(std::uint64_t sample_seed, double min_angle, RankSide side) {
  Rng rng(sample_seed);
  const Matrix rho = sample_entangled_projector(rng, min_angle);
  const Vector v1 = entangled_vector(rng, min_angle);
  Vector v2;
  bool found = false;
  for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
    v2 = orthogonal_haar(columns({v1}), 4, rng);
    found = schmidt_angle_2x2(v2) >= min_angle;
  }
  if (!found) throw NumericalError("rank-two sampler found no entangled orthogonal vector");
  const Matrix rank_two = ketbra(v1) + ketbra(v2);
  const Matrix rank_one = sample_entangled_projector(rng, min_angle);
  return side == RankSide::alice ? second_eigenvalue(contract(rho, rank_two, rank_one))
                                 : second_eigenvalue(contract(rho, rank_one, rank_two));
}

ProbeReport lemma2_probe(std::int64_t n, std::uint64_t seed, double min_angle) {
  check_probe_args(n, min_angle);
  const auto total = static_cast<std::size_t>(2 * n);
  std::vector<std::uint64_t> seeds(total);
  for (std::size_t i = 0; i < total; ++i) seeds[i] = derive_seed(seed, i);
  const auto values = sample_all(2 * n, [&](std::size_t i) {
    const RankSide side = i < static_cast<std::size_t>(n) ? RankSide::alice : RankSide::bob;
    return lemma2_value(seeds[i], min_angle, side);
  });
  ProbeReport rep;
  rep.probe = "lemma2";
  rep.n_samples = 2 * n;
  reduce_min(rep, values, seeds, 1e-8);
  double worst_side = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    if (seeds[i] == rep.worst_seed) worst_side = i < static_cast<std::size_t>(n) ? 0.0 : 1.0;
  }
  rep.extras["worst_side"] = worst_side;
  rep.notes = "first n samples put the rank-two measurement on Alice, the rest on Bob "
              "(worst_side 0/1); violation when the second eigenvalue of M~ is <= 1e-8";
  return rep;
}

// ---------------------------------------------------------------------------

double Lemma3Instance::orthogonality_residual() const {
  return std::max(std::abs(vkron(phi_a, phi_b_bar).dot(psi)),
                  std::abs(vkron(phi_a_bar, phi_b).dot(psi)));
}

namespace {

void check_dims(int d_a, int d_b) {
  if (d_a < 2 || d_b < 2) throw ConstraintError("lemma3 dimensions must be >= 2");
}

}  // namespace

Lemma3Instance lemma3_sample(int d_a, int d_b, std::uint64_t seed) {
  check_dims(d_a, d_b);
  Rng rng(seed);
  Lemma3Instance inst;
  inst.d_a = d_a;
  inst.d_b = d_b;
  inst.phi_a = haar_vector(d_a, rng);
  inst.phi_a_bar = haar_vector(d_a, rng);
  inst.phi_b = haar_vector(d_b, rng);
  inst.phi_b_bar = haar_vector(d_b, rng);
  const Matrix constraints =
      columns({vkron(inst.phi_a, inst.phi_b_bar), vkron(inst.phi_a_bar, inst.phi_b)});
  const Eigen::HouseholderQR<Matrix> qr(constraints);
  const Matrix q = qr.householderQ() * Matrix::Identity(constraints.rows(), 2);
  inst.psi = orthogonal_haar(q, d_a * d_b, rng);
  inst.theta = overlap_angle(inst.phi_a, inst.phi_a_bar);
  inst.gamma = overlap_angle(inst.phi_b, inst.phi_b_bar);
  return inst;
}

Lemma3Instance lemma3_equality_instance(int d_a, int d_b, std::uint64_t seed) {
  check_dims(d_a, d_b);
  Rng rng(seed);
  Lemma3Instance inst;
  inst.d_a = d_a;
  inst.d_b = d_b;
  inst.phi_a = haar_vector(d_a, rng);
  inst.phi_a_bar = orthogonal_haar(columns({inst.phi_a}), d_a, rng);
  inst.phi_b = haar_vector(d_b, rng);
  inst.phi_b_bar = orthogonal_haar(columns({inst.phi_b}), d_b, rng);
  const double t = rng.uniform(0.0, kHalfPi);
  const cplx phase = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
  inst.psi = std::cos(t) * vkron(inst.phi_a, inst.phi_b) +
             phase * std::sin(t) * vkron(inst.phi_a_bar, inst.phi_b_bar);
  inst.psi.normalize();
  inst.theta = inst.gamma = kHalfPi;
  return inst;
}

Lemma3Instance lemma3_outside_support_instance(int d_a, int d_b, std::uint64_t seed) {
  if (d_a < 3) throw ConstraintError("outside-support construction needs d_a >= 3");
  Lemma3Instance inst = lemma3_equality_instance(d_a, d_b, seed);
  Rng rng(derive_seed(seed, 1));
  const Vector xi = orthogonal_haar(columns({inst.phi_a, inst.phi_a_bar}), d_a, rng);
  const double w0 = rng.uniform(0.2, 1.0), w1 = rng.uniform(0.2, 1.0), w2 = rng.uniform(0.2, 1.0);
  inst.psi = w0 * vkron(inst.phi_a, inst.phi_b) + w1 * vkron(inst.phi_a_bar, inst.phi_b_bar) +
             w2 * vkron(xi, inst.phi_b);
  inst.psi.normalize();
  return inst;
}

double lemma3_value(const Lemma3Instance& inst) {
  return std::norm(vkron(inst.phi_a, inst.phi_b).dot(inst.psi)) +
         std::norm(vkron(inst.phi_a_bar, inst.phi_b_bar).dot(inst.psi));
}

ProbeReport lemma3_check(std::int64_t n, const std::vector<std::pair<int, int>>& dims,
                         std::uint64_t seed) {
  if (n < 1) throw ConstraintError("probe needs n >= 1");
  if (dims.empty()) throw ConstraintError("lemma3_check needs at least one dimension pair");
  for (const auto& [da, db] : dims) check_dims(da, db);

  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = derive_seed(seed, i);
  std::vector<double> residuals(seeds.size());
  const auto values = sample_all(n, [&](std::size_t i) {
    const auto& [da, db] = dims[i % dims.size()];
    const Lemma3Instance inst = lemma3_sample(da, db, seeds[i]);
    residuals[i] = inst.orthogonality_residual();
    return lemma3_value(inst);
  });

  ProbeReport rep;
  rep.probe = "lemma3";
  rep.n_samples = n;
  rep.worst_value = -std::numeric_limits<double>::infinity();
  double worst_residual = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 1.0 + 1e-9 || residuals[i] > 1e-10) ++rep.violations;
    if (values[i] > rep.worst_value) {
      rep.worst_value = values[i];
      rep.worst_seed = seeds[i];
    }
    worst_residual = std::max(worst_residual, residuals[i]);
  }

  double equality_deviation = 0.0;
  double outside_max = -1.0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const auto& [da, db] = dims[k];
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(n) + k);
    equality_deviation =
        std::max(equality_deviation, std::abs(lemma3_value(lemma3_equality_instance(da, db, s)) - 1.0));
    if (da >= 3) {
      outside_max = std::max(outside_max, lemma3_value(lemma3_outside_support_instance(da, db, s)));
    }
  }
  if (equality_deviation > 1e-12) ++rep.violations;
  rep.extras["max_orthogonality_residual"] = worst_residual;
  rep.extras["equality_max_deviation"] = equality_deviation;
  if (outside_max >= 0.0) rep.extras["outside_support_max"] = outside_max;
  rep.notes = "worst_value is the largest L seen; violation when L > 1 + 1e-9, an "
              "orthogonality residual exceeds 1e-10, or an equality construction misses 1 by "
              "more than 1e-12";
  return rep;
}

// ---------------------------------------------------------------------------

double appendixD_f(double a, double b, double c, double d, double x) {
  return a * x * x + b * x * std::sqrt(std::max(0.0, 1.0 - c * x * x)) + d;
}

AppendixDReport appendixD_scan(double theta, double gamma, int grid_n) {
  if (!(theta > 0.0 && theta < kHalfPi) || !(gamma > 0.0 && gamma < kHalfPi)) {
    throw ConstraintError("theta and gamma must lie strictly inside (0, pi/2); "
                          "use the exact-orthogonality branch on the boundary");
  }
  if (grid_n < 10) throw ConstraintError("grid_n must be >= 10");
  AppendixDReport r;
  r.theta = theta;
  r.gamma = gamma;
  r.grid_n = grid_n;
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sg = std::sin(gamma), cg = std::cos(gamma);
  r.a = 2.0 * ct * ct * cg * cg;
  r.b = 2.0 * st * ct * sg * cg;
  r.c = 1.0 + (cg * cg) / (sg * sg) + (ct * ct) / (st * st);
  r.d = st * st * sg * sg;

  const double root = std::sqrt(r.a * r.a + r.b * r.b * r.c);
  r.x1 = std::sqrt(1.0 / r.c);
  r.f1 = appendixD_f(r.a, r.b, r.c, r.d, r.x1);
  r.f1_closed = (1.0 + ct * ct * cg * cg) / r.c;
  const double inner_minus = 1.0 / (2.0 * r.c) - (r.a / (2.0 * r.c)) / root;
  r.x2 = inner_minus >= 0.0 ? std::sqrt(inner_minus) : std::numeric_limits<double>::quiet_NaN();
  r.f2 = std::isnan(r.x2) ? r.x2 : appendixD_f(r.a, r.b, r.c, r.d, r.x2);
  r.x3 = std::sqrt(std::min(1.0 / r.c, 1.0 / (2.0 * r.c) + (r.a / (2.0 * r.c)) / root));
  r.f3 = appendixD_f(r.a, r.b, r.c, r.d, r.x3);

  r.grid_max = -std::numeric_limits<double>::infinity();
  double previous = 0.0;
  for (int k = 0; k <= grid_n; ++k) {
    const double x = r.x1 * static_cast<double>(k) / grid_n;
    const double f = appendixD_f(r.a, r.b, r.c, r.d, x);
    if (f > r.grid_max) {
      r.grid_max = f;
      r.grid_argmax = x;
    }
    if (k > 0) r.grid_tolerance = std::max(r.grid_tolerance, std::abs(f - previous));
    previous = f;
  }
  const double best_candidate = std::isnan(r.f2) ? r.f1 : std::max(r.f1, r.f2);
  r.below_one = r.grid_max <= 1.0 + 1e-9;
  r.within_candidates = r.grid_max <= best_candidate + r.grid_tolerance;
  return r;
}

ProbeReport appendixD_sweep(int n, int grid_n) {
  if (n < 1) throw ConstraintError("sweep needs n >= 1");
  ProbeReport rep;
  rep.probe = "appendixD";
  rep.n_samples = static_cast<std::int64_t>(n) * n;
  rep.worst_value = -std::numeric_limits<double>::infinity();
  double max_grid = -std::numeric_limits<double>::infinity();
  double max_stationary_gap = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double theta = (i + 1) * kHalfPi / (n + 1);
      const double gamma = (j + 1) * kHalfPi / (n + 1);
      const AppendixDReport r = appendixD_scan(theta, gamma, grid_n);
      if (!r.below_one || !r.within_candidates) ++rep.violations;
      const double best = std::isnan(r.f2) ? r.f1 : std::max(r.f1, r.f2);
      const double excess = r.grid_max - best;
      if (excess > rep.worst_value) {
        rep.worst_value = excess;
        rep.worst_seed = static_cast<std::uint64_t>(i * n + j);
        rep.extras["worst_theta"] = theta;
        rep.extras["worst_gamma"] = gamma;
        rep.extras["worst_grid_tolerance"] = r.grid_tolerance;
      }
      max_grid = std::max(max_grid, r.grid_max);
      max_stationary_gap =
          std::max(max_stationary_gap, std::abs(r.grid_max - std::max(r.f1, r.f3)));
    }
  }
  rep.extras["max_grid_value"] = max_grid;
  rep.extras["max_gap_to_stationary_point"] = max_stationary_gap;
  rep.notes = "worst_value is the largest excess of the grid maximum over the best stated "
              "candidate; worst_seed is the cell index i*n+j; the stationary point of f "
              "(x3) is reported as a diagnostic";
  return rep;
}

}  // namespace sqgame
