#include "sqgame/certify.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sqgame/parallel.hpp"

namespace sqgame {

void SeeSawConfig::validate() const {
  if (restarts < 1) throw ConstraintError("restarts must be >= 1");
  if (max_iters < 1) throw ConstraintError("max_iters must be >= 1");
  if (!(tol_score > 0.0)) throw ConstraintError("tol_score must be > 0");
  if (tol_variables < 0.0) throw ConstraintError("tol_variables must be >= 0");
}

namespace {

int dim_of_slot(const TripleDims& d, TripleSlot slot) {
  switch (slot) {
    case TripleSlot::center: return d.a * d.b;
    case TripleSlot::left: return d.a0 * d.a;
    default: return d.b * d.b0;
  }
}

VariableRole role_of(const TripleProblem& p, TripleSlot slot) {
  switch (slot) {
    case TripleSlot::center: return p.center_role;
    case TripleSlot::left: return p.left_role;
    default: return p.right_role;
  }
}

Matrix& slot_ref(TripleVariables& v, TripleSlot slot) {
  switch (slot) {
    case TripleSlot::center: return v.center;
    case TripleSlot::left: return v.left;
    default: return v.right;
  }
}

// Visits every term W[(a0' b0'),(a0 b0)] C[(a b),(a'' b'')] L[(a0 a''),(a0' a)]
// R[(b'' b0),(b b0')] of the fully expanded score.
template <typename Visit>
void for_each_term(const TripleDims& d, Visit&& visit) {
  for (int a0 = 0; a0 < d.a0; ++a0)
    for (int a0p = 0; a0p < d.a0; ++a0p)
      for (int b0 = 0; b0 < d.b0; ++b0)
        for (int b0p = 0; b0p < d.b0; ++b0p)
          for (int a = 0; a < d.a; ++a)
            for (int app = 0; app < d.a; ++app)
              for (int b = 0; b < d.b; ++b)
                for (int bpp = 0; bpp < d.b; ++bpp) {
                  visit(a0p * d.b0 + b0p, a0 * d.b0 + b0,  // W
                        a * d.b + b, app * d.b + bpp,      // C
                        a0 * d.a + app, a0p * d.a + a,     // L
                        bpp * d.b0 + b0, b * d.b0 + b0p);  // R
                }
}

Matrix optimal_variable(const Matrix& f, VariableRole role, SeeSawMode mode) {
  const Spectrum s = eig_hermitian(f);
  if (role == VariableRole::density || mode == SeeSawMode::rank_one) {
    return ketbra(s.eigenvectors.front());
  }
  Matrix proj = Matrix::Zero(f.rows(), f.cols());
  for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
    if (s.eigenvalues(k) > 0.0) proj += ketbra(s.eigenvectors[static_cast<std::size_t>(k)]);
  }
  return proj;
}

std::string dump_trajectory(const std::vector<double>& t) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < t.size(); ++i) os << "\n  iter " << i << ": " << t[i];
  return os.str();
}

}  // namespace

double triple_score(const TripleProblem& p, const TripleVariables& v) {
  cplx acc = 0.0;
  for_each_term(p.dims, [&](int wr, int wc, int cr, int cc, int lr, int lc, int rr, int rc) {
    acc += p.score_op(wr, wc) * v.center(cr, cc) * v.left(lr, lc) * v.right(rr, rc);
  });
  return acc.real();
}

Matrix triple_functional(const TripleProblem& p, const TripleVariables& v, TripleSlot slot) {
  const int n = dim_of_slot(p.dims, slot);
  Matrix f = Matrix::Zero(n, n);
  // Tr[F X] = sum_ij F(j, i) X(i, j): each term contributes at the transposed
  // index pair of the slot being solved for.
  for_each_term(p.dims, [&](int wr, int wc, int cr, int cc, int lr, int lc, int rr, int rc) {
    const cplx w = p.score_op(wr, wc);
    switch (slot) {
      case TripleSlot::center: f(cc, cr) += w * v.left(lr, lc) * v.right(rr, rc); break;
      case TripleSlot::left: f(lc, lr) += w * v.center(cr, cc) * v.right(rr, rc); break;
      case TripleSlot::right: f(rc, rr) += w * v.center(cr, cc) * v.left(lr, lc); break;
    }
  });
  return 0.5 * (f + f.adjoint());
}

TripleRun seesaw_run(const TripleProblem& p, TripleVariables init, const SeeSawConfig& cfg,
                     int restart_index) {
  cfg.validate();
  TripleRun run;
  run.restart_index = restart_index;
  run.variables = std::move(init);
  double current = triple_score(p, run.variables);
  run.trajectory.push_back(current);
  if (!std::isfinite(current)) {
    throw NumericalError("non-finite initial score" + dump_trajectory(run.trajectory));
  }
  constexpr TripleSlot kOrder[] = {TripleSlot::center, TripleSlot::left, TripleSlot::right};
  for (int it = 0; it < cfg.max_iters; ++it) {
    double moved = 0.0;
    for (const TripleSlot slot : kOrder) {
      const Matrix f = triple_functional(p, run.variables, slot);
      Matrix next = optimal_variable(f, role_of(p, slot), cfg.mode);
      Matrix& var = slot_ref(run.variables, slot);
      moved = std::max(moved, frobenius_distance(next, var));
      var = std::move(next);
    }
    const double next_score = triple_score(p, run.variables);
    run.trajectory.push_back(next_score);
    run.iterations = it + 1;
    if (!std::isfinite(next_score)) {
      throw NumericalError("non-finite score in see-saw" + dump_trajectory(run.trajectory));
    }
    const double improvement = next_score - current;
    current = next_score;
    if (improvement < cfg.tol_score) {
      run.converged = true;
      if (moved < cfg.tol_variables) break;
    }
  }
  run.final_score = current;
  return run;
}

TripleVariables random_initial(const TripleProblem& p, std::uint64_t seed, int restart_index) {
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(restart_index)));
  TripleVariables v;
  v.center = ketbra(haar_vector(dim_of_slot(p.dims, TripleSlot::center), rng));
  v.left = ketbra(haar_vector(dim_of_slot(p.dims, TripleSlot::left), rng));
  v.right = ketbra(haar_vector(dim_of_slot(p.dims, TripleSlot::right), rng));
  return v;
}

TripleRun seesaw_best(const TripleProblem& p, const SeeSawConfig& cfg) {
  cfg.validate();
  std::vector<TripleRun> runs(static_cast<std::size_t>(cfg.restarts));
  parallel_for(runs.size(), [&](std::size_t r) {
    const int idx = static_cast<int>(r);
    runs[r] = seesaw_run(p, random_initial(p, cfg.seed, idx), cfg, idx);
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].final_score > runs[best].final_score) best = r;
  }
  return runs[best];
}

// ---------------------------------------------------------------------------

TripleProblem game_problem(const SemiQuantumGame& g) {
  TripleProblem p;
  p.score_op = g.witness.op.matrix();
  p.center_role = VariableRole::density;
  p.left_role = VariableRole::effect;
  p.right_role = VariableRole::effect;
  return p;
}

namespace {

OptResult to_opt_result(const TripleRun& run) {
  OptResult out;
  out.strategy = make_strategy(run.variables.center, run.variables.left, run.variables.right);
  out.score_trajectory = run.trajectory;
  out.final_score = run.final_score;
  out.converged = run.converged;
  out.iterations = run.iterations;
  out.restart_index = run.restart_index;
  return out;
}

}  // namespace

OptResult seesaw_optimize(const SemiQuantumGame& g, const SeeSawConfig& cfg) {
  return to_opt_result(seesaw_best(game_problem(g), cfg));
}

OptResult seesaw_from(const SemiQuantumGame& g, const Strategy& init, const SeeSawConfig& cfg) {
  init.validate();
  TripleVariables v{permute(init.rho, std::vector<std::string>{"A", "B"}).matrix(),
                    permute(init.m_a, std::vector<std::string>{"A0", "A"}).matrix(),
                    permute(init.m_b, std::vector<std::string>{"B", "B0"}).matrix()};
  return to_opt_result(seesaw_run(game_problem(g), std::move(v), cfg, 0));
}

// ---------------------------------------------------------------------------

double theorem2_bound(double alpha, double beta, double chi) {
  if (!(chi > 0.0)) throw NotEntangledError("target not entangled (chi = 0)");
  if (chi > std::numbers::pi / 4 + 1e-15) throw ConstraintError("chi must lie in (0, pi/4]");
  const double half_pi = std::numbers::pi / 2;
  if (alpha < 0.0 || alpha > half_pi || beta < 0.0 || beta > half_pi) {
    throw ConstraintError("alpha, beta must lie in [0, pi/2]");
  }
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double sb = std::sin(beta), cb = std::cos(beta);
  const double sc = std::sin(chi), cc = std::cos(chi);
  const double p = sa * sa * sb * sb;  // sin^2a sin^2b
  const double q = ca * ca * cb * cb;  // cos^2a cos^2b
  const double denominator = p * cc * cc + q * sc * sc;
  if (denominator == 0.0) {
    // p = q = 0 cannot happen for alpha, beta in range with chi in (0, pi/4].
    throw NumericalError("degenerate bound denominator");
  }
  return p * q / denominator;
}

BoundScan bound_scan(double chi, int grid_n) {
  if (grid_n < 3) throw ConstraintError("grid_n must be >= 3");
  BoundScan scan;
  scan.chi = chi;
  scan.grid_n = grid_n;
  const double step = std::numbers::pi / (2.0 * grid_n);
  scan.rows.reserve(static_cast<std::size_t>((grid_n - 1) * (grid_n - 1)));
  scan.best.bound = -1.0;
  for (int i = 1; i < grid_n; ++i) {
    for (int j = 1; j < grid_n; ++j) {
      const BoundRow row{i * step, j * step, theorem2_bound(i * step, j * step, chi)};
      if (row.bound > scan.best.bound) scan.best = row;
      scan.rows.push_back(row);
    }
  }
  return scan;
}

void write_csv(std::ostream& os, const BoundScan& scan) {
  const auto old = os.precision(17);
  os << "alpha,beta,bound\n";
  for (const auto& r : scan.rows) os << r.alpha << ',' << r.beta << ',' << r.bound << '\n';
  os.precision(old);
}

// ---------------------------------------------------------------------------

bool lu_equivalent_pure(const Ket& u, const Ket& v, double tol) {
  if (u.shape().dims() != v.shape().dims() || u.shape().rank() < 2) {
    throw ShapeError("LU comparison needs bipartite vectors of equal shape");
  }
  const SchmidtForm su = schmidt(u, {u.shape().labels().front()});
  const SchmidtForm sv = schmidt(v, {v.shape().labels().front()});
  for (std::size_t k = 0; k < su.coefficients.size(); ++k) {
    if (std::abs(su.coefficients[k] - sv.coefficients[k]) > tol) return false;
  }
  return true;
}

std::string to_string(Verdict v) {
  return v == Verdict::certified ? "certified" : "not_certified";
}

CertificationReport certification_report(const OptResult& opt, const SemiQuantumGame& g,
                                         double tol) {
  CertificationReport rep;
  const double l1 = g.witness.l1;
  rep.final_score = opt.final_score;
  rep.gap = l1 / 4.0 - opt.final_score;
  rep.target_chi = g.target_chi;

  const Strategy& s = opt.strategy;
  const Operator rho = permute(s.rho, std::vector<std::string>{"A", "B"});
  const Operator m_a = permute(s.m_a, std::vector<std::string>{"A0", "A"});
  const Operator m_b = permute(s.m_b, std::vector<std::string>{"B", "B0"});
  const Spectrum rho_spec = eig_hermitian(rho);
  const Spectrum a_spec = eig_hermitian(m_a);
  const Spectrum b_spec = eig_hermitian(m_b);

  const Ket rho_vec(rho_spec.eigenvectors.front(), rho.shape());
  const Ket a_vec(a_spec.eigenvectors.front(), m_a.shape());
  const Ket b_vec(b_spec.eigenvectors.front(), m_b.shape());
  rep.rho_schmidt = schmidt(rho_vec, {"A"});
  rep.m_a_schmidt = schmidt(a_vec, {"A0"});
  rep.m_b_schmidt = schmidt(b_vec, {"B"});

  const double quarter_pi = std::numbers::pi / 4;
  const double tr_a = m_a.trace().real();
  const double tr_b = m_b.trace().real();
  const std::vector<std::pair<std::string, bool>> checks{
      {"score gap", rep.gap <= tol * l1},
      {"state purity", rho_spec.eigenvalues(0) >= 1.0 - tol},
      {"measurement rank",
       a_spec.eigenvalues(0) >= (1.0 - tol) * tr_a && b_spec.eigenvalues(0) >= (1.0 - tol) * tr_b &&
           tr_a > tol && tr_b > tol},
      {"measurement Schmidt angle", std::abs(rep.m_a_schmidt.angle - quarter_pi) <= tol &&
                                        std::abs(rep.m_b_schmidt.angle - quarter_pi) <= tol},
      {"state LU equivalence", lu_equivalent_pure(rho_vec, g.witness.target, tol)},
  };
  bool all = true;
  for (const auto& [name, ok] : checks) {
    rep.checks[name] = ok;
    if (!ok) {
      all = false;
      rep.diagnostics.push_back(name);
    }
  }
  rep.verdict = all ? Verdict::certified : Verdict::not_certified;
  return rep;
}

}  // namespace sqgame
