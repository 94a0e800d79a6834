#include "sqgame/serialize.hpp"

namespace sqgame {

namespace {

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ShapeError("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T, typename F>
json array_of(const std::vector<T>& items, F&& f) {
  json out = json::array();
  for (const T& item : items) out.push_back(f(item));
  return out;
}

json real_vector(const RealVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

json to_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    data.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const json& data = j.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows)) {
    throw ShapeError("matrix data does not match its declared rows");
  }
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = data[static_cast<std::size_t>(r)];
    if (row.size() != static_cast<std::size_t>(cols)) {
      throw ShapeError("matrix row " + std::to_string(r) + " does not match declared cols");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw ShapeError("vector must be an array of [re, im]");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from(j[i]);
  return v;
}

json to_json(const SubsystemShape& s) { return {{"labels", s.labels()}, {"dims", s.dims()}}; }

SubsystemShape shape_from_json(const json& j) {
  return SubsystemShape(j.at("labels").get<std::vector<std::string>>(),
                        j.at("dims").get<std::vector<int>>());
}

json to_json(const Operator& op) {
  return {{"shape", to_json(op.shape())}, {"hermitian", op.hermitian()},
          {"matrix", to_json(op.matrix())}};
}

Operator operator_from_json(const json& j) {
  SubsystemShape shape = shape_from_json(j.at("shape"));
  Matrix m = matrix_from_json(j.at("matrix"));
  if (j.contains("hermitian")) return Operator(std::move(m), std::move(shape), j["hermitian"].get<bool>());
  return Operator(std::move(m), std::move(shape));
}

json to_json(const Ket& k) {
  return {{"shape", to_json(k.shape())}, {"amplitudes", to_json(k.amplitudes())}};
}

Ket ket_from_json(const json& j) {
  return Ket(vector_from_json(j.at("amplitudes")), shape_from_json(j.at("shape")));
}

// ---------------------------------------------------------------------------

json to_json(const Witness& w) {
  return {{"operator", to_json(w.op)},
          {"eigenvalues", real_vector(w.spectrum.eigenvalues)},
          {"eigenvectors", array_of(w.spectrum.eigenvectors, [](const Vector& v) { return to_json(v); })},
          {"target", to_json(w.target)},
          {"l1", w.l1},
          {"l_negative", w.l_negative},
          {"warnings", w.warnings}};
}

Witness witness_from_json(const json& j) {
  Witness w;
  w.op = operator_from_json(j.at("operator"));
  const auto eig = j.at("eigenvalues").get<std::vector<double>>();
  w.spectrum.eigenvalues = Eigen::Map<const RealVector>(eig.data(), static_cast<Eigen::Index>(eig.size()));
  for (const json& v : j.at("eigenvectors")) w.spectrum.eigenvectors.push_back(vector_from_json(v));
  w.target = ket_from_json(j.at("target"));
  w.l1 = j.at("l1").get<double>();
  w.l_negative = j.at("l_negative").get<double>();
  w.warnings = j.value("warnings", std::vector<std::string>{});
  return w;
}

json to_json(const InputEnsemble& e) {
  return {{"name", e.name}, {"states", array_of(e.states, [](const Matrix& m) { return to_json(m); })}};
}

InputEnsemble ensemble_from_json(const json& j) {
  std::vector<Matrix> states;
  for (const json& m : j.at("states")) states.push_back(matrix_from_json(m));
  return custom_ensemble(j.at("name").get<std::string>(), std::move(states));
}

json to_json(const ScoreTable& t) {
  json beta = json::array();
  for (Eigen::Index x = 0; x < t.beta.rows(); ++x) {
    json row = json::array();
    for (Eigen::Index y = 0; y < t.beta.cols(); ++y) row.push_back(t.beta(x, y));
    beta.push_back(std::move(row));
  }
  return {{"beta", std::move(beta)},
          {"ensemble_a", to_json(t.ensemble_a)},
          {"ensemble_b", to_json(t.ensemble_b)},
          {"residual", t.residual}};
}

ScoreTable score_table_from_json(const json& j) {
  ScoreTable t;
  t.ensemble_a = ensemble_from_json(j.at("ensemble_a"));
  t.ensemble_b = ensemble_from_json(j.at("ensemble_b"));
  const json& beta = j.at("beta");
  t.beta = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(t.ensemble_a.states.size()),
                                 static_cast<Eigen::Index>(t.ensemble_b.states.size()));
  if (beta.size() != t.ensemble_a.states.size()) throw ShapeError("beta rows disagree with ensemble_a");
  for (std::size_t x = 0; x < beta.size(); ++x) {
    if (beta[x].size() != t.ensemble_b.states.size()) throw ShapeError("beta cols disagree with ensemble_b");
    for (std::size_t y = 0; y < beta[x].size(); ++y) {
      t.beta(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = beta[x][y].get<double>();
    }
  }
  t.residual = j.value("residual", 0.0);
  return t;
}

json to_json(const SemiQuantumGame& g) {
  return {{"witness", to_json(g.witness)}, {"scores", to_json(g.scores)}, {"target_chi", g.target_chi}};
}

SemiQuantumGame game_from_json(const json& j) {
  SemiQuantumGame g;
  g.witness = witness_from_json(j.at("witness"));
  g.scores = score_table_from_json(j.at("scores"));
  g.target_chi = j.at("target_chi").get<double>();
  return g;
}

// ---------------------------------------------------------------------------

json to_json(const Strategy& s) {
  return {{"rho", to_json(s.rho)}, {"m_a", to_json(s.m_a)}, {"m_b", to_json(s.m_b)}};
}

Strategy strategy_from_json(const json& j) {
  return Strategy{operator_from_json(j.at("rho")), operator_from_json(j.at("m_a")),
                  operator_from_json(j.at("m_b"))};
}

json to_json(const EffectiveElement& e) {
  return {{"operator", to_json(e.op)}, {"weight", e.weight}};
}

json to_json(const SeeSawConfig& c) {
  return {{"restarts", c.restarts},
          {"max_iters", c.max_iters},
          {"tol_score", c.tol_score},
          {"tol_variables", c.tol_variables},
          {"mode", c.mode == SeeSawMode::rank_one ? "rank_one" : "psd_relaxed"},
          {"seed", c.seed}};
}

json to_json(const OptResult& r) {
  return {{"strategy", to_json(r.strategy)},
          {"score_trajectory", r.score_trajectory},
          {"final_score", r.final_score},
          {"converged", r.converged},
          {"iterations", r.iterations},
          {"restart_index", r.restart_index}};
}

json to_json(const SchmidtForm& s) {
  return {{"coefficients", s.coefficients}, {"angle", s.angle}};
}

json to_json(const CertificationReport& r) {
  return {{"final_score", r.final_score},
          {"gap", r.gap},
          {"rho_schmidt", to_json(r.rho_schmidt)},
          {"m_a_schmidt", to_json(r.m_a_schmidt)},
          {"m_b_schmidt", to_json(r.m_b_schmidt)},
          {"target_chi", r.target_chi},
          {"verdict", to_string(r.verdict)},
          {"checks", r.checks},
          {"diagnostics", r.diagnostics}};
}

// ---------------------------------------------------------------------------

json to_json(const SwapInstance& s) {
  return {{"rho_a0a", to_json(s.rho_a0a)},
          {"rho_bb0", to_json(s.rho_bb0)},
          {"joint_povm", array_of(s.joint_povm, [](const Operator& op) { return to_json(op); })}};
}

SwapInstance swap_instance_from_json(const json& j) {
  SwapInstance s{operator_from_json(j.at("rho_a0a")), operator_from_json(j.at("rho_bb0")), {}};
  for (const json& m : j.at("joint_povm")) s.joint_povm.push_back(operator_from_json(m));
  return s;
}

json to_json(const SwapOptResult& r) {
  return {{"instance", to_json(r.instance)},
          {"score_trajectory", r.score_trajectory},
          {"final_score", r.final_score},
          {"converged", r.converged},
          {"restart_index", r.restart_index}};
}

json to_json(const CorollaryReport& r) {
  json outcomes = json::array();
  for (const CorollaryOutcome& o : r.outcomes) {
    outcomes.push_back({{"probability", o.probability},
                        {"purity", o.purity},
                        {"schmidt_coefficients", o.schmidt_coefficients},
                        {"alignment_error", o.alignment_error},
                        {"matched_bell", o.matched_bell}});
  }
  return {{"outcomes", std::move(outcomes)},
          {"clauses", r.clauses},
          {"passed", r.passed},
          {"u_a0", to_json(r.u_a0)},
          {"u_b0", to_json(r.u_b0)},
          {"verdict", r.verdict},
          {"diagnostics", r.diagnostics}};
}

json to_json(const ProbeReport& r) {
  return {{"probe", r.probe},
          {"n_samples", r.n_samples},
          {"violations", r.violations},
          {"worst_value", r.worst_value},
          {"worst_seed", r.worst_seed},
          {"notes", r.notes},
          {"extras", r.extras}};
}

json to_json(const AppendixDReport& r) {
  return {{"theta", r.theta}, {"gamma", r.gamma}, {"grid_n", r.grid_n},
          {"a", r.a}, {"b", r.b}, {"c", r.c}, {"d", r.d},
          {"x1", r.x1}, {"f1", r.f1}, {"f1_closed", r.f1_closed},
          {"x2", r.x2}, {"f2", r.f2}, {"x3", r.x3}, {"f3", r.f3},
          {"grid_max", r.grid_max}, {"grid_argmax", r.grid_argmax},
          {"grid_tolerance", r.grid_tolerance},
          {"below_one", r.below_one}, {"within_candidates", r.within_candidates}};
}

}  // namespace sqgame
