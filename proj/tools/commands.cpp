#include "commands.hpp"

#include <algorithm>
#include <map>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "sqgame/serialize.hpp"

namespace sqgame::cli {

namespace {

struct Invalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Keys accepted by each subcommand, with their defaults. Keys listed with a
// null default are optional.
json seesaw_defaults() {
  return {{"restarts", 32}, {"max_iters", 500}, {"tol_score", 1e-10},
          {"tol_variables", 1e-9}, {"mode", "rank_one"}};
}

json target_defaults() {
  return {{"chi", nullptr}, {"amplitudes", nullptr}, {"unitary_seeds", nullptr}};
}

json command_defaults(const std::string& cmd) {
  json d = json::object();
  if (cmd == "design" || cmd == "certify") {
    d.update(target_defaults());
    d.update({{"l1", 1.0}, {"l_negative", 100.0}, {"ensemble", "tetrahedral"}});
  }
  if (cmd == "certify") {
    d.update(seesaw_defaults());
    d.update({{"game", nullptr}, {"trajectory", nullptr}});
  } else if (cmd == "swap") {
    d.update(target_defaults());
    d.update(seesaw_defaults());
    d.update({{"instance", nullptr}, {"ideal", false}, {"optimize", false},
              {"swap_l", 100.0}, {"trajectory", nullptr}});
  } else if (cmd == "corollary") {
    d.update({{"instance", nullptr}, {"ideal", false}, {"werner", nullptr}});
  } else if (cmd == "probe") {
    d.update({{"name", nullptr}, {"n", 1000}, {"min_mix", 0.1},
              {"min_angle", std::numbers::pi / 8},
              {"dims", json::array({json::array({2, 2}), json::array({2, 3}),
                                    json::array({3, 3}), json::array({4, 4})})},
              {"mirrored", false}, {"theta", nullptr}, {"gamma", nullptr},
              {"grid_n", 2000}, {"sweep", 20}});
  } else if (cmd == "bound") {
    d.update({{"chi", nullptr}, {"grid_n", 400}});
  }
  return d;
}

const std::vector<std::string> kCommands{"design", "certify", "swap", "corollary", "probe", "bound"};
const std::map<std::string, std::string> kDescriptions{
    {"design", "Build the game for a Schmidt-angle target"},
    {"certify", "Run the see-saw and certify the optimum"},
    {"swap", "Score or optimise an entanglement-swapping instance"},
    {"corollary", "Check a swapping instance for a complete Bell measurement"},
    {"probe", "Sample a lemma or theorem numerically"},
    {"bound", "Scan the analytic score bound over measurement angles"}};
const std::vector<std::string> kGlobalKeys{"seed", "out", "tol"};

std::string flag_for(const std::string& key) {
  std::string f = "--" + key;
  std::replace(f.begin(), f.end(), '_', '-');
  return f;
}

json parse_scalar(const std::string& raw) {
  try {
    return json::parse(raw);
  } catch (const json::parse_error&) {
    return raw;
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Invalid("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Invalid(path + ": " + e.what());
  }
}

struct Context {
  std::string command;
  json params;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  std::string out_path;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  template <typename T>
  T get(const std::string& key) const {
    try {
      return params.at(key).get<T>();
    } catch (const json::exception&) {
      throw Invalid("parameter '" + key + "' has the wrong type or is missing");
    }
  }
  bool has(const std::string& key) const { return params.contains(key) && !params[key].is_null(); }
};

void emit(const Context& ctx, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (ctx.out_path.empty()) {
    *ctx.out << text;
    return;
  }
  std::ofstream f(ctx.out_path, std::ios::binary);
  if (!f) throw Invalid("cannot write " + ctx.out_path);
  f << text;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::ostringstream stamp;
  stamp << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
  std::ofstream meta(ctx.out_path + ".meta.json", std::ios::binary);
  meta << json{{"command", ctx.command}, {"timestamp", stamp.str()}, {"report", ctx.out_path}}.dump(2)
       << "\n";
}

void write_trajectory(const Context& ctx, const std::vector<double>& t) {
  if (!ctx.has("trajectory")) return;
  const auto path = ctx.get<std::string>("trajectory");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Invalid("cannot write " + path);
  f << "iteration,score\n" << std::setprecision(17);
  for (std::size_t i = 0; i < t.size(); ++i) f << i << "," << t[i] << "\n";
}

SeeSawConfig seesaw_config(const Context& ctx) {
  SeeSawConfig c;
  c.restarts = ctx.get<int>("restarts");
  c.max_iters = ctx.get<int>("max_iters");
  c.tol_score = ctx.get<double>("tol_score");
  c.tol_variables = ctx.get<double>("tol_variables");
  const auto mode = ctx.get<std::string>("mode");
  if (mode == "rank_one") {
    c.mode = SeeSawMode::rank_one;
  } else if (mode == "psd_relaxed") {
    c.mode = SeeSawMode::psd_relaxed;
  } else {
    throw Invalid("mode must be rank_one or psd_relaxed");
  }
  c.seed = ctx.seed;
  c.validate();
  return c;
}

Ket target_from(const Context& ctx) {
  Ket psi;
  if (ctx.has("amplitudes")) {
    const json& a = ctx.params["amplitudes"];
    if (!a.is_array() || a.size() != 4) throw Invalid("amplitudes must list four entries");
    Vector v(4);
    for (std::size_t i = 0; i < 4; ++i) {
      v(static_cast<Eigen::Index>(i)) = a[i].is_array() ? cplx(a[i].at(0).get<double>(), a[i].at(1).get<double>())
                                                        : cplx(a[i].get<double>(), 0.0);
    }
    psi = Ket(v, SubsystemShape::qubits({"A0", "B0"}));
  } else if (ctx.has("chi")) {
    psi = schmidt_target(ctx.get<double>("chi"));
  } else {
    throw Invalid("a target needs chi or amplitudes");
  }
  if (ctx.has("unitary_seeds")) {
    const auto seeds = ctx.get<std::vector<std::uint64_t>>("unitary_seeds");
    if (seeds.size() != 2) throw Invalid("unitary_seeds must hold two seeds");
    const Matrix u = kron(random_unitary(SubsystemShape::qubits({"A0"}), seeds[0]).matrix(),
                          random_unitary(SubsystemShape::qubits({"B0"}), seeds[1]).matrix());
    psi = Ket(u * psi.amplitudes(), psi.shape());
  }
  return psi;
}

SemiQuantumGame game_from(const Context& ctx) {
  if (ctx.has("game")) return game_from_json(read_json_file(ctx.get<std::string>("game")));
  WitnessOptions opts;
  opts.l1 = ctx.get<double>("l1");
  opts.l_negative = ctx.get<double>("l_negative");
  const auto name = ctx.get<std::string>("ensemble");
  if (name != "tetrahedral" && name != "pauli6") throw Invalid("ensemble must be tetrahedral or pauli6");
  return make_game(target_from(ctx), opts, name == "tetrahedral" ? tetrahedral_states() : pauli6_states());
}

// --- subcommands -------------------------------------------------------------

int cmd_design(const Context& ctx) {
  const SemiQuantumGame g = game_from(ctx);
  emit(ctx, to_json(g));
  return kPass;
}

int cmd_certify(const Context& ctx) {
  const SemiQuantumGame g = game_from(ctx);
  const SeeSawConfig cfg = seesaw_config(ctx);
  const OptResult opt = seesaw_optimize(g, cfg);
  const CertificationReport rep = certification_report(opt, g, ctx.tol);
  write_trajectory(ctx, opt.score_trajectory);
  emit(ctx, {{"report", to_json(rep)}, {"result", to_json(opt)}, {"config", to_json(cfg)}});
  if (!opt.converged) {
    *ctx.err << "see-saw did not converge; best gap " << rep.gap << "\n";
    return kNotConverged;
  }
  return rep.verdict == Verdict::certified ? kPass : kFailed;
}

SwapInstance swap_instance_from(const Context& ctx, const Ket* target) {
  if (ctx.has("instance")) {
    return swap_instance_from_json(read_json_file(ctx.get<std::string>("instance")));
  }
  if (ctx.get<bool>("ideal")) {
    return target ? ideal_swap_instance(*target) : bell_swap_instance();
  }
  throw Invalid("need an instance file or the ideal flag");
}

int cmd_swap(const Context& ctx) {
  const Ket psi = (ctx.has("chi") || ctx.has("amplitudes")) ? target_from(ctx)
                                                             : schmidt_target(std::numbers::pi / 4);
  const SwapGame g = swap_game_operator(psi, ctx.get<double>("swap_l"));
  if (ctx.get<bool>("optimize")) {
    const SeeSawConfig cfg = seesaw_config(ctx);
    const SwapOptResult r = swap_optimize(g, cfg);
    write_trajectory(ctx, r.score_trajectory);
    const double gap = 0.25 - r.final_score;
    emit(ctx, {{"result", to_json(r)}, {"gap", gap}, {"config", to_json(cfg)}});
    if (!r.converged) {
      *ctx.err << "see-saw did not converge; best gap " << gap << "\n";
      return kNotConverged;
    }
    return std::abs(gap) <= ctx.tol ? kPass : kFailed;
  }
  const SwapInstance inst = swap_instance_from(ctx, &psi);
  inst.validate();
  const double s = swap_score(g, inst);
  json probabilities = json::array();
  for (std::size_t i = 0; i < inst.joint_povm.size(); ++i) {
    probabilities.push_back(swap_effective(inst, i).weight);
  }
  emit(ctx, {{"score", s}, {"gap", 0.25 - s}, {"probabilities", probabilities},
             {"instance", to_json(inst)}});
  return std::abs(0.25 - s) <= ctx.tol ? kPass : kFailed;
}

int cmd_corollary(const Context& ctx) {
  SwapInstance inst;
  if (ctx.has("werner")) {
    const double v = ctx.get<double>("werner");
    if (v < 0.0 || v > 1.0) throw Invalid("werner visibility must lie in [0, 1]");
    inst = SwapInstance{werner_state(v, "A0", "A"), werner_state(v, "B", "B0"), bsm_projectors()};
  } else {
    inst = swap_instance_from(ctx, nullptr);
  }
  const CorollaryReport rep = corollary_check(inst, ctx.tol);
  emit(ctx, to_json(rep));
  return rep.passed ? kPass : kFailed;
}

int cmd_probe(const Context& ctx) {
  if (!ctx.has("name")) throw Invalid("probe needs --name");
  const auto name = ctx.get<std::string>("name");
  const auto n = ctx.get<std::int64_t>("n");
  ProbeReport rep;
  if (name == "theorem1") {
    rep = theorem1_probe(n, ctx.seed, ctx.get<bool>("mirrored"));
  } else if (name == "lemma1") {
    rep = lemma1_probe(n, ctx.seed, ctx.get<double>("min_mix"), ctx.get<double>("min_angle"));
  } else if (name == "lemma2") {
    rep = lemma2_probe(n, ctx.seed, ctx.get<double>("min_angle"));
  } else if (name == "lemma3") {
    rep = lemma3_check(n, ctx.get<std::vector<std::pair<int, int>>>("dims"), ctx.seed);
  } else if (name == "appendixD") {
    if (ctx.has("theta") || ctx.has("gamma")) {
      const AppendixDReport r = appendixD_scan(ctx.get<double>("theta"), ctx.get<double>("gamma"),
                                               ctx.get<int>("grid_n"));
      emit(ctx, to_json(r));
      return r.below_one && r.within_candidates ? kPass : kFailed;
    }
    rep = appendixD_sweep(ctx.get<int>("sweep"), ctx.get<int>("grid_n"));
  } else {
    throw Invalid("unknown probe '" + name + "'; expected theorem1, lemma1, lemma2, lemma3 or appendixD");
  }
  emit(ctx, to_json(rep));
  return rep.violations == 0 ? kPass : kFailed;
}

int cmd_bound(const Context& ctx) {
  if (!ctx.has("chi")) throw Invalid("bound needs --chi");
  const BoundScan scan = bound_scan(ctx.get<double>("chi"), ctx.get<int>("grid_n"));
  const json summary = {{"chi", scan.chi}, {"grid_n", scan.grid_n},
                        {"max", scan.best.bound}, {"alpha", scan.best.alpha},
                        {"beta", scan.best.beta}};
  if (ctx.out_path.empty()) {
    write_csv(*ctx.out, scan);
  } else {
    std::ofstream f(ctx.out_path, std::ios::binary);
    if (!f) throw Invalid("cannot write " + ctx.out_path);
    write_csv(f, scan);
    *ctx.out << summary.dump(2) << "\n";
  }
  return std::abs(scan.best.bound - 0.25) <= ctx.tol ? kPass : kFailed;
}

int dispatch(const Context& ctx) {
  if (ctx.command == "design") return cmd_design(ctx);
  if (ctx.command == "certify") return cmd_certify(ctx);
  if (ctx.command == "swap") return cmd_swap(ctx);
  if (ctx.command == "corollary") return cmd_corollary(ctx);
  if (ctx.command == "probe") return cmd_probe(ctx);
  return cmd_bound(ctx);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semi-quantum game certification toolkit", "sqgame"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string out_path, config_path;
  app.add_option("--seed", seed, "Global seed");
  app.add_option("--out", out_path, "Output path (stdout when omitted)");
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--tol", tol, "Verdict tolerance");

  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, CLI::App*> subs;
  for (const std::string& cmd : kCommands) {
    CLI::App* sub = app.add_subcommand(cmd, kDescriptions.at(cmd));
    sub->fallthrough();
    subs[cmd] = sub;
    const json defaults = command_defaults(cmd);
    for (const auto& [key, value] : defaults.items()) {
      sub->add_option(flag_for(key), raw[cmd][key], key + " (default " + value.dump() + ")");
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }

  Context ctx;
  ctx.out = &out;
  ctx.err = &err;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) ctx.command = name;
  }

  try {
    const json defaults = command_defaults(ctx.command);
    ctx.params = defaults;
    json globals = json::object();
    if (!config_path.empty()) {
      const json cfg = read_json_file(config_path);
      if (!cfg.is_object()) throw Invalid("config must be a JSON object");
      for (const auto& [key, value] : cfg.items()) {
        if (std::find(kGlobalKeys.begin(), kGlobalKeys.end(), key) != kGlobalKeys.end()) {
          globals[key] = value;
        } else if (defaults.contains(key)) {
          ctx.params[key] = value;
        } else {
          throw Invalid("unknown config field '" + key + "' for " + ctx.command);
        }
      }
    }
    CLI::App* sub = subs.at(ctx.command);
    for (const auto& [key, value] : raw[ctx.command]) {
      if (sub->get_option(flag_for(key))->count() > 0) ctx.params[key] = parse_scalar(value);
    }
    ctx.seed = seed ? *seed : globals.value("seed", std::uint64_t{0});
    ctx.tol = tol ? *tol : globals.value("tol", 1e-6);
    ctx.out_path = !out_path.empty() ? out_path : globals.value("out", std::string{});
    if (!(ctx.tol > 0.0)) throw Invalid("tol must be positive");
    return dispatch(ctx);
  } catch (const Invalid& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNotConverged;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return kInvalid;
  }
}

}  // namespace sqgame::cli
