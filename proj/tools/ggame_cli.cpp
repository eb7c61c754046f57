// ggame command-line front end: single-instance solving, uniqueness checks,
// regime-map sweeps, Monte Carlo verification and market solving. JSON in,
// JSON or CSV out; all model math goes through the libggame C API.

#include <ggame/ggame.h>

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNotUnique = 2;
constexpr int kExitSolver = 3;
constexpr int kExitConsistency = 4;
constexpr int kExitSimulationBand = 5;

struct CliError {
  int code;
  std::string message;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json default_config() {
  return json{{"cost", 0.5},
              {"alpha_x", 1.0},
              {"alpha_p", 1.0},
              {"sigma_mu", 0.0},
              {"mu_mean", 0.5},
              {"env", {{"type", "baseline"}}}};
}

json parse_set_value(const std::string& raw) {
  if (raw == "true") return true;
  if (raw == "false") return false;
  char* end = nullptr;
  const double v = std::strtod(raw.c_str(), &end);
  if (end && *end == '\0' && end != raw.c_str()) return v;
  return raw;
}

void apply_set(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw CliError{kExitConfig, "--set expects key=value, got '" + assignment + "'"};
  std::string key = assignment.substr(0, eq);
  std::string pointer = "/";
  for (char c : key) pointer += (c == '.') ? '/' : c;
  doc[json::json_pointer(pointer)] = parse_set_value(assignment.substr(eq + 1));
}

json build_config(const std::string& config_path,
                  const std::vector<std::string>& sets) {
  json doc = default_config();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in)
      throw CliError{kExitConfig, "cannot open config file '" + config_path + "'"};
    json file_doc;
    try {
      in >> file_doc;
    } catch (const json::parse_error& e) {
      throw CliError{kExitConfig, std::string("invalid config JSON: ") + e.what()};
    }
    doc.merge_patch(file_doc);
  }
  for (const auto& s : sets) apply_set(doc, s);
  return doc;
}

struct GameHandle {
  gg_game* game = nullptr;
  ~GameHandle() { gg_game_destroy(game); }
  GameHandle() = default;
  GameHandle(const GameHandle&) = delete;
  GameHandle& operator=(const GameHandle&) = delete;
};

void open_game(const json& doc, GameHandle* out) {
  const gg_status st = gg_game_create_json(doc.dump().c_str(), &out->game);
  if (st != GG_OK)
    throw CliError{kExitConfig, std::string("invalid config: ") + gg_last_error()};
}

struct OutputSink {
  std::string path;
  std::string format;  // "json" or "csv"

  void resolve(const std::string& fallback) {
    if (format.empty()) {
      if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
        format = "csv";
      else if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
        format = "json";
      else
        format = fallback;
    }
  }

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      if (!text.empty() && text.back() != '\n') std::cout << '\n';
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError{kExitConfig, "cannot write '" + path + "'"};
    out << text;
  }
};

std::string env_type(const json& doc) {
  return doc.at("env").value("type", "baseline");
}

// ---------------------------------------------------------------- check ----

int cmd_check(const json& doc, OutputSink sink) {
  GameHandle game;
  open_game(doc, &game);

  struct Line {
    std::string name;
    double lhs, threshold, margin;
    bool unique;
  };
  std::vector<Line> lines;

  gg_uniqueness_report rep{};
  if (gg_check_uniqueness(game.game, &rep) != GG_OK)
    throw CliError{kExitConfig, gg_last_error()};
  const std::string type = env_type(doc);
  const std::string cond_name = type == "baseline"     ? "baseline"
                                : type == "exogenous"  ? "exogenous_signal"
                                : type == "market"     ? "market_signal"
                                                       : "action_thresholds";
  lines.push_back({cond_name, rep.lhs, rep.threshold, rep.margin,
                   rep.unique_for_all != 0});

  if (type == "actions") {
    gg_strategy_report srep{};
    if (gg_check_strategy(game.game, &srep) != GG_OK)
      throw CliError{kExitConfig, gg_last_error()};
    lines.push_back({"action_strategies_e11", srep.lhs_e11, rep.threshold,
                     srep.lhs_e11 - rep.threshold, srep.condition_e11 != 0});
    lines.push_back({"action_strategies_e12", srep.lhs_e12, rep.threshold,
                     srep.lhs_e12 - rep.threshold, srep.condition_e12 != 0});
  }

  bool all_unique = true;
  for (const auto& l : lines) all_unique = all_unique && l.unique;

  sink.resolve("json");
  if (sink.format == "csv") {
    std::ostringstream os;
    os << "condition,lhs,threshold,unique_for_all,margin\n";
    for (const auto& l : lines)
      os << l.name << ',' << fmt17(l.lhs) << ',' << fmt17(l.threshold) << ','
         << (l.unique ? 1 : 0) << ',' << fmt17(l.margin) << '\n';
    sink.write(os.str());
  } else {
    json out;
    out["environment"] = type;
    out["unique"] = all_unique;
    out["conditions"] = json::array();
    for (const auto& l : lines)
      out["conditions"].push_back({{"name", l.name},
                                   {"lhs", l.lhs},
                                   {"threshold", l.threshold},
                                   {"unique_for_all", l.unique},
                                   {"margin", l.margin}});
    sink.write(out.dump(2));
  }
  return all_unique ? kExitOk : kExitNotUnique;
}

// ---------------------------------------------------------------- solve ----

std::vector<gg_equilibrium> solve_document(const json& doc) {
  GameHandle game;
  open_game(doc, &game);
  std::vector<gg_equilibrium> buf(16);
  size_t count = 0;
  const gg_status st = gg_solve(game.game, buf.data(), buf.size(), &count);
  if (st == GG_ERROR_SOLVER)
    throw CliError{kExitSolver, std::string("solver failure: ") + gg_last_error()};
  if (st != GG_OK)
    throw CliError{kExitConfig, std::string("invalid config: ") + gg_last_error()};
  buf.resize(count);
  return buf;
}

int cmd_solve(const json& doc, OutputSink sink) {
  const auto eqs = solve_document(doc);
  sink.resolve("json");
  if (sink.format == "csv") {
    std::ostringstream os;
    os << "theta_star,psi_star,slope_at_root,degenerate\n";
    for (const auto& e : eqs)
      os << fmt17(e.theta_star) << ',' << fmt17(e.psi_star) << ','
         << fmt17(e.slope_at_root) << ',' << e.degenerate << '\n';
    sink.write(os.str());
  } else {
    json out;
    out["equilibria"] = json::array();
    for (const auto& e : eqs)
      out["equilibria"].push_back({{"theta_star", e.theta_star},
                                   {"psi_star", e.psi_star},
                                   {"slope_at_root", e.slope_at_root},
                                   {"degenerate", e.degenerate != 0}});
    sink.write(out.dump(2));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- sweep ----

struct Axis {
  std::string name;
  double lo = 0.0, hi = 1.0;
  int steps = 2;
  bool log_scale = false;

  double value(int i) const {
    const double t = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    if (log_scale) return lo * std::pow(hi / lo, t);
    return lo + (hi - lo) * t;
  }
};

struct WitnessGrid {
  double c_lo = 0.05, c_hi = 0.95;
  int c_steps = 21;
  double mu_lo = -2.0, mu_hi = 3.0;
  int mu_steps = 21;
  double signal_lo = -2.0, signal_hi = 3.0;
  int signal_steps = 11;
};

struct SweepSpec {
  std::vector<Axis> axes;
  bool scan_c_mu = false;
  WitnessGrid witness;
};

void set_by_name(json& doc, const std::string& name, double v) {
  std::string pointer = "/";
  for (char c : name) pointer += (c == '.') ? '/' : c;
  doc[json::json_pointer(pointer)] = v;
}

SweepSpec parse_sweep_spec(const json& doc, const std::string& type) {
  if (!doc.contains("sweep"))
    throw CliError{kExitConfig, "sweep requires a 'sweep' section in the config"};
  const json& sw = doc.at("sweep");
  SweepSpec spec;
  if (!sw.contains("axes") || !sw.at("axes").is_array() || sw.at("axes").empty())
    throw CliError{kExitConfig, "sweep.axes must be a non-empty array"};
  for (const auto& a : sw.at("axes")) {
    Axis axis;
    axis.name = a.value("name", "");
    if (axis.name.empty())
      throw CliError{kExitConfig, "sweep axis needs a 'name'"};
    axis.lo = a.value("lo", 0.0);
    axis.hi = a.value("hi", 1.0);
    axis.steps = a.value("steps", 2);
    axis.log_scale = a.value("scale", std::string("linear")) == "log";
    if (axis.steps < 2)
      throw CliError{kExitConfig, "sweep axis needs steps >= 2"};
    if (axis.log_scale && !(axis.lo > 0.0 && axis.hi > 0.0))
      throw CliError{kExitConfig, "log axis needs positive bounds"};
    spec.axes.push_back(axis);
  }
  if (spec.axes.size() > 3)
    throw CliError{kExitConfig, "at most 3 sweep axes are supported"};
  spec.scan_c_mu = sw.value("scan_c_mu", false);
  if (type == "actions") {
    spec.witness.signal_lo = -10.0;
    spec.witness.signal_hi = 10.0;
  }
  if (sw.contains("witness")) {
    const json& w = sw.at("witness");
    spec.witness.c_lo = w.value("c_lo", spec.witness.c_lo);
    spec.witness.c_hi = w.value("c_hi", spec.witness.c_hi);
    spec.witness.c_steps = w.value("c_steps", spec.witness.c_steps);
    spec.witness.mu_lo = w.value("mu_lo", spec.witness.mu_lo);
    spec.witness.mu_hi = w.value("mu_hi", spec.witness.mu_hi);
    spec.witness.mu_steps = w.value("mu_steps", spec.witness.mu_steps);
    spec.witness.signal_lo = w.value("signal_lo", spec.witness.signal_lo);
    spec.witness.signal_hi = w.value("signal_hi", spec.witness.signal_hi);
    spec.witness.signal_steps = w.value("signal_steps", spec.witness.signal_steps);
  }
  return spec;
}

struct CellResult {
  std::vector<double> axis_values;
  bool analytic_unique = false;
  double analytic_margin = 0.0;
  int numeric_max_roots = 0;
  double witness_c = 0.0;
  double witness_mu = 0.0;
  std::optional<double> witness_signal;
  bool failed = false;
  std::string error;
  int error_code = kExitSolver;
};

int sweep_worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("GGAME_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return static_cast<int>(n);
}

const char* signal_key(const std::string& type) {
  if (type == "exogenous" || type == "market") return "z";
  if (type == "actions") return "s";
  return nullptr;
}

CellResult evaluate_cell(const json& base, const SweepSpec& spec,
                         const std::string& type,
                         const std::vector<double>& axis_values) {
  CellResult cell;
  cell.axis_values = axis_values;
  json doc = base;
  doc.erase("sweep");
  for (size_t a = 0; a < spec.axes.size(); ++a)
    set_by_name(doc, spec.axes[a].name, axis_values[a]);

  try {
    GameHandle game;
    open_game(doc, &game);
    gg_uniqueness_report rep{};
    if (gg_check_uniqueness(game.game, &rep) != GG_OK)
      throw CliError{kExitConfig, gg_last_error()};
    cell.analytic_unique = rep.unique_for_all != 0;
    cell.analytic_margin = rep.margin;

    const char* sig_key = signal_key(type);
    cell.witness_c = doc.at("cost").get<double>();
    cell.witness_mu = doc.at("mu_mean").get<double>();
    if (sig_key) cell.witness_signal = doc.at("env").value(sig_key, 0.0);

    cell.numeric_max_roots = static_cast<int>(solve_document(doc).size());

    if (!cell.analytic_unique && spec.scan_c_mu) {
      const WitnessGrid& w = spec.witness;
      const int n_signal = sig_key ? w.signal_steps : 1;
      for (int ic = 0; ic < w.c_steps && cell.numeric_max_roots < 3; ++ic)
        for (int im = 0; im < w.mu_steps && cell.numeric_max_roots < 3; ++im)
          for (int is = 0; is < n_signal && cell.numeric_max_roots < 3; ++is) {
            json probe = doc;
            const double c =
                w.c_lo + (w.c_hi - w.c_lo) * ic / std::max(1, w.c_steps - 1);
            const double mu =
                w.mu_lo + (w.mu_hi - w.mu_lo) * im / std::max(1, w.mu_steps - 1);
            probe["cost"] = c;
            probe["mu_mean"] = mu;
            double sig = 0.0;
            if (sig_key) {
              sig = w.signal_lo + (w.signal_hi - w.signal_lo) * is /
                                      std::max(1, w.signal_steps - 1);
              probe["env"][sig_key] = sig;
            }
            const int count = static_cast<int>(solve_document(probe).size());
            if (count > cell.numeric_max_roots) {
              cell.numeric_max_roots = count;
              cell.witness_c = c;
              cell.witness_mu = mu;
              if (sig_key) cell.witness_signal = sig;
            }
          }
    }
  } catch (const CliError& e) {
    cell.failed = true;
    cell.error = e.message;
    cell.error_code = e.code;
  }
  return cell;
}

int cmd_sweep(const json& doc, OutputSink sink) {
  const std::string type = env_type(doc);
  const SweepSpec spec = parse_sweep_spec(doc, type);

  std::vector<int> dims;
  int n_cells = 1;
  for (const auto& a : spec.axes) {
    dims.push_back(a.steps);
    n_cells *= a.steps;
  }
  std::vector<CellResult> cells(n_cells);

  const int workers = std::min(sweep_worker_count(), n_cells);
  std::cerr << "sweep: " << n_cells << " cells, " << workers << " worker(s)\n";
  std::atomic<int> next{0};
  const auto run = [&]() {
    for (int i = next.fetch_add(1); i < n_cells; i = next.fetch_add(1)) {
      std::vector<double> values(spec.axes.size());
      int rem = i;
      for (int a = static_cast<int>(spec.axes.size()) - 1; a >= 0; --a) {
        values[a] = spec.axes[a].value(rem % dims[a]);
        rem /= dims[a];
      }
      cells[i] = evaluate_cell(doc, spec, type, values);
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }

  for (const auto& cell : cells)
    if (cell.failed) throw CliError{cell.error_code, cell.error};

  bool consistency_violation = false;
  sink.resolve("csv");
  std::ostringstream os;
  if (sink.format == "csv") {
    for (const auto& a : spec.axes) os << a.name << ',';
    os << "analytic_unique,analytic_margin,numeric_max_roots,witness_cost,"
          "witness_mu_mean,witness_signal\n";
  }
  json jrows = json::array();
  for (const auto& cell : cells) {
    if (cell.analytic_unique && cell.numeric_max_roots > 1)
      consistency_violation = true;
    if (sink.format == "csv") {
      for (double v : cell.axis_values) os << fmt17(v) << ',';
      os << (cell.analytic_unique ? 1 : 0) << ',' << fmt17(cell.analytic_margin)
         << ',' << cell.numeric_max_roots << ',' << fmt17(cell.witness_c) << ','
         << fmt17(cell.witness_mu) << ',';
      if (cell.witness_signal) os << fmt17(*cell.witness_signal);
      os << '\n';
    } else {
      json row;
      for (size_t a = 0; a < spec.axes.size(); ++a)
        row[spec.axes[a].name] = cell.axis_values[a];
      row["analytic_unique"] = cell.analytic_unique;
      row["analytic_margin"] = cell.analytic_margin;
      row["numeric_max_roots"] = cell.numeric_max_roots;
      row["witness_cost"] = cell.witness_c;
      row["witness_mu_mean"] = cell.witness_mu;
      if (cell.witness_signal) row["witness_signal"] = *cell.witness_signal;
      jrows.push_back(row);
    }
  }
  sink.write(sink.format == "csv" ? os.str() : jrows.dump(2));

  if (consistency_violation)
    throw CliError{kExitConsistency,
                   "analytic uniqueness contradicted by a multi-root cell"};
  return kExitOk;
}

// ------------------------------------------------------------- simulate ----

int cmd_simulate(const json& doc, OutputSink sink) {
  if (!doc.contains("simulate"))
    throw CliError{kExitConfig,
                   "simulate requires a 'simulate' section (theta, psi_star, "
                   "optional n, seed)"};
  const json& sim = doc.at("simulate");
  if (!sim.contains("theta") || !sim.contains("psi_star"))
    throw CliError{kExitConfig, "simulate needs 'theta' and 'psi_star'"};
  const double theta = sim.at("theta").get<double>();
  const double psi_star = sim.at("psi_star").get<double>();
  const uint64_t n = sim.value("n", 1000000ull);
  const uint64_t seed = sim.value("seed", 42ull);

  GameHandle game;
  open_game(doc, &game);
  gg_simulation_result res{};
  if (gg_simulate_attack(game.game, theta, psi_star, n, seed, &res) != GG_OK)
    throw CliError{kExitConfig, gg_last_error()};

  sink.resolve("json");
  if (sink.format == "csv") {
    std::ostringstream os;
    os << "attack_fraction_hat,analytic_attack,std_error,n_agents,seed,within_band\n"
       << fmt17(res.attack_fraction_hat) << ',' << fmt17(res.analytic_attack)
       << ',' << fmt17(res.std_error) << ',' << res.n_agents << ',' << res.seed
       << ',' << res.within_band << '\n';
    sink.write(os.str());
  } else {
    json out{{"attack_fraction_hat", res.attack_fraction_hat},
             {"analytic_attack", res.analytic_attack},
             {"std_error", res.std_error},
             {"n_agents", res.n_agents},
             {"seed", res.seed},
             {"within_band", res.within_band != 0}};
    sink.write(out.dump(2));
  }
  return res.within_band ? kExitOk : kExitSimulationBand;
}

// --------------------------------------------------------------- market ----

int cmd_market(const json& doc, OutputSink sink) {
  GameHandle game;
  open_game(doc, &game);
  gg_market_equilibrium me{};
  if (gg_solve_market(game.game, &me) != GG_OK)
    throw CliError{kExitConfig, gg_last_error()};

  const double alpha_x = doc.at("alpha_x").get<double>();
  const double gamma = doc.at("env").at("gamma").get<double>();
  const double sigma_eps = doc.at("env").at("sigma_eps").get<double>();
  const double ratio_check = me.eta1 / me.eta2 + alpha_x / (gamma * sigma_eps);

  sink.resolve("json");
  if (sink.format == "csv") {
    std::ostringstream os;
    os << "eta1,eta2,intercept,alpha_z,ratio_check\n"
       << fmt17(me.eta1) << ',' << fmt17(me.eta2) << ',' << fmt17(me.intercept)
       << ',' << fmt17(me.alpha_z) << ',' << fmt17(ratio_check) << '\n';
    sink.write(os.str());
  } else {
    json out{{"eta1", me.eta1},
             {"eta2", me.eta2},
             {"intercept", me.intercept},
             {"alpha_z", me.alpha_z},
             {"ratio_check", ratio_check}};
    sink.write(out.dump(2));
  }
  return kExitOk;
}

// --------------------------------------------------------------- verify ----

struct VerifyCollect {
  json rows = json::array();
  int failed_analytic = 0;
  int failed_simulation = 0;
};

void verify_cb(const char* name, int passed, int simulation, double value,
               double bound, void* user) {
  auto* col = static_cast<VerifyCollect*>(user);
  col->rows.push_back({{"check", name},
                       {"pass", passed != 0},
                       {"simulation", simulation != 0},
                       {"value", value},
                       {"bound", bound}});
  std::cerr << (passed ? "    ok  " : "  FAIL  ") << name << "  (value "
            << value << ", bound " << bound << ")\n";
}

int cmd_verify(uint64_t seed, OutputSink sink) {
  VerifyCollect col;
  if (gg_verify(seed, verify_cb, &col, &col.failed_analytic,
                &col.failed_simulation) != GG_OK)
    throw CliError{kExitConfig, gg_last_error()};

  sink.resolve("json");
  if (sink.format == "csv") {
    std::ostringstream os;
    os << "check,pass,simulation,value,bound\n";
    for (const auto& r : col.rows)
      os << r.at("check").get<std::string>() << ','
         << (r.at("pass").get<bool>() ? 1 : 0) << ','
         << (r.at("simulation").get<bool>() ? 1 : 0) << ','
         << fmt17(r.at("value").get<double>()) << ','
         << fmt17(r.at("bound").get<double>()) << '\n';
    sink.write(os.str());
  } else {
    sink.write(col.rows.dump(2));
  }
  if (col.failed_simulation > 0) return kExitSimulationBand;
  if (col.failed_analytic > 0) return kExitConsistency;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ggame — threshold equilibria of heterogeneous-prior "
               "coordination games"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  OutputSink sink;
  uint64_t verify_seed = 12345;

  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--set", sets, "dotted-key override, e.g. --set env.alpha_z=2");
  app.add_option("--out", sink.path, "output file (.csv/.json)");
  app.add_option("--format", sink.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* c_check = app.add_subcommand("check", "evaluate uniqueness conditions");
  auto* c_solve = app.add_subcommand("solve", "enumerate threshold equilibria");
  auto* c_sweep = app.add_subcommand("sweep", "regime map over parameter axes");
  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo attack-mass check");
  auto* c_market = app.add_subcommand("market", "price coefficients");
  auto* c_verify = app.add_subcommand("verify", "run the oracle cross-check suite");
  c_verify->add_option("--seed", verify_seed, "verification RNG seed");
  for (auto* sub : {c_check, c_solve, c_sweep, c_sim, c_market, c_verify})
    sub->fallthrough();  // global --config/--set/--out may follow the verb

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const json doc = build_config(config_path, sets);
    if (c_check->parsed()) return cmd_check(doc, sink);
    if (c_solve->parsed()) return cmd_solve(doc, sink);
    if (c_sweep->parsed()) return cmd_sweep(doc, sink);
    if (c_sim->parsed()) return cmd_simulate(doc, sink);
    if (c_market->parsed()) return cmd_market(doc, sink);
    if (c_verify->parsed()) return cmd_verify(verify_seed, sink);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
