// Command-line front end: validate, solve, simulate, gridworld, bench.
//
// Exit codes: 0 success, 1 domain error, 2 usage or parse error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmdp/gridworld.hpp"
#include "cmdp/io.hpp"
#include "cmdp/oracle.hpp"
#include "cmdp/sim.hpp"
#include "cmdp/solvers.hpp"
#include "cmdp/validate.hpp"

namespace {

using namespace cmdp;

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

StateSet parse_targets(const Cmdp& model, const std::string& list) {
  StateSet set(model.num_states(), false);
  for (const std::string& name : split(list, ',')) {
    auto s = model.find_state(name);
    if (!s) throw DomainError("unknown target state '" + name + "'");
    set[*s] = true;
  }
  return set;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path + "'");
  out << content;
}

io::ModelDocument load_valid_model(const std::string& path) {
  io::ModelDocument doc = io::load_model(path);
  ValidationReport report = validate(doc.model);
  if (!report.ok()) {
    std::string msg = "invalid model:";
    for (const Violation& v : report.violations) msg += "\n  " + to_string(v.kind) + ": " + v.message;
    throw DomainError(msg);
  }
  return doc;
}

int run_validate(const std::string& path) {
  io::ModelDocument doc = io::load_model(path);
  ValidationReport report = validate(doc.model);
  if (report.ok()) {
    std::cout << "valid: " << doc.model.num_states() << " states, capacity " << doc.model.capacity() << "\n";
    return kOk;
  }
  for (const Violation& v : report.violations) std::cerr << to_string(v.kind) << ": " << v.message << "\n";
  return kDomainError;
}

struct SolveOptions {
  std::string model;
  std::string objective = "safety";
  std::string targets;
  std::string heuristic = "standard";
  double theta = 0.0;
  bool theta_given = false;
  std::string out;
  bool via_product = false;
  bool json = false;
};

HeuristicMode make_mode(const std::string& heuristic, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw UsageError("theta must lie in [0, 1]");
  if (heuristic == "standard") return HeuristicMode::standard();
  if (heuristic == "goal") return HeuristicMode::goal_leaning();
  return HeuristicMode::threshold(theta);
}

int run_solve(const SolveOptions& opt) {
  HeuristicMode mode = make_mode(opt.heuristic, opt.theta);
  io::ModelDocument doc = load_valid_model(opt.model);
  const Cmdp& model = doc.model;

  StateSet targets = doc.targets;
  bool have_targets = doc.has_targets;
  if (!opt.targets.empty()) {
    targets = parse_targets(model, opt.targets);
    have_targets = true;
  }
  const bool needs_targets = opt.objective != "safety";
  if (needs_targets && (!have_targets || std::find(targets.begin(), targets.end(), true) == targets.end()))
    throw UsageError("objective '" + opt.objective + "' needs --targets");

  SynthesisResult result;
  if (opt.objective == "safety")
    result = safety(model);
  else if (opt.objective == "posreach")
    result = positive_reachability(model, targets, mode);
  else if (opt.objective == "buchi")
    result = buchi(model, targets, mode);
  else if (opt.via_product)
    result = almost_sure_reach_via_product(model, targets, mode);
  else
    result = almost_sure_reach(model, targets, mode);

  if (opt.json) {
    io::Json out = io::Json::object();
    out["objective"] = opt.objective;
    out["values"] = io::levels_to_json(model, result.values);
    out["iterations"] = result.iterations;
    std::cout << io::dump(out);
  } else {
    for (StateId s = 0; s < model.num_states(); ++s)
      std::cout << model.state_name(s) << ' ' << to_string(result.values[s]) << '\n';
  }
  if (!opt.out.empty()) write_output(opt.out, io::dump(io::strategy_to_json(model, result.selector)));
  return kOk;
}

struct SimulateOptions {
  std::string model;
  std::string strategy;
  std::string from;
  Amount load = 0;
  std::size_t episodes = 1000;
  std::size_t max_steps = 200;
  std::uint64_t seed = 0;
  std::string targets;
  std::string trace;
};

int run_simulate(const SimulateOptions& opt) {
  io::ModelDocument doc = load_valid_model(opt.model);
  const Cmdp& model = doc.model;
  RuleSelector selector = io::load_strategy(model, opt.strategy);

  StateSet targets = opt.targets.empty() ? doc.targets : parse_targets(model, opt.targets);
  if (std::find(targets.begin(), targets.end(), true) == targets.end())
    throw UsageError("simulate needs --targets or targets in the model file");
  auto start = model.find_state(opt.from);
  if (!start) throw DomainError("unknown state '" + opt.from + "'");
  if (opt.load < 0 || opt.load > model.capacity())
    throw DomainError("load " + std::to_string(opt.load) + " outside 0.." + std::to_string(model.capacity()));

  SimConfig config;
  config.episodes = opt.episodes;
  config.max_steps = opt.max_steps;
  config.seed = opt.seed;
  config.start = *start;
  config.load = opt.load;
  config.record_traces = !opt.trace.empty();
  ErtReport report = estimate_ert(model, selector, targets, config);

  if (!opt.trace.empty()) {
    std::ostringstream csv;
    write_trace_csv(csv, model, report);
    write_output(opt.trace, csv.str());
  }
  std::cout << io::dump(io::report_to_json(report, opt.max_steps));
  return kOk;
}

struct GridOptions {
  int size = 10;
  std::string reloads;
  std::string targets;
  Amount capacity = 0;
  std::string p = "0.8";
  Amount weak_cost = 1;
  Amount strong_cost = 2;
  std::string out;
};

std::vector<grid::Cell> parse_cells(const std::string& list) {
  std::vector<grid::Cell> cells;
  for (const std::string& item : split(list, ',')) {
    int row = 0;
    int col = 0;
    char tail = 0;
    if (std::sscanf(item.c_str(), "r%dc%d%c", &row, &col, &tail) != 2)
      throw UsageError("cell '" + item + "' is not of the form r<row>c<col>");
    cells.push_back({row, col});
  }
  return cells;
}

int run_gridworld(const GridOptions& opt) {
  grid::GridSpec spec;
  spec.size = opt.size;
  spec.reloads = parse_cells(opt.reloads);
  spec.targets = parse_cells(opt.targets);
  spec.capacity = opt.capacity;
  spec.weak_cost = opt.weak_cost;
  spec.strong_cost = opt.strong_cost;
  try {
    spec.weak_success = Rational::parse(opt.p);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--p: ") + e.what());
  }
  grid::GridWorld world;
  try {
    world = grid::generate(spec);
  } catch (const grid::GenerationError& e) {
    throw DomainError(e.what());
  }
  write_output(opt.out, io::dump(io::model_to_json(world.model, &world.targets)));
  return kOk;
}

struct BenchOptions {
  std::string sizes = "10,20";
  std::string factors = "1,2,3,5,10";
  std::size_t repeat = 3;
  bool csv = false;
};

template <typename F>
double mean_seconds(std::size_t repeat, F&& f) {
  double total = 0.0;
  for (std::size_t i = 0; i < repeat; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    total += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return total / static_cast<double>(repeat);
}

int run_bench(const BenchOptions& opt) {
  if (opt.repeat == 0) throw UsageError("--repeat must be positive");
  if (opt.csv) std::cout << "objective,n,capacity,solver,mean_seconds\n";
  for (const std::string& size_text : split(opt.sizes, ',')) {
    int n = std::stoi(size_text);
    for (const std::string& factor_text : split(opt.factors, ',')) {
      Amount cap = static_cast<Amount>(n) * std::stoll(factor_text);
      grid::GridWorld world = grid::generate(grid::scaling_spec(n, cap));
      double native = mean_seconds(opt.repeat, [&] { (void)buchi(world.model, world.targets); });
      double explicit_time = mean_seconds(opt.repeat, [&] {
        auto mdp = oracle::encode(world.model);
        (void)oracle::almost_sure(mdp, world.targets, oracle::AlmostSureKind::Buchi);
      });
      if (opt.csv) {
        std::cout << "buchi," << n << ',' << cap << ",native," << native << '\n';
        std::cout << "buchi," << n << ',' << cap << ",explicit," << explicit_time << '\n';
      } else {
        std::cout << "n=" << n << " capacity=" << cap << " native=" << native << "s explicit=" << explicit_time
                  << "s\n";
      }
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strategy synthesis for consumption MDPs"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a model file");
  validate_cmd->add_option("model", validate_path, "Model JSON")->required();

  SolveOptions solve_opt;
  auto* solve_cmd = app.add_subcommand("solve", "Compute minimal initial loads and a witness strategy");
  solve_cmd->add_option("model", solve_opt.model, "Model JSON")->required();
  solve_cmd->add_option("--objective", solve_opt.objective, "Objective")
      ->check(CLI::IsMember({"safety", "posreach", "buchi", "asreach"}));
  solve_cmd->add_option("--targets", solve_opt.targets, "Comma-separated target states");
  solve_cmd->add_option("--heuristic", solve_opt.heuristic, "Action selection")
      ->check(CLI::IsMember({"standard", "goal", "threshold"}));
  solve_cmd->add_option("--theta", solve_opt.theta, "Probability threshold for --heuristic threshold");
  solve_cmd->add_option("--out", solve_opt.out, "Write the strategy JSON here");
  solve_cmd->add_flag("--via-product", solve_opt.via_product, "Solve asreach through the sink product");
  solve_cmd->add_flag("--json", solve_opt.json, "Print values as JSON");

  SimulateOptions sim_opt;
  auto* sim_cmd = app.add_subcommand("simulate", "Estimate the expected reachability time of a strategy");
  sim_cmd->add_option("model", sim_opt.model, "Model JSON")->required();
  sim_cmd->add_option("strategy", sim_opt.strategy, "Strategy JSON")->required();
  sim_cmd->add_option("--from", sim_opt.from, "Start state")->required();
  sim_cmd->add_option("--load", sim_opt.load, "Initial load")->required();
  sim_cmd->add_option("--episodes", sim_opt.episodes, "Number of episodes")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--max-steps", sim_opt.max_steps, "Censoring horizon")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim_opt.seed, "RNG seed");
  sim_cmd->add_option("--targets", sim_opt.targets, "Comma-separated target states");
  sim_cmd->add_option("--trace", sim_opt.trace, "Write the CSV trace here ('-' for stdout)");

  GridOptions grid_opt;
  auto* grid_cmd = app.add_subcommand("gridworld", "Generate a grid-world model");
  grid_cmd->add_option("--size", grid_opt.size, "Cells per side")->required();
  grid_cmd->add_option("--reloads", grid_opt.reloads, "Comma-separated cells r<row>c<col>");
  grid_cmd->add_option("--targets", grid_opt.targets, "Comma-separated cells r<row>c<col>");
  grid_cmd->add_option("--capacity", grid_opt.capacity, "Capacity")->required();
  grid_cmd->add_option("--p", grid_opt.p, "Weak move success probability");
  grid_cmd->add_option("--weak-cost", grid_opt.weak_cost, "Consumption of weak moves");
  grid_cmd->add_option("--strong-cost", grid_opt.strong_cost, "Consumption of strong moves");
  grid_cmd->add_option("--out", grid_opt.out, "Output file (stdout if omitted)");

  BenchOptions bench_opt;
  auto* bench_cmd = app.add_subcommand("bench", "Time native Büchi against the explicit product");
  bench_cmd->add_option("--sizes", bench_opt.sizes, "Comma-separated grid sizes");
  bench_cmd->add_option("--factors", bench_opt.factors, "Capacities as multiples of the size");
  bench_cmd->add_option("--repeat", bench_opt.repeat, "Runs per measurement");
  bench_cmd->add_flag("--csv", bench_opt.csv, "Emit objective,n,capacity,solver,mean_seconds rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*validate_cmd) return run_validate(validate_path);
    if (*solve_cmd) return run_solve(solve_opt);
    if (*sim_cmd) return run_simulate(sim_opt);
    if (*grid_cmd) return run_gridworld(grid_opt);
    if (*bench_cmd) return run_bench(bench_opt);
  } catch (const io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsageError;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return kUsageError;
}
