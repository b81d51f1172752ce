// Command-line front end: solve, reduce, verify, bench, plot.
// Exit codes: 0 success, 1 input error, 2 verification failure.

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "gale/bench.hpp"
#include "gale/instance_io.hpp"
#include "gale/plot.hpp"
#include "gale/solvers.hpp"
#include "gale/verify.hpp"

using nlohmann::json;
using namespace gale;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kVerifyFailed = 2;

struct RunConfig {
  std::string problem;
  std::string instance;
  std::optional<double> epsilon;
  std::uint64_t seed = 0;
  bool deterministic = false;
  int workers = 1;
  bool memoize = false;
  std::string out;
  // reduce
  std::string from, to;
  // verify / plot
  std::string solution;
  int resolution = 48;
  // bench
  std::string family = "argmax";
  std::vector<int> sizes{2};
  std::vector<double> epsilons{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  int repetitions = 3;
};

double checked_epsilon(const RunConfig& cfg) {
  if (!cfg.epsilon) throw InputError("--epsilon is required");
  const double e = *cfg.epsilon;
  if (!(e > 0.0 && e < 0.25)) throw InputError("--epsilon must lie in (0, 1/4), got " + std::to_string(e));
  return e;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << text;
  } else {
    write_text_file(cfg.out, text);
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

template <typename T>
const T& require_kind(const AnyInstance& inst, const std::string& problem) {
  if (const T* p = std::get_if<T>(&inst)) return *p;
  throw InputError("instance of kind " + problem_kind(inst) + " cannot be solved as " + problem);
}

int cmd_solve(const RunConfig& cfg) {
  const AnyInstance inst = load_instance(cfg.instance);
  SolveOptions opts;
  opts.workers = cfg.workers;
  opts.memoize = cfg.memoize;

  json doc;
  Report report;
  if (cfg.problem == "sperner") {
    const auto& s = require_kind<SpernerInstance>(inst, cfg.problem);
    if (s.kind == SpernerKind::Triangle) {
      const TriangleSolution sol = solve_sperner_triangle(s, opts);
      doc = solution_to_json(sol);
      report = verify_solution(s, sol);
    } else {
      const SpernerSolution sol = solve_sperner_bruteforce(s, opts);
      doc = solution_to_json(sol);
      report = verify_solution(s, sol);
    }
  } else {
    const double eps = checked_epsilon(cfg);
    Solution sol;
    if (cfg.problem == "housing") {
      const auto& h = require_kind<HousingInstance>(inst, cfg.problem);
      sol = solve_housing(h, eps, opts);
      report = verify_solution(h, sol, eps);
    } else if (cfg.problem == "rkkm") {
      const RkkmInstance r = as_rkkm(inst);
      sol = solve_rkkm(r, eps, opts);
      report = verify_solution(r, sol, eps);
    } else if (cfg.problem == "kkm") {
      const auto& k = require_kind<KkmInstance>(inst, cfg.problem);
      sol = solve_kkm(k, eps, opts);
      report = verify_solution(k, sol, eps);
    } else if (cfg.problem == "cake") {
      const auto& c = require_kind<CakeInstance>(inst, cfg.problem);
      sol = solve_cake(c, eps, opts);
      report = verify_solution(c, sol, eps);
    } else {
      throw InputError("unknown problem \"" + cfg.problem + "\"");
    }
    doc = solution_to_json(sol);
    doc["epsilon"] = eps;
  }
  doc["problem"] = cfg.problem == "sperner" ? problem_kind(inst) : cfg.problem;
  doc["instance_kind"] = descriptor_of(inst).value("kind", "");
  doc["seed"] = cfg.seed;
  doc["workers"] = cfg.workers;
  doc["memoize"] = cfg.memoize;
  doc["verified"] = report.passed;
  doc["report"] = report.to_json();
  if (!cfg.deterministic) doc["timestamp"] = utc_timestamp();
  emit(cfg, doc.dump(2) + "\n");
  if (!report.passed) std::cerr << "solution failed verification\n";
  return report.passed ? kOk : kVerifyFailed;
}

std::string normalise_kind(const std::string& kind) {
  if (kind == "housing-quasilinear") return "housing";
  if (kind == "cake-piecewise") return "cake";
  if (kind == "kkm-weighted-argmax") return "kkm";
  return kind;
}

int cmd_reduce(const RunConfig& cfg) {
  const std::string from = normalise_kind(cfg.from);
  const std::string to = normalise_kind(cfg.to);
  const std::vector<std::string> path = reduction_path(from, to);
  AnyInstance current = load_instance(cfg.instance);
  if (from == "rkkm") current = as_rkkm(current);
  if (problem_kind(current) != from) {
    throw InputError("instance is a " + problem_kind(current) + " instance, not " + from);
  }
  double eps = 0.0;
  if (path.front() != "sperner2d_to_kkm") eps = checked_epsilon(cfg);
  json steps = json::array();
  for (const auto& name : path) {
    if (name == "sperner2d_to_kkm") eps = 0.0;
    ReductionStep step = apply_reduction(current, name, eps);
    steps.push_back(json{{"reduction", step.name}, {"epsilon", step.source_epsilon}, {"target_epsilon", step.target_epsilon}});
    eps = step.target_epsilon;
    current = std::move(step.target);
  }
  json doc = descriptor_of(current);
  emit(cfg, doc.dump(2) + "\n");
  std::cerr << "reduced " << from << " -> " << to << " via";
  for (const auto& s : steps) std::cerr << ' ' << s["reduction"].get<std::string>();
  std::cerr << "\n";
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  const AnyInstance inst = load_instance(cfg.instance);
  const json sol = read_json_file(cfg.solution);
  if (!sol.contains("problem") || !sol["problem"].is_string()) throw InputError("solution: missing field \"problem\"");
  const std::string problem = sol["problem"].get<std::string>();
  double eps = 0.0;
  if (problem != "sperner-triangle" && problem != "sperner-cube") {
    if (cfg.epsilon) {
      eps = checked_epsilon(cfg);
    } else if (sol.contains("epsilon") && sol["epsilon"].is_number()) {
      eps = sol["epsilon"].get<double>();
    } else {
      throw InputError("solution: missing field \"epsilon\" and no --epsilon given");
    }
  }
  Report report;
  if (problem == "housing") {
    report = verify_solution(require_kind<HousingInstance>(inst, problem), solution_from_json(sol), eps);
  } else if (problem == "rkkm") {
    report = verify_solution(as_rkkm(inst), solution_from_json(sol), eps);
  } else if (problem == "kkm") {
    report = verify_solution(require_kind<KkmInstance>(inst, problem), solution_from_json(sol), eps);
  } else if (problem == "cake") {
    report = verify_solution(require_kind<CakeInstance>(inst, problem), solution_from_json(sol), eps);
  } else if (problem == "sperner-cube") {
    report = verify_solution(require_kind<SpernerInstance>(inst, problem), sperner_solution_from_json(sol));
  } else if (problem == "sperner-triangle") {
    report = verify_solution(require_kind<SpernerInstance>(inst, problem), triangle_solution_from_json(sol));
  } else {
    throw InputError("solution: unknown problem \"" + problem + "\"");
  }
  emit(cfg, report.to_json().dump(2) + "\n");
  return report.passed ? kOk : kVerifyFailed;
}

int cmd_bench(const RunConfig& cfg) {
  SolveOptions opts;
  opts.workers = cfg.workers;
  opts.memoize = cfg.memoize;
  try {
    emit(cfg, bench_csv(run_bench(cfg.family, cfg.sizes, cfg.epsilons, cfg.repetitions, cfg.seed, opts)));
  } catch (const InvariantBroken& e) {
    std::cerr << e.what() << "\n";
    return kVerifyFailed;
  }
  return kOk;
}

int cmd_plot(const RunConfig& cfg) {
  const AnyInstance inst = load_instance(cfg.instance);
  std::optional<json> sol;
  if (!cfg.solution.empty()) sol = read_json_file(cfg.solution);
  emit(cfg, plot_svg(inst, sol, cfg.resolution));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate housing-market equilibria and Rainbow-KKM points"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--instance", cfg.instance, "instance JSON file")->required();
    sub->add_option("--out", cfg.out, "output file (default stdout)");
  };

  auto* solve = app.add_subcommand("solve", "solve an instance and verify the result");
  solve->add_option("problem", cfg.problem, "housing | rkkm | kkm | cake | sperner")
      ->required()
      ->check(CLI::IsMember({"housing", "rkkm", "kkm", "cake", "sperner"}));
  common(solve);
  solve->add_option("--epsilon", cfg.epsilon, "approximation in (0, 1/4)");
  solve->add_option("--seed", cfg.seed, "seed recorded with the run");
  solve->add_option("--workers", cfg.workers, "worker threads for the grid scan")->check(CLI::PositiveNumber);
  solve->add_flag("--memoize", cfg.memoize, "cache oracle answers");
  solve->add_flag("--deterministic", cfg.deterministic, "omit the timestamp");

  auto* reduce = app.add_subcommand("reduce", "write a composed instance for a reduction chain");
  reduce->add_option("--from", cfg.from, "source problem kind")->required();
  reduce->add_option("--to", cfg.to, "target problem kind")->required();
  reduce->add_option("--epsilon", cfg.epsilon, "source approximation in (0, 1/4)");
  common(reduce);

  auto* verify = app.add_subcommand("verify", "re-verify a solution file");
  common(verify);
  verify->add_option("--solution", cfg.solution, "solution JSON file")->required();
  verify->add_option("--epsilon", cfg.epsilon, "override the recorded approximation");

  auto* bench = app.add_subcommand("bench", "query counts against their bounds, as CSV");
  bench->add_option("--family", cfg.family, "argmax | quasilinear | cake")
      ->check(CLI::IsMember({"argmax", "quasilinear", "cake"}));
  bench->add_option("--n", cfg.sizes, "agent counts")->delimiter(',');
  bench->add_option("--epsilons", cfg.epsilons, "approximation sweep")->delimiter(',');
  bench->add_option("--repetitions", cfg.repetitions, "instances per cell")->check(CLI::PositiveNumber);
  bench->add_option("--seed", cfg.seed, "base seed");
  bench->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
  bench->add_flag("--memoize", cfg.memoize, "cache oracle answers");
  bench->add_option("--out", cfg.out, "output CSV (default stdout)");

  auto* plot = app.add_subcommand("plot", "render a 2D instance as SVG");
  common(plot);
  plot->add_option("--solution", cfg.solution, "solution JSON to overlay");
  plot->add_option("--resolution", cfg.resolution, "sample grid per triangle side")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*solve) return cmd_solve(cfg);
    if (*reduce) return cmd_reduce(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*bench) return cmd_bench(cfg);
    if (*plot) return cmd_plot(cfg);
  } catch (const gale::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
