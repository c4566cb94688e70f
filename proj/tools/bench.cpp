// Benchmark driver: instance generation, method runs, property-check
// suites, and plot-ready reporting for the regularized matrix game family.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "pdbundle/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCheckFailed = 2;
constexpr int kExitBudget = 3;

std::string resolve_output(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("PDBUNDLE_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return path;
  return std::string(dir) + "/" + path;
}

std::vector<std::uint64_t> seed_list(int count, std::uint64_t first) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < count; ++i) seeds.push_back(first + i);
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace pdbundle;
  CLI::App app{"matrix-game solver benchmark"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a random game instance");
  int gm = 100, gn = 100;
  double gdensity = 0.05, ggx = 0.05, ggy = 0.05;
  std::uint64_t gseed = 1;
  std::string gout = "instance.txt";
  gen->add_option("--m", gm, "rows of the payoff matrix");
  gen->add_option("--n", gn, "columns of the payoff matrix");
  gen->add_option("--density", gdensity, "nonzero density in (0,1]");
  gen->add_option("--gamma-x", ggx, "x-side regularization weight");
  gen->add_option("--gamma-y", ggy, "y-side regularization weight");
  gen->add_option("--seed", gseed, "generator seed");
  gen->add_option("--out", gout, "output path");

  // run
  auto* run = app.add_subcommand("run", "run one solver and log a CSV trace");
  std::string config_path;
  std::string method = "cs-spp";
  RunConfig cfg;
  bool method_set = false;
  run->add_option("--config", config_path, "key=value config file");
  run->add_option("--method", method, "solver name")
      ->each([&](const std::string&) { method_set = true; });
  run->add_option("--instance", cfg.instance_path, "instance file");
  run->add_option("--m", cfg.m);
  run->add_option("--n", cfg.n);
  run->add_option("--density", cfg.density);
  run->add_option("--gamma-x", cfg.gamma_x);
  run->add_option("--gamma-y", cfg.gamma_y);
  run->add_option("--seed", cfg.seed);
  run->add_option("--epsbar", cfg.eps_bar, "target gap tolerance");
  run->add_option("--lambda", cfg.lambda, "prox stepsize (method default if 0)");
  run->add_option("--lambda1", cfg.lambda1, "first dynamic stepsize (pb-spp)");
  run->add_option("--cuts", cfg.multi_cuts, "multi-cuts bundle size");
  run->add_option("--cg-rule", cfg.cg_rule,
                  "open-loop | adaptive | line-search");
  run->add_option("--cadence", cfg.log_cadence, "log every k outer iterations");
  run->add_option("--max-outer", cfg.max_outer, "outer iteration budget");
  run->add_flag("--improved", cfg.improved_gap,
                "use the weighted-average cycle gap (two-/multi-cuts)");
  run->add_option("--out", cfg.output_path, "CSV output path");

  // check
  auto* check = app.add_subcommand("check", "run a property-check suite");
  std::string suite = "duality";
  int nseeds = 10;
  std::uint64_t first_seed = 1;
  std::vector<int> dims{5, 10};
  check->add_option("--suite", suite,
                    "duality | certificates | rates | exact-solver");
  check->add_option("--seeds", nseeds, "number of seeds (0: vacuous pass)");
  check->add_option("--first-seed", first_seed, "first seed value");
  check->add_option("--dims", dims, "problem dimensions")->delimiter(',');

  // report
  auto* rep = app.add_subcommand("report", "summarize runs into plot data");
  std::vector<std::string> csvs;
  std::string prefix = "report";
  rep->add_option("csvs", csvs, "input CSV traces")->required();
  rep->add_option("--out", prefix, "output file prefix");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const GameInstance inst =
          generate_instance(gm, gn, gdensity, ggx, ggy, gseed);
      save_instance_file(resolve_output(gout), inst);
      std::cout << "wrote " << resolve_output(gout) << " ("
                << inst.A.entries.size() << " nonzeros, M=" << inst.M << ")\n";
      return kExitOk;
    }
    if (run->parsed()) {
      if (!config_path.empty()) cfg = load_run_config(config_path, cfg);
      if (method_set || config_path.empty()) cfg.method = parse_method(method);
      cfg.output_path = resolve_output(cfg.output_path);
      const RunOutcome outcome = run_experiment(cfg);
      std::cout << method_name(cfg.method, cfg.multi_cuts)
                << ": records=" << outcome.records.size()
                << " final_gap=" << outcome.final_gap
                << (outcome.reached_target ? " (target reached)"
                                           : " (budget exhausted)")
                << "\n";
      return outcome.reached_target ? kExitOk : kExitBudget;
    }
    if (check->parsed()) {
      const auto results =
          check_suite(suite, seed_list(nseeds, first_seed), dims);
      print_check_report(std::cout, results);
      return all_pass(results) ? kExitOk : kExitCheckFailed;
    }
    if (rep->parsed()) {
      write_report(csvs, resolve_output(prefix), std::cout);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
