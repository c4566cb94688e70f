#ifndef PDBUNDLE_HARNESS_HPP_
#define PDBUNDLE_HARNESS_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pdbundle/matrix_game.hpp"
#include "pdbundle/saddle.hpp"

namespace pdbundle {

enum class Method {
  CsSpp,
  PbSpp1Cut,
  PbSpp2Cut,
  PbSppMultiCut,
  Pdpb,
  Pds,
  Cg,
};

Method parse_method(const std::string& name);  // ConfigError on unknown
std::string method_name(Method m, int multi_cuts = 0);

struct RunConfig {
  Method method = Method::CsSpp;
  int multi_cuts = 10;                     // pb-spp-multicut bundle budget
  std::string cg_rule = "open-loop";       // open-loop | adaptive | line-search
  std::string instance_path;               // generate below when empty
  int m = 100;
  int n = 100;
  double density = 0.05;
  double gamma_x = 0.05;
  double gamma_y = 0.05;
  std::uint64_t seed = 1;
  double eps_bar = 1e-4;
  double lambda = 0.0;   // cs-spp/pdpb/pds/cg stepsize; 0 = method default
  double lambda1 = 0.0;  // pb-spp first stepsize; 0 = D / (4M)
  long log_cadence = 0;  // 0 = method default (1000 for cs-spp, 10 otherwise)
  long max_outer = -1;   // negative = method default budget, 0 = no steps
  bool improved_gap = false;
  std::string output_path;
};

// Flat key=value config; '#' starts a comment. Keys mirror the fields above.
RunConfig parse_run_config(std::istream& in, RunConfig base = {});
RunConfig load_run_config(const std::string& path, RunConfig base = {});

// One logged benchmark row.
struct RunRecord {
  std::string method;
  long outer_iter = 0;
  long total_inner_iters = 0;
  long prox_evals = 0;
  long oracle_calls = 0;
  double elapsed_seconds = 0.0;
  double gap = 0.0;
};

inline constexpr const char* kCsvHeader =
    "method,outer_iter,total_inner_iters,prox_evals,oracle_calls,"
    "elapsed_seconds,gap";

void write_csv(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_csv(std::istream& in);  // validates the schema
std::vector<RunRecord> read_csv_file(const std::string& path);

struct RunOutcome {
  std::vector<RunRecord> records;
  double final_gap = 0.0;
  bool reached_target = false;
  bool budget_exhausted = false;
};

// Runs one configured experiment and writes its CSV (when output_path is
// set). Deterministic for a fixed config and seed, elapsed_seconds aside.
RunOutcome run_experiment(const RunConfig& cfg);

// Reference-equivalent fast loop for CS-SPP on a game instance; exposed so
// tests can pin it against cs_spp_run step by step.
SaddleRunResult cs_spp_game_run(const GameInstance& game, double lambda,
                                const CsSppOptions& opts);

SaddleInstance make_saddle(const GameInstance& game);

// Batch property checks. An empty seed list is a vacuous pass.
struct CheckResult {
  std::string check;
  std::uint64_t seed = 0;
  int dim = 0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

std::vector<CheckResult> check_suite(const std::string& suite,
                                     const std::vector<std::uint64_t>& seeds,
                                     const std::vector<int>& dims);
bool all_pass(const std::vector<CheckResult>& results);
void print_check_report(std::ostream& out,
                        const std::vector<CheckResult>& results);

// Aligns several run CSVs into plot-ready series (gap versus elapsed time,
// prox evaluations, inner iterations, outer iterations) and prints a summary
// table. Gaps are floored at 1e-16 so log-scale plots stay finite.
struct ReportSummary {
  std::string method;
  long outer_iter = 0;
  long total_inner_iters = 0;
  long prox_evals = 0;
  double elapsed_seconds = 0.0;
  double final_gap = 0.0;
};

std::vector<ReportSummary> write_report(const std::vector<std::string>& csvs,
                                        const std::string& out_prefix,
                                        std::ostream& summary_out);

}  // namespace pdbundle

#endif  // PDBUNDLE_HARNESS_HPP_
