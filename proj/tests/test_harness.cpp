#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pdbundle/harness.hpp"
#include "pdbundle/pdpb.hpp"

using namespace pdbundle;

namespace {

std::string make_temp_instance(std::uint64_t seed) {
  const GameInstance g = generate_instance(8, 8, 0.4, 0.05, 0.05, seed);
  const std::string path =
      "harness_test_instance_" + std::to_string(seed) + ".txt";
  save_instance_file(path, g);
  return path;
}

}  // namespace

TEST_CASE("method names parse both ways") {
  for (const char* name :
       {"cs-spp", "pb-spp-1cut", "pb-spp-2cut", "pb-spp-multicut", "pdpb",
        "pds", "cg"}) {
    CHECK(method_name(parse_method(name)) == name);
  }
  CHECK(method_name(Method::PbSppMultiCut, 10) == "pb-spp-multicut(10)");
  CHECK_THROWS_AS(parse_method("gradient-descent"), ConfigError);
}

TEST_CASE("config files parse with diagnostics") {
  std::stringstream good(
      "# benchmark setup\n"
      "method=pb-spp-2cut\n"
      "m=30\n"
      "n = 20\n"
      "eps_bar=1e-3\n"
      "cadence=5\n"
      "improved=true\n"
      "out=trace.csv\n");
  const RunConfig cfg = parse_run_config(good);
  CHECK(cfg.method == Method::PbSpp2Cut);
  CHECK(cfg.m == 30);
  CHECK(cfg.n == 20);
  CHECK(cfg.eps_bar == 1e-3);
  CHECK(cfg.log_cadence == 5);
  CHECK(cfg.improved_gap);
  CHECK(cfg.output_path == "trace.csv");

  std::stringstream unknown("method=pds\nwat=1\n");
  CHECK_THROWS_WITH_AS(parse_run_config(unknown), doctest::Contains("line 2"),
                       ConfigError);
  std::stringstream bad_value("m=abc\n");
  CHECK_THROWS_AS(parse_run_config(bad_value), ConfigError);
  std::stringstream no_eq("method\n");
  CHECK_THROWS_AS(parse_run_config(no_eq), ConfigError);
}

TEST_CASE("csv round trip and schema validation") {
  std::vector<RunRecord> records{{"pds", 1, 1, 1, 2, 0.5, 1e-3},
                                 {"pds", 2, 2, 2, 4, 1.0, 5e-4}};
  std::stringstream buf;
  write_csv(buf, records);
  const std::vector<RunRecord> back = read_csv(buf);
  REQUIRE(back.size() == 2);
  CHECK(back[1].gap == 5e-4);
  CHECK(back[1].oracle_calls == 4);

  std::stringstream missing("method,outer_iter,gap\npds,1,0.5\n");
  CHECK_THROWS_WITH_AS(read_csv(missing),
                       doctest::Contains("total_inner_iters"), ConfigError);
  std::stringstream malformed(std::string(kCsvHeader) + "\npds,x,1,1,1,0.0,1\n");
  CHECK_THROWS_WITH_AS(read_csv(malformed), doctest::Contains("line 2"),
                       ConfigError);
}

TEST_CASE("runs are deterministic apart from the clock column") {
  RunConfig cfg;
  cfg.method = Method::Pds;
  cfg.m = cfg.n = 10;
  cfg.density = 0.4;
  cfg.seed = 5;
  cfg.eps_bar = 0.05;
  cfg.max_outer = 4000;
  cfg.log_cadence = 500;
  const RunOutcome a = run_experiment(cfg);
  const RunOutcome b = run_experiment(cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].method == b.records[i].method);
    CHECK(a.records[i].outer_iter == b.records[i].outer_iter);
    CHECK(a.records[i].total_inner_iters == b.records[i].total_inner_iters);
    CHECK(a.records[i].prox_evals == b.records[i].prox_evals);
    CHECK(a.records[i].oracle_calls == b.records[i].oracle_calls);
    CHECK(a.records[i].gap == b.records[i].gap);  // bitwise
  }
}

TEST_CASE("the fast game loop reproduces the reference iteration exactly") {
  const GameInstance g = generate_instance(12, 9, 0.3, 0.05, /*gy=*/0.02, 9);
  const SaddleInstance inst = make_saddle(g);
  const double lambda = 0.03;
  CsSppOptions opts;
  opts.max_iters = 400;
  opts.gap_cadence = 50;
  const SaddleRunResult ref = cs_spp_run(
      inst, Vector::Constant(9, 1.0 / 9), Vector::Constant(12, 1.0 / 12),
      lambda, opts);
  const SaddleRunResult fast = cs_spp_game_run(g, lambda, opts);
  REQUIRE(ref.gap_trace.size() == fast.gap_trace.size());
  for (std::size_t i = 0; i < ref.gap_trace.size(); ++i) {
    CHECK(ref.gap_trace[i].gap == fast.gap_trace[i].gap);  // bitwise
  }
  CHECK((ref.x_bar - fast.x_bar).norm() == 0.0);
  CHECK((ref.y_bar - fast.y_bar).norm() == 0.0);
}

TEST_CASE("counters audit against the structure of each method") {
  RunConfig cfg;
  cfg.m = cfg.n = 8;
  cfg.density = 0.4;
  cfg.seed = 3;
  cfg.eps_bar = 0.02;
  cfg.log_cadence = 10;

  cfg.method = Method::CsSpp;
  cfg.max_outer = 300;
  cfg.lambda = 0.01;
  for (const RunRecord& r : run_experiment(cfg).records) {
    CHECK(r.prox_evals == 2 * r.outer_iter);
    CHECK(r.oracle_calls == 2 * r.outer_iter);
  }

  cfg.method = Method::Pds;
  cfg.max_outer = 200;
  cfg.lambda = 0.05;
  for (const RunRecord& r : run_experiment(cfg).records) {
    CHECK(r.prox_evals == r.outer_iter);
    CHECK(r.total_inner_iters == r.outer_iter);
  }

  // one-cut bundle: exactly one prox per inner iteration
  cfg.method = Method::PbSpp1Cut;
  cfg.lambda = 0.0;
  cfg.max_outer = 10;
  cfg.log_cadence = 1;
  for (const RunRecord& r : run_experiment(cfg).records) {
    CHECK(r.prox_evals == r.total_inner_iters);
  }
}

TEST_CASE("a zero budget emits only the initial record") {
  RunConfig cfg;
  cfg.method = Method::CsSpp;
  cfg.m = cfg.n = 6;
  cfg.density = 0.5;
  cfg.seed = 1;
  cfg.max_outer = 0;
  const RunOutcome out = run_experiment(cfg);
  REQUIRE(out.records.size() == 1);
  CHECK(out.records[0].outer_iter == 0);
  CHECK(out.records[0].prox_evals == 0);
}

TEST_CASE("instance files feed runs") {
  const std::string path = make_temp_instance(17);
  RunConfig cfg;
  cfg.method = Method::Pdpb;
  cfg.instance_path = path;
  cfg.eps_bar = 1e-3;
  cfg.log_cadence = 1;
  const RunOutcome out = run_experiment(cfg);
  CHECK(out.reached_target);
  CHECK(out.final_gap <= 10.0 * cfg.eps_bar);
  std::remove(path.c_str());
}

TEST_CASE("cg runs terminate on the Wolfe gap") {
  RunConfig cfg;
  cfg.method = Method::Cg;
  cfg.m = cfg.n = 8;
  cfg.density = 0.4;
  cfg.seed = 23;
  cfg.eps_bar = 1e-6;
  cfg.lambda = 0.3;
  cfg.max_outer = 20000;
  cfg.log_cadence = 100;
  for (const char* rule : {"open-loop", "adaptive", "line-search"}) {
    cfg.cg_rule = rule;
    const RunOutcome out = run_experiment(cfg);
    CHECK(out.reached_target);
    CHECK(out.final_gap <= cfg.eps_bar);
  }
  cfg.cg_rule = "secant";
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("report aligns runs and validates inputs") {
  RunConfig cfg;
  cfg.m = cfg.n = 6;
  cfg.density = 0.5;
  cfg.seed = 2;
  cfg.eps_bar = 0.05;
  cfg.log_cadence = 50;
  cfg.max_outer = 500;

  std::vector<std::string> paths;
  int tag = 0;
  for (Method m : {Method::Pds, Method::Pdpb}) {
    cfg.method = m;
    cfg.lambda = m == Method::Pds ? 0.02 : 1.0;
    cfg.output_path = "harness_report_" + std::to_string(tag++) + ".csv";
    run_experiment(cfg);
    paths.push_back(cfg.output_path);
  }
  std::stringstream table;
  const auto summaries = write_report(paths, "harness_report", table);
  CHECK(summaries.size() == 2);
  CHECK(table.str().find("pds") != std::string::npos);

  std::ifstream probe("harness_report_gap_vs_prox.csv");
  std::string header;
  REQUIRE(std::getline(probe, header));
  CHECK(header == "method,prox_evals,gap");

  for (const std::string& p : paths) std::remove(p.c_str());
  for (const char* suffix :
       {"_gap_vs_time.csv", "_gap_vs_prox.csv", "_gap_vs_inner.csv",
        "_gap_vs_outer.csv"}) {
    std::remove(("harness_report" + std::string(suffix)).c_str());
  }
}

TEST_CASE("check suites pass and an empty seed list is vacuous") {
  CHECK(all_pass(check_suite("exact-solver", {1, 2}, {})));
  CHECK(all_pass(check_suite("duality", {3}, {4, 7})));
  const auto empty = check_suite("rates", {}, {5});
  CHECK(empty.empty());
  CHECK(all_pass(empty));
  std::stringstream out;
  print_check_report(out, empty);
  CHECK(out.str().find("vacuous") != std::string::npos);
  CHECK_THROWS_AS(check_suite("nonsense", {1}, {2}), ConfigError);
}
