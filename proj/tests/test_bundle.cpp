#include <doctest.h>

#include <cmath>

#include "pdbundle/bundle.hpp"
#include "pdbundle/matrix_game.hpp"
#include "pdbundle/pdcp.hpp"
#include "support.hpp"

using namespace pdbundle;

namespace {

Cut affine_cut(const Vector& anchor, double value, const Vector& grad) {
  return Cut{anchor, value, grad};
}

Cut random_cut(Rng& rng, int n, double grad_scale) {
  Cut c;
  c.anchor = rng.simplex_point(n);
  c.anchor_value = rng.uniform(-1.0, 1.0);
  c.grad = grad_scale * rng.normal_vector(n).normalized();
  return c;
}

}  // namespace

TEST_CASE("one-cut model prox solves the simplex example in closed form") {
  const Composite h = simplex_composite();
  Vector x0 = Vector::Constant(2, 0.5);
  Vector c(2);
  c << 1.0, 0.0;
  // aggregate represents u -> <c, u>
  const BundleModel model = make_one_cut(affine_cut(x0, c.dot(x0), c));
  const ModelProxSolution sol = solve_model_prox(model, h, x0, 1.0);
  Vector expected(2);
  expected << 0.0, 1.0;
  CHECK((sol.x - expected).norm() <= 1e-14);
  CHECK((sol.s - c).norm() == 0.0);
  CHECK(sol.m == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(sol.multipliers.size() == 1);
  CHECK(sol.multipliers[0] == 1.0);
}

TEST_CASE("two-cut solve with duplicate cuts degenerates to one cut") {
  const Composite h = simplex_composite();
  Rng rng(3);
  const Vector x0 = rng.simplex_point(4);
  const Cut cut = random_cut(rng, 4, 0.8);
  const ModelProxSolution two =
      solve_model_prox(make_two_cut(cut), h, x0, 0.7);
  const ModelProxSolution one =
      solve_model_prox(make_one_cut(cut), h, x0, 0.7);
  CHECK((two.x - one.x).norm() <= 1e-12);
  CHECK((two.s - one.s).norm() <= 1e-12);
  CHECK(two.m == doctest::Approx(one.m).epsilon(1e-12));
}

TEST_CASE("two-cut duals are strongly feasible and tight") {
  Rng rng(17);
  const Composite h = simplex_composite();
  for (int rep = 0; rep < 40; ++rep) {
    const int n = rng.uniform_int(2, 8);
    const Vector x0 = rng.simplex_point(n);
    const double lambda = rng.uniform(0.1, 2.0);
    TwoCutModel m{random_cut(rng, n, 1.0), random_cut(rng, n, 1.0), 1.0};
    const ModelProxSolution sol =
        solve_model_prox(BundleModel{m}, h, x0, lambda);
    CHECK(sol.multipliers.minCoeff() >= -1e-10);
    CHECK(std::abs(sol.multipliers.sum() - 1.0) <= 1e-10);
    CHECK(std::abs(sol.m - sol.dual_value) <= 1e-8);
    CHECK((sol.x - h.prox(x0, sol.s, lambda)).norm() <= 1e-9);
  }
}

TEST_CASE("multi-cut solve matches a refined grid oracle on the 3-simplex") {
  Rng rng(29);
  const Composite h = simplex_composite();
  const Vector x0 = rng.simplex_point(3);
  const double lambda = 0.7;
  std::vector<Cut> cuts;
  for (int i = 0; i < 5; ++i) cuts.push_back(random_cut(rng, 3, 1.2));

  MultiCutModel model;
  model.cuts = cuts;
  model.max_cuts = 10;
  const ModelProxSolution sol =
      solve_model_prox(BundleModel{model}, h, x0, lambda);

  const auto exact = testsupport::exact_min_maxaffine_simplex(cuts, x0, lambda);
  CHECK(std::abs(sol.m - exact.value) <= 1e-6);
  // strong convexity with modulus 1/lambda turns the value gap into a
  // distance bound well inside 1e-4
  CHECK((sol.x - exact.argmin).norm() <= 1e-4);

  CHECK(sol.multipliers.minCoeff() >= -1e-10);
  CHECK(std::abs(sol.multipliers.sum() - 1.0) <= 1e-10);
  CHECK(std::abs(sol.m - sol.dual_value) <= 1e-8);
  CHECK((sol.x - h.prox(x0, sol.s, lambda)).norm() <= 1e-9);
}

TEST_CASE("one-cut updates aggregate affinely and endpoints behave") {
  Rng rng(31);
  const Composite h = simplex_composite();
  const Vector x0 = rng.simplex_point(3);
  BundleModel model = make_one_cut(random_cut(rng, 3, 1.0));
  const ModelProxSolution sol = solve_model_prox(model, h, x0, 1.0);
  Cut fresh = random_cut(rng, 3, 1.0);
  fresh.anchor = sol.x;

  const BundleModel unchanged = update_model(model, 1.0, sol, fresh);
  const BundleModel replaced = update_model(model, 0.0, sol, fresh);
  Rng probe(1);
  for (int i = 0; i < 20; ++i) {
    const Vector u = probe.simplex_point(3);
    CHECK(model_value(unchanged, u) ==
          doctest::Approx(model_value(model, u)).epsilon(1e-14));
    CHECK(model_value(replaced, u) ==
          doctest::Approx(cut_eval(fresh, u)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(update_model(model, 1.5, sol, fresh), UsageError);
}

TEST_CASE("two-cut update aggregates bar with the solve multiplier") {
  Rng rng(37);
  const Composite h = simplex_composite();
  const Vector x0 = rng.simplex_point(3);
  TwoCutModel m{random_cut(rng, 3, 1.0), random_cut(rng, 3, 1.0), 1.0};
  const BundleModel model{m};
  const ModelProxSolution sol = solve_model_prox(model, h, x0, 0.5);
  Cut fresh = random_cut(rng, 3, 1.0);
  fresh.anchor = sol.x;
  const BundleModel next = update_model(model, 0.5, sol, fresh);
  const auto& tm = std::get<TwoCutModel>(next);
  const double theta = sol.multipliers[0];
  Rng probe(2);
  for (int i = 0; i < 20; ++i) {
    const Vector u = probe.simplex_point(3);
    const double bar_expect =
        theta * cut_eval(m.bar, u) + (1.0 - theta) * cut_eval(m.fresh, u);
    CHECK(cut_eval(tm.bar, u) == doctest::Approx(bar_expect).epsilon(1e-12));
    CHECK(cut_eval(tm.fresh, u) ==
          doctest::Approx(cut_eval(fresh, u)).epsilon(1e-14));
  }
  CHECK(tm.last_multiplier == theta);
}

TEST_CASE("two-cut chain reaches the kink of a two-piece function") {
  // f(u) = |u| in one dimension, free composite, prox center 0.8
  const SubgradientOracle f = linf_piece(Vector::Zero(1), 1.0);
  const Composite h = free_space();
  Vector x0(1);
  x0 << 0.8;
  BundleModel model = make_two_cut(linearize(f, x0));
  Vector x;
  for (int j = 1; j <= 3; ++j) {
    const ModelProxSolution sol = solve_model_prox(model, h, x0, 1.0);
    x = sol.x;
    Cut fresh = linearize(f, sol.x);
    model = update_model(model, 0.0, sol, fresh);
    if (j == 2) {
      // once both pieces are in the model the iterate hits the minimizer and
      // the model is tight there
      CHECK(std::abs(x[0]) <= 1e-12);
      CHECK(model_value(model, x) == doctest::Approx(f.value(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("multi-cut update prunes, appends, and respects the budget") {
  Rng rng(41);
  const Composite h = simplex_composite();
  const Vector x0 = rng.simplex_point(3);
  BundleModel model = make_multi_cut(random_cut(rng, 3, 1.0), 4);
  ModelProxSolution sol;
  for (int j = 0; j < 12; ++j) {
    sol = solve_model_prox(model, h, x0, 0.8);
    Cut fresh = random_cut(rng, 3, 1.0);
    fresh.anchor = sol.x;
    const BundleModel before = model;
    model = update_model(model, 0.5, sol, fresh);
    const auto& mm = std::get<MultiCutModel>(model);
    CHECK(static_cast<int>(mm.cuts.size()) <= 4);

    // the contract survives the budget-driven aggregation; the tightest
    // admissible f here is the max of everything seen so far
    SubgradientOracle upper;
    upper.value = [&before, fresh](const Vector& u) {
      return std::max(
          testsupport::max_affine(std::get<MultiCutModel>(before).cuts, u),
          cut_eval(fresh, u));
    };
    const auto samples = testsupport::random_simplex_points(rng, 3, 30);
    const GbmReport report =
        gbm_contract_check(before, model, 0.5, sol, fresh, upper, samples);
    CHECK(report.combination_violation <= 1e-9);
    CHECK(report.strong_violation <= 1e-9);
    CHECK(report.bar_consistency_gap <= 1e-9);
  }
}

TEST_CASE("contract check separates the one-cut and two-cut schemes") {
  Rng rng(53);
  // f with a genuinely moving active set so consecutive cuts differ
  Vector c(3);
  c << 0.05, -0.65, 0.3;
  const SubgradientOracle f = linf_piece(c, 0.4);
  const Composite h = simplex_composite();
  const Vector x0 = rng.simplex_point(3);
  const double lambda = 0.9;
  const auto samples = testsupport::random_simplex_points(rng, 3, 100);

  for (Scheme scheme : {Scheme::OneCut, Scheme::TwoCuts}) {
    BundleModel model = scheme == Scheme::OneCut
                            ? make_one_cut(linearize(f, x0))
                            : make_two_cut(linearize(f, x0));
    double worst_strong = 0.0;
    for (int j = 1; j <= 6; ++j) {
      const ModelProxSolution sol = solve_model_prox(model, h, x0, lambda);
      const Cut fresh = linearize(f, sol.x);
      const double tau = static_cast<double>(j) / (j + 2);
      const BundleModel next = update_model(model, tau, sol, fresh);
      const GbmReport report =
          gbm_contract_check(model, next, tau, sol, fresh, f, samples);
      CHECK(report.minorant_violation <= 1e-10);
      CHECK(report.combination_violation <= 1e-10);
      CHECK(report.bar_consistency_gap <= 1e-9);
      worst_strong = std::max(worst_strong, report.strong_violation);
      model = next;
    }
    if (scheme == Scheme::TwoCuts) CHECK(worst_strong <= 1e-10);
  }

  // the one-cut average provably fails the pointwise-max condition whenever
  // the aggregated cut and the fresh cut genuinely differ
  Cut a{Vector::Zero(3), 0.0, Vector::Zero(3)};
  a.grad << 1.0, 0.0, 0.0;
  Cut b{Vector::Zero(3), 0.0, Vector::Zero(3)};
  b.grad << -1.0, 0.0, 0.0;
  const BundleModel one = make_one_cut(a);
  ModelProxSolution sol = solve_model_prox(one, h, Vector::Constant(3, 1.0 / 3),
                                           lambda);
  b.anchor = sol.x;
  b.anchor_value = cut_eval(b, sol.x);
  const BundleModel merged = update_model(one, 0.5, sol, b);
  const GbmReport report = gbm_contract_check(
      one, merged, 0.5, sol, b,
      SubgradientOracle{[&](const Vector& u) {
                          return std::max(cut_eval(a, u), cut_eval(b, u));
                        },
                        nullptr, 0.0},
      samples);
  CHECK(report.strong_violation > 1e-3);
  CHECK(report.minorant_violation <= 1e-12);
  CHECK(report.combination_violation <= 1e-12);
}

TEST_CASE("an impossible inner budget raises a tolerance error with residual") {
  Rng rng(61);
  const Composite h = simplex_composite();
  const Vector x0 = rng.simplex_point(4);
  MultiCutModel m;
  for (int i = 0; i < 4; ++i) m.cuts.push_back(random_cut(rng, 4, 1.0));
  m.max_cuts = 10;
  ModelProxOptions opts;
  opts.fista_tol = 1e-30;
  opts.fista_max_iters = 1;
  try {
    solve_model_prox(BundleModel{m}, h, x0, 0.5, opts);
    FAIL("expected SolverToleranceError");
  } catch (const SolverToleranceError& e) {
    CHECK(e.residual > 0.0);
  }
}

TEST_CASE("a tau=1 one-cut update leaves the contract untouched") {
  Rng rng(67);
  const Composite h = simplex_composite();
  const Vector x0 = rng.simplex_point(3);
  const Vector c = rng.normal_vector(3);
  const SubgradientOracle f = linf_piece(c, 0.3);
  const BundleModel model = make_one_cut(linearize(f, x0));
  const ModelProxSolution sol = solve_model_prox(model, h, x0, 1.0);
  const Cut fresh = linearize(f, sol.x);
  const BundleModel after = update_model(model, 1.0, sol, fresh);
  const auto samples = testsupport::random_simplex_points(rng, 3, 50);
  const GbmReport report =
      gbm_contract_check(model, after, 1.0, sol, fresh, f, samples);
  CHECK(report.minorant_violation <= 1e-12);
  CHECK(report.combination_violation <= 1e-12);
  CHECK(report.bar_consistency_gap == 0.0);
}

TEST_CASE("model prox rejects bad arguments") {
  const Composite h = simplex_composite();
  Rng rng(5);
  const BundleModel model = make_one_cut(random_cut(rng, 3, 1.0));
  CHECK_THROWS_AS(solve_model_prox(model, h, rng.simplex_point(3), 0.0),
                  UsageError);
  CHECK_THROWS_AS(make_multi_cut(random_cut(rng, 3, 1.0), 1), UsageError);
}
