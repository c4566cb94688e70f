#ifndef PDBUNDLE_BUNDLE_HPP_
#define PDBUNDLE_BUNDLE_HPP_

#include <variant>
#include <vector>

#include "pdbundle/problem.hpp"

namespace pdbundle {

// One-cut scheme: the model is a single synthetic affine, stored as a
// (value-at-center, gradient) pair anchored at the prox center.
struct OneCutModel {
  Cut aggregate;
};

// Two-cuts scheme: max of the aggregated affine "bar" and the freshest cut;
// last_multiplier is the theta attached to bar in the latest subproblem.
struct TwoCutModel {
  Cut bar;
  Cut fresh;
  double last_multiplier = 1.0;
};

// Multi-cuts scheme: max over a pruned list of cuts, at most max_cuts of
// them; multipliers are the simplex weights from the latest subproblem.
struct MultiCutModel {
  std::vector<Cut> cuts;
  Eigen::VectorXd multipliers;
  int max_cuts = 10;
};

using BundleModel = std::variant<OneCutModel, TwoCutModel, MultiCutModel>;

BundleModel make_one_cut(const Cut& first);
BundleModel make_two_cut(const Cut& first);
BundleModel make_multi_cut(const Cut& first, int max_cuts);

// Model value Gamma(u).
double model_value(const BundleModel& model, const Vector& u);

// Primal-dual solution of the model proximal subproblem
//   min_u Gamma(u) + h(u) + ||u - x0||^2 / (2 lambda).
// x is the minimizer, s in dGamma(x) with x = prox_{lambda h}(x0 - lambda s),
// m the optimal value, multipliers the simplex weights over the model's cuts,
// dual_value the dual objective at those weights (equal to m at optimality).
struct ModelProxSolution {
  Vector x;
  Vector s;
  double m = 0.0;
  Eigen::VectorXd multipliers;
  double dual_value = 0.0;
  long prox_calls = 0;
  int inner_iterations = 0;
};

struct ModelProxOptions {
  double bisection_tol = 1e-12;   // interval width for the two-cuts theta
  double fista_tol = 1e-10;       // projected-gradient norm, multi-cuts dual
  int fista_max_iters = 10000;
  double prune_tol = 1e-12;       // drop multi-cut multipliers below this
};

ModelProxSolution solve_model_prox(const BundleModel& model,
                                   const Composite& h, const Vector& x0,
                                   double lambda,
                                   const ModelProxOptions& opts = {});

// Bundle update after one iteration. tau only drives the one-cut aggregation;
// the two-/multi-cuts rules use the multipliers carried by sol. new_cut must
// be anchored at sol.x.
BundleModel update_model(BundleModel model, double tau,
                         const ModelProxSolution& sol, const Cut& new_cut,
                         double prune_tol = 1e-12);

// The auxiliary model bar-Gamma determined by the last solve: the model
// itself (one-cut), theta * bar + (1 - theta) * fresh (two-cuts), or the
// multiplier aggregate of the cuts (multi-cuts).
double bar_model_value(const BundleModel& model, const ModelProxSolution& sol,
                       const Vector& u);

// Diagnostic check of the bundle-management contract on sample points:
//   minorant:     Gamma_after <= f
//   combination:  Gamma_after >= tau * bar + (1 - tau) * new_cut
//   bar at x:     bar(x) == Gamma_before(x)
//   strong:       Gamma_after >= max(bar, new_cut)   (two-/multi-cuts only)
struct GbmReport {
  double minorant_violation = 0.0;
  double combination_violation = 0.0;
  double bar_consistency_gap = 0.0;
  double strong_violation = 0.0;
};

GbmReport gbm_contract_check(const BundleModel& before,
                             const BundleModel& after, double tau,
                             const ModelProxSolution& sol, const Cut& new_cut,
                             const SubgradientOracle& f,
                             const std::vector<Vector>& samples);

}  // namespace pdbundle

#endif  // PDBUNDLE_BUNDLE_HPP_
