#include "pdbundle/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pdbundle/matrix_game.hpp"

namespace pdbundle {

BundleModel make_one_cut(const Cut& first) { return OneCutModel{first}; }

BundleModel make_two_cut(const Cut& first) {
  return TwoCutModel{first, first, 1.0};
}

BundleModel make_multi_cut(const Cut& first, int max_cuts) {
  if (max_cuts < 2) throw UsageError("make_multi_cut: max_cuts must be >= 2");
  MultiCutModel m;
  m.cuts.push_back(first);
  m.multipliers = Eigen::VectorXd::Ones(1);
  m.max_cuts = max_cuts;
  return m;
}

double model_value(const BundleModel& model, const Vector& u) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, OneCutModel>) {
          return cut_eval(m.aggregate, u);
        } else if constexpr (std::is_same_v<T, TwoCutModel>) {
          return std::max(cut_eval(m.bar, u), cut_eval(m.fresh, u));
        } else {
          double v = cut_eval(m.cuts.front(), u);
          for (std::size_t i = 1; i < m.cuts.size(); ++i) {
            v = std::max(v, cut_eval(m.cuts[i], u));
          }
          return v;
        }
      },
      model);
}

namespace {

double quad_term(const Vector& x, const Vector& x0, double lambda) {
  return (x - x0).squaredNorm() / (2.0 * lambda);
}

ModelProxSolution solve_one_cut(const OneCutModel& m, const Composite& h,
                                const Vector& x0, double lambda) {
  ModelProxSolution sol;
  sol.s = m.aggregate.grad;
  sol.x = h.prox(x0, sol.s, lambda);
  sol.m = cut_eval(m.aggregate, sol.x) + h.value(sol.x) +
          quad_term(sol.x, x0, lambda);
  sol.multipliers = Eigen::VectorXd::Ones(1);
  sol.dual_value = sol.m;
  sol.prox_calls = 1;
  return sol;
}

// Two-cuts dual: maximize the concave
//   d(theta) = min_u { theta bar(u) + (1-theta) fresh(u) + h^lambda(u) }
// over theta in [0,1]. d'(theta) = bar(u(theta)) - fresh(u(theta)) is
// non-increasing, so a sign bisection finds the maximizer; constant-sign
// derivatives give a corner solution.
ModelProxSolution solve_two_cut(const TwoCutModel& m, const Composite& h,
                                const Vector& x0, double lambda,
                                const ModelProxOptions& opts) {
  long prox_calls = 0;
  auto minimizer = [&](double theta) {
    ++prox_calls;
    const Vector tilt = theta * m.bar.grad + (1.0 - theta) * m.fresh.grad;
    return h.prox(x0, tilt, lambda);
  };
  auto dprime = [&](const Vector& u) {
    return cut_eval(m.bar, u) - cut_eval(m.fresh, u);
  };

  double theta;
  Vector x;
  Vector u_hi = minimizer(1.0);
  if (dprime(u_hi) >= 0.0) {
    theta = 1.0;
    x = std::move(u_hi);
  } else {
    Vector u_lo = minimizer(0.0);
    if (dprime(u_lo) <= 0.0) {
      theta = 0.0;
      x = std::move(u_lo);
    } else {
      double lo = 0.0, hi = 1.0;
      while (hi - lo > opts.bisection_tol) {
        const double mid = 0.5 * (lo + hi);
        if (dprime(minimizer(mid)) > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      theta = 0.5 * (lo + hi);
      x = minimizer(theta);
    }
  }

  ModelProxSolution sol;
  sol.x = x;
  sol.s = theta * m.bar.grad + (1.0 - theta) * m.fresh.grad;
  sol.m = std::max(cut_eval(m.bar, x), cut_eval(m.fresh, x)) + h.value(x) +
          quad_term(x, x0, lambda);
  sol.multipliers = Eigen::VectorXd(2);
  sol.multipliers << theta, 1.0 - theta;
  sol.dual_value = theta * cut_eval(m.bar, x) +
                   (1.0 - theta) * cut_eval(m.fresh, x) + h.value(x) +
                   quad_term(x, x0, lambda);
  sol.prox_calls = prox_calls;
  return sol;
}

// Multi-cuts dual over the multiplier simplex:
//   d(theta) = <b, theta> + min_u { <G theta, u> + h^lambda(u) },
// with b_i the cut intercepts and G the cut gradients. grad d(theta)_i =
// l_i(u(theta)); the gradient is lambda ||G||^2-Lipschitz, and FISTA with a
// function-value restart drives the unit-step projected-gradient residual to
// tolerance.
ModelProxSolution solve_multi_cut(const MultiCutModel& m, const Composite& h,
                                  const Vector& x0, double lambda,
                                  const ModelProxOptions& opts) {
  const int k = static_cast<int>(m.cuts.size());
  const int n = static_cast<int>(x0.size());
  Eigen::MatrixXd grads(n, k);
  Eigen::VectorXd intercepts(k);
  for (int i = 0; i < k; ++i) {
    grads.col(i) = m.cuts[i].grad;
    intercepts[i] =
        m.cuts[i].anchor_value - m.cuts[i].grad.dot(m.cuts[i].anchor);
  }

  long prox_calls = 0;
  auto minimizer = [&](const Eigen::VectorXd& theta) {
    ++prox_calls;
    return h.prox(x0, Vector(grads * theta), lambda);
  };
  auto dual_value_at = [&](const Eigen::VectorXd& theta, const Vector& u) {
    return intercepts.dot(theta) + (grads * theta).dot(u) + h.value(u) +
           quad_term(u, x0, lambda);
  };
  auto dual_grad = [&](const Vector& u) {
    return Eigen::VectorXd(intercepts + grads.transpose() * u);
  };

  // Upper bound on the gradient Lipschitz constant lambda * sigma_max(G)^2:
  // sigma_max(G'G) is at most both the Frobenius norm and, by symmetry, the
  // largest absolute row sum of the Gram matrix.
  const Eigen::MatrixXd gram = grads.transpose() * grads;
  const double row_sum_bound = gram.cwiseAbs().rowwise().sum().maxCoeff();
  const double sigma_sq = std::min(gram.norm(), row_sum_bound);
  const double lip = std::max(lambda * sigma_sq * 1.02, 1e-300);
  const double step = 1.0 / lip;

  // Warm start from the model's previous multipliers when shapes match.
  Eigen::VectorXd theta;
  if (m.multipliers.size() == k && m.multipliers.minCoeff() >= 0.0) {
    theta = project_simplex(m.multipliers);
  } else {
    theta = Eigen::VectorXd::Constant(k, 1.0 / k);
  }

  Vector u = minimizer(theta);
  double fval = -dual_value_at(theta, u);
  Eigen::VectorXd momentum = theta;
  double t_acc = 1.0;
  double pg_norm = 0.0;
  int iters = 0;
  for (; iters < opts.fista_max_iters; ++iters) {
    const Eigen::VectorXd g_theta = -dual_grad(u);
    pg_norm = (theta - project_simplex(theta - g_theta)).norm();
    if (pg_norm <= opts.fista_tol) break;

    const Vector u_mom = (momentum - theta).squaredNorm() == 0.0
                             ? u
                             : minimizer(momentum);
    const Eigen::VectorXd g_mom = -dual_grad(u_mom);
    Eigen::VectorXd theta_next = project_simplex(momentum - step * g_mom);
    Vector u_next = minimizer(theta_next);
    double f_next = -dual_value_at(theta_next, u_next);
    if (f_next > fval) {
      // restart the momentum sequence from the best iterate
      t_acc = 1.0;
      theta_next = project_simplex(theta - step * g_theta);
      u_next = minimizer(theta_next);
      f_next = -dual_value_at(theta_next, u_next);
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_acc * t_acc));
    momentum = theta_next + ((t_acc - 1.0) / t_next) * (theta_next - theta);
    theta = theta_next;
    u = u_next;
    fval = f_next;
    t_acc = t_next;
  }
  if (pg_norm > opts.fista_tol) {
    throw SolverToleranceError(
        "multi-cuts dual: projected-gradient residual " +
            std::to_string(pg_norm) + " above tolerance at iteration cap",
        pg_norm);
  }

  ModelProxSolution sol;
  sol.s = grads * theta;
  sol.x = h.prox(x0, sol.s, lambda);
  ++prox_calls;
  double gamma_x = cut_eval(m.cuts.front(), sol.x);
  for (int i = 1; i < k; ++i) {
    gamma_x = std::max(gamma_x, cut_eval(m.cuts[i], sol.x));
  }
  sol.m = gamma_x + h.value(sol.x) + quad_term(sol.x, x0, lambda);
  sol.multipliers = theta;
  sol.dual_value = dual_value_at(theta, sol.x);
  sol.prox_calls = prox_calls;
  sol.inner_iterations = iters;
  return sol;
}

// Affine combination w * a + (1 - w) * b, re-anchored at a's anchor.
Cut combine_cuts(double w, const Cut& a, const Cut& b) {
  Cut out;
  out.anchor = a.anchor;
  out.anchor_value = w * a.anchor_value + (1.0 - w) * cut_eval(b, a.anchor);
  out.grad = w * a.grad + (1.0 - w) * b.grad;
  return out;
}

}  // namespace

ModelProxSolution solve_model_prox(const BundleModel& model,
                                   const Composite& h, const Vector& x0,
                                   double lambda,
                                   const ModelProxOptions& opts) {
  if (!(lambda > 0.0)) throw UsageError("solve_model_prox: lambda must be > 0");
  return std::visit(
      [&](const auto& m) -> ModelProxSolution {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, OneCutModel>) {
          return solve_one_cut(m, h, x0, lambda);
        } else if constexpr (std::is_same_v<T, TwoCutModel>) {
          return solve_two_cut(m, h, x0, lambda, opts);
        } else {
          return solve_multi_cut(m, h, x0, lambda, opts);
        }
      },
      model);
}

BundleModel update_model(BundleModel model, double tau,
                         const ModelProxSolution& sol, const Cut& new_cut,
                         double prune_tol) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw UsageError("update_model: tau must lie in [0, 1]");
  }
  std::visit(
      [&](auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, OneCutModel>) {
          m.aggregate.anchor_value =
              tau * m.aggregate.anchor_value +
              (1.0 - tau) * cut_eval(new_cut, m.aggregate.anchor);
          m.aggregate.grad = tau * m.aggregate.grad + (1.0 - tau) * new_cut.grad;
        } else if constexpr (std::is_same_v<T, TwoCutModel>) {
          const double theta = sol.multipliers[0];
          m.bar = combine_cuts(theta, m.bar, m.fresh);
          m.fresh = new_cut;
          m.last_multiplier = theta;
        } else {
          // Keep positive-multiplier cuts; if the budget would overflow,
          // fold the smallest-weight ones into a single synthetic cut so the
          // aggregate stays a minorant of the dropped model.
          std::vector<int> kept;
          for (int i = 0; i < sol.multipliers.size(); ++i) {
            if (sol.multipliers[i] > prune_tol) kept.push_back(i);
          }
          if (kept.empty()) kept.push_back(0);
          std::vector<Cut> cuts;
          std::vector<double> weights;
          if (static_cast<int>(kept.size()) + 1 > m.max_cuts) {
            std::sort(kept.begin(), kept.end(), [&](int a, int b) {
              return sol.multipliers[a] < sol.multipliers[b];
            });
            const int fold = static_cast<int>(kept.size()) - (m.max_cuts - 2);
            double mass = 0.0;
            for (int i = 0; i < fold; ++i) mass += sol.multipliers[kept[i]];
            Cut synthetic;
            synthetic.anchor = sol.x;
            synthetic.anchor_value = 0.0;
            synthetic.grad = Vector::Zero(sol.x.size());
            for (int i = 0; i < fold; ++i) {
              const Cut& c = m.cuts[kept[i]];
              const double w = sol.multipliers[kept[i]] / mass;
              synthetic.anchor_value += w * cut_eval(c, sol.x);
              synthetic.grad += w * c.grad;
            }
            cuts.push_back(synthetic);
            weights.push_back(mass);
            for (std::size_t i = fold; i < kept.size(); ++i) {
              cuts.push_back(m.cuts[kept[i]]);
              weights.push_back(sol.multipliers[kept[i]]);
            }
          } else {
            for (int i : kept) {
              cuts.push_back(m.cuts[i]);
              weights.push_back(sol.multipliers[i]);
            }
          }
          cuts.push_back(new_cut);
          weights.push_back(0.0);
          m.cuts = std::move(cuts);
          m.multipliers = Eigen::Map<Eigen::VectorXd>(weights.data(),
                                                      weights.size());
        }
      },
      model);
  return model;
}

double bar_model_value(const BundleModel& model, const ModelProxSolution& sol,
                       const Vector& u) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, OneCutModel>) {
          return cut_eval(m.aggregate, u);
        } else if constexpr (std::is_same_v<T, TwoCutModel>) {
          const double theta = sol.multipliers[0];
          return theta * cut_eval(m.bar, u) +
                 (1.0 - theta) * cut_eval(m.fresh, u);
        } else {
          double v = 0.0;
          for (int i = 0; i < sol.multipliers.size(); ++i) {
            v += sol.multipliers[i] * cut_eval(m.cuts[i], u);
          }
          return v;
        }
      },
      model);
}

GbmReport gbm_contract_check(const BundleModel& before,
                             const BundleModel& after, double tau,
                             const ModelProxSolution& sol, const Cut& new_cut,
                             const SubgradientOracle& f,
                             const std::vector<Vector>& samples) {
  GbmReport report;
  for (const Vector& u : samples) {
    const double after_u = model_value(after, u);
    const double bar_u = bar_model_value(before, sol, u);
    const double cut_u = cut_eval(new_cut, u);
    report.minorant_violation =
        std::max(report.minorant_violation, after_u - f.value(u));
    report.combination_violation =
        std::max(report.combination_violation,
                 tau * bar_u + (1.0 - tau) * cut_u - after_u);
    report.strong_violation =
        std::max(report.strong_violation, std::max(bar_u, cut_u) - after_u);
  }
  report.bar_consistency_gap = std::abs(bar_model_value(before, sol, sol.x) -
                                        model_value(before, sol.x));
  return report;
}

}  // namespace pdbundle
