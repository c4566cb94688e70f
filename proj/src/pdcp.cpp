#include "pdbundle/pdcp.hpp"

#include <cmath>
#include <limits>

namespace pdbundle {

namespace {

double default_tau(int j) { return static_cast<double>(j) / (j + 2); }

BundleModel initial_model(const PdcpConfig& cfg, const Cut& first) {
  switch (cfg.scheme) {
    case Scheme::OneCut:
      return make_one_cut(first);
    case Scheme::TwoCuts:
      return make_two_cut(first);
    case Scheme::MultiCuts:
      return make_multi_cut(first, cfg.max_cuts);
  }
  throw UsageError("pdcp_run: unknown scheme");
}

}  // namespace

CycleResult pdcp_run(const SubgradientOracle& f, const Composite& h,
                     const Vector& x0, double lambda, const PdcpConfig& cfg,
                     const PdcpObserver& observer) {
  if (!(lambda > 0.0)) throw UsageError("pdcp_run: lambda must be > 0");
  if (!(cfg.epsilon > 0.0)) throw UsageError("pdcp_run: epsilon must be > 0");
  if (cfg.max_iters < 1) throw UsageError("pdcp_run: max_iters must be >= 1");
  if (cfg.hat_termination && cfg.scheme == Scheme::OneCut) {
    throw UsageError(
        "pdcp_run: hat-gap termination is undefined for the one-cut scheme");
  }
  const auto tau = cfg.tau ? cfg.tau : default_tau;
  const bool track_hat = cfg.track_hat || cfg.hat_termination;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  CycleResult out;
  out.hat_t = nan;
  out.best_t = std::numeric_limits<double>::infinity();

  auto phi_lam = [&](const Vector& u) {
    ++out.oracle_calls;
    return f.value(u) + h.value(u) +
           (u - x0).squaredNorm() / (2.0 * lambda);
  };

  ++out.oracle_calls;  // value + subgradient at the prox center
  BundleModel model = initial_model(cfg, linearize(f, x0));

  Vector x_prev = x0;
  Vector tilde;
  double tilde_phi = 0.0;  // phi^lambda(tilde), BestIterate rule only
  Vector hat_numerator;    // running 3 x_2 + sum_{i>=3} i x_i
  double stop_gap = 2.0 * cfg.epsilon;  // t_0 sentinel

  int j = 0;
  while (stop_gap > cfg.epsilon) {
    if (j >= cfg.max_iters) {
      out.budget_exhausted = true;
      break;
    }
    ++j;
    ModelProxSolution sol =
        solve_model_prox(model, h, x0, lambda, cfg.prox_options);
    out.prox_evals += sol.prox_calls;

    double phi_tilde;
    if (j == 1) {
      tilde = sol.x;
      phi_tilde = phi_lam(tilde);
      tilde_phi = phi_tilde;
    } else if (cfg.tilde_rule == TildeRule::ConvexCombination) {
      const double tp = tau(j - 1);
      tilde = tp * tilde + (1.0 - tp) * sol.x;
      phi_tilde = phi_lam(tilde);
    } else {
      const double cand = phi_lam(sol.x);
      if (cand < tilde_phi) {
        tilde = sol.x;
        tilde_phi = cand;
      }
      phi_tilde = tilde_phi;
    }
    const double t = phi_tilde - sol.m;

    double hat_t = nan;
    if (track_hat) {
      if (j == 2) {
        hat_numerator = 3.0 * sol.x;
      } else if (j > 2) {
        hat_numerator += static_cast<double>(j) * sol.x;
      }
      if (j >= 2) {
        const double a_j = 0.5 * j * (j + 1);
        out.hat = Vector(hat_numerator / a_j);
        hat_t = phi_lam(*out.hat) - sol.m;
        out.hat_t = hat_t;
      }
    }

    if (cfg.record_trace) {
      out.trace.push_back({t, sol.m, (sol.x - x_prev).norm(), hat_t});
    }
    if (observer) observer(j, sol.x, tilde, sol.s, t, sol.m);
    if (j == 1) out.first_t = t;
    out.best_t = std::min(out.best_t, t);

    ++out.oracle_calls;
    const Cut new_cut = linearize(f, sol.x);
    model = update_model(model, tau(j), sol, new_cut,
                         cfg.prox_options.prune_tol);

    x_prev = sol.x;
    out.x_last = std::move(sol.x);
    out.s = std::move(sol.s);
    out.m = sol.m;
    out.t = t;
    if (cfg.hat_termination) {
      stop_gap = j >= 2 ? hat_t : std::numeric_limits<double>::infinity();
    } else {
      stop_gap = t;
    }
  }
  out.tilde = std::move(tilde);
  out.iters = j;
  return out;
}

double gap_certificate_at(const ConjugateOracle& f_conj, const Composite& h,
                          const Vector& x0, double lambda,
                          double phi_lam_tilde, const Vector& s) {
  if (!f_conj) throw CapabilityError("gap_certificate: no conjugate oracle");
  const double fstar = f_conj.value(s);
  if (outside_domain(fstar)) {
    throw InfeasibleDualError(
        "gap_certificate: dual point lies outside dom f*");
  }
  return phi_lam_tilde + fstar + hlam_conjugate_neg(h, x0, lambda, s);
}

double gap_certificate(const CycleResult& result,
                       const ConjugateOracle& f_conj, const Composite& h,
                       const Vector& x0, double lambda) {
  return gap_certificate_at(f_conj, h, x0, lambda, result.t + result.m,
                            result.s);
}

}  // namespace pdbundle
