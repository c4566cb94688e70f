#include "pdbundle/saddle.hpp"

#include <cmath>
#include <string>

#include "pdbundle/rng.hpp"

namespace pdbundle {

SubgradientOracle SaddleInstance::x_piece(const Vector& y_frozen) const {
  SubgradientOracle p;
  p.value = [this, y_frozen](const Vector& u) { return f(u, y_frozen); };
  p.subgradient = [this, y_frozen](const Vector& u) {
    return fx(u, y_frozen);
  };
  p.lipschitz_bound = M;
  return p;
}

SubgradientOracle SaddleInstance::y_piece(const Vector& x_frozen) const {
  SubgradientOracle p;
  p.value = [this, x_frozen](const Vector& v) { return -f(x_frozen, v); };
  p.subgradient = [this, x_frozen](const Vector& v) {
    return Vector(-fy(x_frozen, v));
  };
  p.lipschitz_bound = M;
  return p;
}

double saddle_gap(const SaddleInstance& inst, const Vector& x,
                  const Vector& y) {
  if (!inst.has_exact_evaluators()) {
    throw CapabilityError("saddle_gap: instance has no exact evaluators");
  }
  return inst.phi_exact(x) - inst.psi_exact(y);
}

SaddleRunResult cs_spp_run(const SaddleInstance& inst, const Vector& x0,
                           const Vector& y0, double lambda,
                           const CsSppOptions& opts,
                           const SaddleObserver& observer) {
  if (!(lambda > 0.0)) throw UsageError("cs_spp_run: lambda must be > 0");
  SaddleRunResult r;
  Vector x = x0, y = y0;
  Vector x_sum = Vector::Zero(x0.size());
  Vector y_sum = Vector::Zero(y0.size());
  const bool gap_ready =
      inst.has_exact_evaluators() && opts.gap_cadence > 0;

  for (long k = 1; k <= opts.max_iters; ++k) {
    const Vector gx = inst.fx(x, y);
    const Vector gy = inst.fy(x, y);
    r.oracle_calls += 2;
    Vector x_new = inst.h1.prox(x, gx, lambda);
    Vector y_new = inst.h2.prox(y, Vector(-gy), lambda);
    r.prox_evals += 2;
    if (observer) {
      SaddleStepData step;
      step.k = static_cast<int>(k);
      step.lambda = lambda;
      step.x_prev = x;
      step.y_prev = y;
      step.x = x_new;
      step.y = y_new;
      step.tx = x_new;
      step.ty = y_new;
      observer(step);
    }
    x = std::move(x_new);
    y = std::move(y_new);
    x_sum += x;
    y_sum += y;
    r.outer_iters = k;
    r.total_inner_iters = k;
    if (gap_ready && (k % opts.gap_cadence == 0 || k == opts.max_iters)) {
      r.x_bar = x_sum / static_cast<double>(k);
      r.y_bar = y_sum / static_cast<double>(k);
      const double gap = saddle_gap(inst, r.x_bar, r.y_bar);
      const GapSample sample{k, gap, r.total_inner_iters, r.prox_evals,
                             r.oracle_calls};
      r.gap_trace.push_back(sample);
      if (opts.on_log) opts.on_log(sample);
      if (opts.eps_target > 0.0 && gap <= opts.eps_target) {
        r.reached_target = true;
        break;
      }
    }
  }
  if (r.outer_iters > 0) {
    r.x_bar = x_sum / static_cast<double>(r.outer_iters);
    r.y_bar = y_sum / static_cast<double>(r.outer_iters);
  } else {
    r.x_bar = x0;
    r.y_bar = y0;
  }
  return r;
}

SaddleRunResult pb_spp_run(const SaddleInstance& inst, const Vector& x0,
                           const Vector& y0, const PbSppOptions& opts,
                           const SaddleObserver& observer) {
  if (!(opts.eps_bar > 0.0)) throw UsageError("pb_spp_run: eps_bar must be > 0");
  if (opts.improved_gap && opts.scheme == Scheme::OneCut) {
    throw UsageError(
        "pb_spp_run: the improved gap needs the two- or multi-cuts scheme");
  }
  const double lambda1 =
      opts.lambda1 > 0.0 ? opts.lambda1 : inst.D / (4.0 * inst.M);

  SaddleRunResult r;
  Vector x = x0, y = y0;
  Vector x_sum = Vector::Zero(x0.size());
  Vector y_sum = Vector::Zero(y0.size());
  const bool exact_gap = inst.has_exact_evaluators();

  PdcpConfig cfg;
  cfg.scheme = opts.scheme;
  cfg.max_cuts = opts.max_cuts;
  cfg.epsilon = opts.eps_bar / 4.0;
  cfg.max_iters = opts.max_cycle_iters;
  cfg.track_hat = opts.improved_gap;
  cfg.hat_termination = opts.improved_gap;
  cfg.record_trace = false;

  for (long k = 1; k <= opts.max_outer; ++k) {
    const double lambda_k = lambda1 / std::sqrt(static_cast<double>(k));
    const SubgradientOracle fx_piece = inst.x_piece(y);
    const SubgradientOracle fy_piece = inst.y_piece(x);
    const CycleResult cx = pdcp_run(fx_piece, inst.h1, x, lambda_k, cfg);
    const CycleResult cy = pdcp_run(fy_piece, inst.h2, y, lambda_k, cfg);
    r.prox_evals += cx.prox_evals + cy.prox_evals;
    r.oracle_calls += cx.oracle_calls + cy.oracle_calls;
    r.total_inner_iters += cx.iters + cy.iters;
    r.cycle_lengths_x.push_back(cx.iters);
    r.cycle_lengths_y.push_back(cy.iters);

    const Vector& tx = opts.improved_gap ? *cx.hat : cx.tilde;
    const Vector& ty = opts.improved_gap ? *cy.hat : cy.tilde;
    if (observer) {
      SaddleStepData step;
      step.k = static_cast<int>(k);
      step.lambda = lambda_k;
      step.x_prev = x;
      step.y_prev = y;
      step.x = cx.x_last;
      step.y = cy.x_last;
      step.tx = tx;
      step.ty = ty;
      step.model_x_at_x =
          cx.m - (cx.x_last - x).squaredNorm() / (2.0 * lambda_k);
      step.model_y_at_y =
          cy.m - (cy.x_last - y).squaredNorm() / (2.0 * lambda_k);
      step.eps_bar = opts.eps_bar;
      observer(step);
    }
    x_sum += tx;
    y_sum += ty;
    x = cx.x_last;
    y = cy.x_last;
    r.outer_iters = k;
    r.x_bar = x_sum / static_cast<double>(k);
    r.y_bar = y_sum / static_cast<double>(k);

    if (k % opts.gap_cadence == 0 || k == opts.max_outer) {
      double gap;
      if (exact_gap) {
        gap = saddle_gap(inst, r.x_bar, r.y_bar);
      } else {
        const double rk = std::sqrt(static_cast<double>(k));
        gap = opts.eps_bar / 2.0 + 8.0 * lambda1 * inst.M * inst.M / rk +
              inst.D * inst.D / (2.0 * lambda1 * rk);
      }
      const GapSample sample{k, gap, r.total_inner_iters, r.prox_evals,
                             r.oracle_calls};
      r.gap_trace.push_back(sample);
      if (opts.on_log) opts.on_log(sample);
      if (gap <= opts.eps_bar) {
        r.reached_target = true;
        break;
      }
    }
  }
  return r;
}

IppfCertificate ippf_certificate(SaddleMethod method,
                                 const SaddleInstance& inst,
                                 const SaddleStepData& step, int sample_count,
                                 std::uint64_t sample_seed, bool validate) {
  constexpr double kTol = 1e-8;
  const double lambda = step.lambda;
  IppfCertificate cert;

  double sigma = 0.0;
  double delta = 0.0;
  if (method == SaddleMethod::CsSpp) {
    sigma = 1.0;
    delta = 8.0 * lambda * lambda * inst.M * inst.M;
    const double f_prev = inst.f(step.x_prev, step.y_prev);
    const double eps_x =
        inst.f(step.x, step.y_prev) -
        (f_prev + inst.fx(step.x_prev, step.y_prev).dot(step.x - step.x_prev));
    const double eps_y =
        -inst.f(step.x_prev, step.y) +
        (f_prev + inst.fy(step.x_prev, step.y_prev).dot(step.y - step.y_prev));
    cert.eps_k = eps_x + eps_y;
  } else {
    sigma = 0.0;
    // The eps_bar/4 subcycle tolerances certify exactly
    //   lhs = 2 lambda_k (t_k^x + t_k^y) <= lambda_k eps_bar,
    // so that is the proximity budget validated here.
    delta = lambda * step.eps_bar;
    const double p_at_tx = inst.f(step.tx, step.y_prev) + inst.h1.value(step.tx);
    const double d_at_ty = -inst.f(step.x_prev, step.ty) + inst.h2.value(step.ty);
    const double eps_x =
        p_at_tx - step.model_x_at_x +
        (step.x_prev - step.x).dot(step.x - step.tx) / lambda;
    const double eps_y =
        d_at_ty - step.model_y_at_y +
        (step.y_prev - step.y).dot(step.y - step.ty) / lambda;
    cert.eps_k = eps_x + eps_y;
  }

  cert.proximity_lhs = (step.x - step.tx).squaredNorm() +
                       (step.y - step.ty).squaredNorm() +
                       2.0 * lambda * cert.eps_k;
  cert.proximity_rhs = delta + sigma * ((step.tx - step.x_prev).squaredNorm() +
                                        (step.ty - step.y_prev).squaredNorm());
  if (validate && cert.proximity_lhs > cert.proximity_rhs + kTol) {
    throw CertificationError(
        "ippf_certificate: proximity inequality violated at iteration " +
        std::to_string(step.k));
  }

  // The subdifferential inclusion, tested through its equivalent pointwise
  // form on sampled domain points.
  const double p_tx = inst.f(step.tx, step.y_prev) + inst.h1.value(step.tx);
  const double d_ty = -inst.f(step.x_prev, step.ty) + inst.h2.value(step.ty);
  Rng rng(sample_seed);
  const Vector zero_x = Vector::Zero(step.x.size());
  const Vector zero_y = Vector::Zero(step.y.size());
  for (int i = 0; i < sample_count; ++i) {
    const Vector u =
        inst.h1.prox(rng.uniform_vector(static_cast<int>(step.x.size()),
                                        -1.0, 2.0),
                     zero_x, 1.0);
    const Vector v =
        inst.h2.prox(rng.uniform_vector(static_cast<int>(step.y.size()),
                                        -1.0, 2.0),
                     zero_y, 1.0);
    const double lhs = inst.f(u, step.y_prev) + inst.h1.value(u) -
                       inst.f(step.x_prev, v) + inst.h2.value(v) - p_tx - d_ty;
    const double rhs =
        (step.x_prev - step.x).dot(u - step.tx) / lambda +
        (step.y_prev - step.y).dot(v - step.ty) / lambda - cert.eps_k;
    cert.inclusion_residual = std::max(cert.inclusion_residual, rhs - lhs);
  }
  if (validate && cert.inclusion_residual > kTol) {
    throw CertificationError(
        "ippf_certificate: subdifferential inclusion violated at iteration " +
        std::to_string(step.k));
  }
  return cert;
}

}  // namespace pdbundle
