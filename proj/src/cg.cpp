#include "pdbundle/cg.hpp"

#include <cmath>

namespace pdbundle {

LmoResult lmo_dual(const SubgradientOracle& f, const Composite& h,
                   const Vector& x0, double lambda, const Vector& z) {
  LmoResult r;
  r.x = h.prox(x0, z, lambda);
  r.zbar = f.subgradient(r.x);
  return r;
}

double psi_value(const ConjugateOracle& f_conj, const Composite& h,
                 const Vector& x0, double lambda, const Vector& z) {
  if (!f_conj) throw CapabilityError("psi_value: no conjugate oracle");
  const double fstar = f_conj.value(z);
  if (outside_domain(fstar)) return kOutsideDomain;
  return fstar + hlam_conjugate_neg(h, x0, lambda, z);
}

namespace {

double golden_section_min(const std::function<double(double)>& g, double tol,
                          int max_probes) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0, b = 1.0;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double gc = g(c), gd = g(d);
  int probes = 2;
  while (b - a > tol && probes < max_probes) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - ratio * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + ratio * (b - a);
      gd = g(d);
    }
    ++probes;
  }
  return 0.5 * (a + b);
}

}  // namespace

CgTrace cg_run(const SubgradientOracle& f, const Composite& h,
               const Vector& x0, double lambda, int iters, CgStepRule rule,
               const ConjugateOracle& f_conj, const CgObserver& observer) {
  if (!(lambda > 0.0)) throw UsageError("cg_run: lambda must be > 0");
  if (rule == CgStepRule::LineSearch && !f_conj) {
    throw CapabilityError("cg_run: the line-search rule needs a conjugate oracle");
  }

  CgTrace trace;
  trace.iterates.reserve(iters);

  Vector z = f.subgradient(x0);
  trace.oracle_calls += 2;
  trace.conjugate_at_atoms.push_back(z.dot(x0) - f.value(x0));
  std::vector<double> weights{1.0};
  Vector u;

  for (int j = 1; j <= iters; ++j) {
    Vector x = h.prox(x0, z, lambda);
    ++trace.prox_evals;
    Vector zbar = f.subgradient(x);
    const double f_x = f.value(x);
    trace.oracle_calls += 2;
    if (j == 1) u = x;

    CgIterate it;
    it.z = z;
    it.zbar = zbar;
    it.x = x;
    it.u = u;
    it.weights = weights;

    const double tau_open = static_cast<double>(j) / (j + 2);
    double tau = tau_open;
    switch (rule) {
      case CgStepRule::OpenLoop:
        break;
      case CgStepRule::Adaptive: {
        const Vector delta = z - zbar;
        const double dd = delta.squaredNorm();
        if (std::sqrt(dd) <= 1e-14) {
          tau = 1.0;  // stationary dual point
        } else {
          double fstar_z;
          if (f_conj) {
            fstar_z = f_conj.value(z);
          } else {
            fstar_z = 0.0;  // convex-combination upper bound
            for (std::size_t i = 0; i < weights.size(); ++i) {
              fstar_z += weights[i] * trace.conjugate_at_atoms[i];
            }
          }
          const double wolfe = f_x - x.dot(z) + fstar_z;
          tau = std::max(0.0, 1.0 - wolfe / (lambda * dd));
          tau = std::min(tau, 1.0);
        }
        break;
      }
      case CgStepRule::LineSearch: {
        auto along = [&](double beta) {
          ++trace.prox_evals;
          return psi_value(f_conj, h, x0, lambda,
                           Vector(beta * z + (1.0 - beta) * zbar));
        };
        tau = golden_section_min(along, 1e-12, 200);
        break;
      }
    }
    it.tau = tau;
    trace.iterates.push_back(std::move(it));
    if (observer &&
        !observer(trace.iterates.back(), trace.prox_evals, trace.oracle_calls)) {
      break;
    }

    trace.conjugate_at_atoms.push_back(zbar.dot(x) - f_x);
    z = tau * z + (1.0 - tau) * zbar;
    for (double& w : weights) w *= tau;
    weights.push_back(1.0 - tau);
    u = tau_open * u + (1.0 - tau_open) * x;
  }
  return trace;
}

double wolfe_gap_exact(const CgTrace& trace, int j, const SubgradientOracle& f,
                       const ConjugateOracle& f_conj) {
  if (!f_conj) throw CapabilityError("wolfe_gap_exact: no conjugate oracle");
  const CgIterate& it = trace.iterates.at(j - 1);
  const double fstar = f_conj.value(it.z);
  if (outside_domain(fstar)) {
    throw InfeasibleDualError("wolfe_gap: dual iterate outside dom f*");
  }
  return f.value(it.x) - it.x.dot(it.z) + fstar;
}

double wolfe_gap_upper(const CgTrace& trace, int j,
                       const SubgradientOracle& f) {
  const CgIterate& it = trace.iterates.at(j - 1);
  double fstar = 0.0;
  for (std::size_t i = 0; i < it.weights.size(); ++i) {
    fstar += it.weights[i] * trace.conjugate_at_atoms[i];
  }
  return f.value(it.x) - it.x.dot(it.z) + fstar;
}

DualExtractTrace cg_variant_extract(ExtractScheme scheme,
                                    const SubgradientOracle& f,
                                    const Composite& h, const Vector& x0,
                                    double lambda, int iters) {
  constexpr double kCertTol = 1e-6;
  DualExtractTrace out;
  ++out.oracle_calls;
  const Cut first = linearize(f, x0);
  BundleModel model = scheme == ExtractScheme::TwoCut
                          ? make_two_cut(first)
                          : make_multi_cut(first, 1000000);
  ModelProxOptions opts;

  Vector tilde;
  for (int j = 1; j <= iters; ++j) {
    ModelProxSolution sol = solve_model_prox(model, h, x0, lambda, opts);
    out.prox_evals += sol.prox_calls;
    const double tau_prev = static_cast<double>(j - 1) / (j + 1);
    tilde = j == 1 ? sol.x : Vector(tau_prev * tilde + (1.0 - tau_prev) * sol.x);

    // z_j in dGamma_j(x_j): the multiplier aggregate must meet the model max.
    double residual =
        std::abs(model_value(model, sol.x) - bar_model_value(model, sol, sol.x));
    // x_j = grad (h^lambda)*(-z_j)
    residual = std::max(
        residual, (sol.x - h.prox(x0, sol.s, lambda)).norm());
    ++out.prox_evals;
    if (residual > kCertTol) {
      throw CertificationError(
          "cg_variant_extract: duality residual " + std::to_string(residual) +
          " at iteration " + std::to_string(j));
    }

    int support = 0;
    for (int i = 0; i < sol.multipliers.size(); ++i) {
      if (sol.multipliers[i] > opts.prune_tol) ++support;
    }

    ++out.oracle_calls;
    const double phi_tilde = f.value(tilde) + h.value(tilde) +
                             (tilde - x0).squaredNorm() / (2.0 * lambda);
    out.z.push_back(sol.s);
    out.x.push_back(sol.x);
    out.tilde.push_back(tilde);
    out.t.push_back(phi_tilde - sol.m);
    out.support_size.push_back(support);
    out.residuals.push_back(residual);

    ++out.oracle_calls;
    const Cut new_cut = linearize(f, sol.x);
    model = update_model(model, static_cast<double>(j) / (j + 2), sol, new_cut,
                         opts.prune_tol);
  }
  return out;
}

}  // namespace pdbundle
