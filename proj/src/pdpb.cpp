#include "pdbundle/pdpb.hpp"

namespace pdbundle {

namespace {

double restricted_gap(const Vector& x_bar, const Vector& s_bar,
                      const Vector& center0, const SubgradientOracle& f,
                      const Composite& h, const ConjugateOracle& f_conj,
                      std::optional<double> radius) {
  const double fstar = f_conj.value(s_bar);
  if (outside_domain(fstar)) {
    throw InfeasibleDualError("gap report: averaged dual outside dom f*");
  }
  double hhat_star;
  if (h.bounded_domain()) {
    hhat_star = h.support(-s_bar);
  } else if (radius) {
    // h == 0 restricted to the ball B(center0, R)
    hhat_star = -s_bar.dot(center0) + *radius * s_bar.norm();
  } else {
    throw CapabilityError(
        "gap report: dom h unbounded and no restriction radius given");
  }
  return f.value(x_bar) + h.value(x_bar) + fstar + hhat_star;
}

}  // namespace

PdpbState pdpb_run(const SubgradientOracle& f, const Composite& h,
                   const Vector& x_hat0, double lambda, double eps_bar,
                   const PdcpConfig& cycle_cfg, const PdpbOptions& opts,
                   const ConjugateOracle& f_conj) {
  if (!(eps_bar > 0.0)) throw UsageError("pdpb_run: eps_bar must be > 0");
  PdpbState st;
  st.center0 = x_hat0;
  st.x_hat = x_hat0;
  st.x_bar = Vector::Zero(x_hat0.size());
  st.s_bar = Vector::Zero(x_hat0.size());

  PdcpConfig cfg = cycle_cfg;
  cfg.epsilon = eps_bar;

  Vector tilde_sum = Vector::Zero(x_hat0.size());
  Vector s_sum = Vector::Zero(x_hat0.size());

  const bool can_report = static_cast<bool>(f_conj) && h.bounded_domain();
  for (int k = 1; k <= opts.max_cycles; ++k) {
    CycleResult cycle = pdcp_run(f, h, st.x_hat, lambda, cfg);
    st.prox_evals += cycle.prox_evals;
    st.oracle_calls += cycle.oracle_calls;
    st.total_inner_iters += cycle.iters;
    if (cycle.budget_exhausted) {
      st.budget_exhausted = true;
      if (opts.abort_on_cycle_budget) break;
    }
    st.cycles = k;
    st.cycle_lengths.push_back(cycle.iters);
    st.cycle_first_t.push_back(cycle.first_t);
    tilde_sum += cycle.tilde;
    s_sum += cycle.s;
    st.x_bar = tilde_sum / k;
    st.s_bar = s_sum / k;
    st.x_hat = cycle.x_last;
    if (opts.keep_history) {
      st.tilde_history.push_back(cycle.tilde);
      st.s_history.push_back(cycle.s);
    }
    if (can_report) {
      const double gap =
          restricted_gap(st.x_bar, st.s_bar, st.center0, f, h, f_conj, {});
      st.gap_history.push_back(gap);
      if (opts.on_log) {
        opts.on_log({k, gap, st.total_inner_iters, st.prox_evals,
                     st.oracle_calls});
      }
      if (opts.gap_target > 0.0 && gap <= opts.gap_target) {
        st.target_reached = true;
        break;
      }
    }
  }
  return st;
}

double pdpb_gap_report(const PdpbState& state, const SubgradientOracle& f,
                       const ConjugateOracle& f_conj, const Composite& h,
                       std::optional<double> radius) {
  if (!f_conj) throw CapabilityError("gap report: no conjugate oracle");
  if (state.cycles < 1) throw UsageError("gap report: no cycles recorded");
  return restricted_gap(state.x_bar, state.s_bar, state.center0, f, h, f_conj,
                        radius);
}

PdsResult pds_run(const SubgradientOracle& f, const Composite& h,
                  const Vector& x_hat0, double lambda, long iters,
                  const ConjugateOracle& f_conj, long gap_cadence,
                  const LogHook& on_log) {
  if (!(lambda > 0.0)) throw UsageError("pds_run: lambda must be > 0");
  PdsResult r;
  r.x_hat = x_hat0;
  Vector x_sum = Vector::Zero(x_hat0.size());
  Vector s_sum = Vector::Zero(x_hat0.size());
  const bool track_gap =
      gap_cadence > 0 && static_cast<bool>(f_conj) && h.bounded_domain();
  for (long k = 1; k <= iters; ++k) {
    const Vector s = f.subgradient(r.x_hat);
    ++r.oracle_calls;
    r.x_hat = h.prox(r.x_hat, s, lambda);
    ++r.prox_evals;
    x_sum += r.x_hat;
    s_sum += s;
    if (track_gap && (k % gap_cadence == 0 || k == iters)) {
      r.x_bar = x_sum / k;
      r.s_bar = s_sum / k;
      const double gap = f.value(r.x_bar) + h.value(r.x_bar) +
                         f_conj.value(r.s_bar) + h.support(-r.s_bar);
      ++r.oracle_calls;
      r.gap_trace.emplace_back(k, gap);
      if (on_log) on_log({k, gap, k, r.prox_evals, r.oracle_calls});
    }
  }
  if (iters > 0) {
    r.x_bar = x_sum / iters;
    r.s_bar = s_sum / iters;
  } else {
    r.x_bar = x_hat0;
    r.s_bar = Vector::Zero(x_hat0.size());
  }
  return r;
}

}  // namespace pdbundle
