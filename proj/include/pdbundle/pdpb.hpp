#ifndef PDBUNDLE_PDPB_HPP_
#define PDBUNDLE_PDPB_HPP_

#include <optional>
#include <vector>

#include "pdbundle/pdcp.hpp"
#include "pdbundle/trace.hpp"

namespace pdbundle {

// Outer loop of the primal-dual proximal bundle method: repeated PDCP cycles
// from the moving prox center, with running averages of the cycle outputs.
struct PdpbState {
  int cycles = 0;
  Vector center0;
  Vector x_hat;   // current prox center
  Vector x_bar;   // (1/k) sum of cycle tilde outputs
  Vector s_bar;   // (1/k) sum of cycle dual outputs
  std::vector<int> cycle_lengths;
  std::vector<double> cycle_first_t;
  std::vector<Vector> tilde_history;
  std::vector<Vector> s_history;
  std::vector<double> gap_history;  // one entry per cycle when computable
  bool budget_exhausted = false;    // some cycle hit its iteration cap
  bool target_reached = false;
  long prox_evals = 0;
  long oracle_calls = 0;
  long total_inner_iters = 0;
};

struct PdpbOptions {
  int max_cycles = 1000;
  bool abort_on_cycle_budget = false;  // otherwise continue with the flag set
  double gap_target = 0.0;             // 0: run all cycles
  bool keep_history = true;
  LogHook on_log;  // fired once per cycle when the gap is computable
};

PdpbState pdpb_run(const SubgradientOracle& f, const Composite& h,
                   const Vector& x_hat0, double lambda, double eps_bar,
                   const PdcpConfig& cycle_cfg, const PdpbOptions& opts,
                   const ConjugateOracle& f_conj = {});

// Primal-dual gap of the domain-restricted problem at the running averages:
//   phi(x_bar) + f*(s_bar) + h_hat*(-s_bar).
// For bounded dom h the last term is the composite's support function; for
// unbounded dom h a radius R around the initial center must be supplied
// (only h == 0 is supported on that path).
double pdpb_gap_report(const PdpbState& state, const SubgradientOracle& f,
                       const ConjugateOracle& f_conj, const Composite& h,
                       std::optional<double> radius = std::nullopt);

// Primal-dual subgradient baseline: one prox-linear step per iteration,
// averages over iterates and subgradients.
struct PdsResult {
  Vector x_hat;
  Vector x_bar;
  Vector s_bar;
  std::vector<std::pair<long, double>> gap_trace;  // (iteration, gap)
  long prox_evals = 0;
  long oracle_calls = 0;
};

PdsResult pds_run(const SubgradientOracle& f, const Composite& h,
                  const Vector& x_hat0, double lambda, long iters,
                  const ConjugateOracle& f_conj = {}, long gap_cadence = 0,
                  const LogHook& on_log = {});

}  // namespace pdbundle

#endif  // PDBUNDLE_PDPB_HPP_
