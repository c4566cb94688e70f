#ifndef PDBUNDLE_PDCP_HPP_
#define PDBUNDLE_PDCP_HPP_

#include <functional>
#include <optional>
#include <vector>

#include "pdbundle/bundle.hpp"

namespace pdbundle {

enum class Scheme { OneCut, TwoCuts, MultiCuts };
enum class TildeRule { ConvexCombination, BestIterate };

// One cycle of the primal-dual cutting-plane scheme on
//   min_u f(u) + h(u) + ||u - x0||^2 / (2 lambda).
struct PdcpConfig {
  Scheme scheme = Scheme::OneCut;
  int max_cuts = 10;  // multi-cuts budget
  double epsilon = 1e-6;
  TildeRule tilde_rule = TildeRule::ConvexCombination;
  int max_iters = 1000000;
  bool track_hat = false;        // maintain the weighted average and its gap
  bool hat_termination = false;  // stop on hat_t instead of t (needs track_hat)
  bool record_trace = true;
  std::function<double(int)> tau;  // defaults to j / (j + 2)
  ModelProxOptions prox_options;
};

struct IterationRecord {
  double t = 0.0;
  double m = 0.0;
  double step_norm = 0.0;  // ||x_j - x_{j-1}||, with x_0 the prox center
  double hat_t = 0.0;      // NaN when not tracked or j < 2
};

struct CycleResult {
  Vector x_last;
  Vector tilde;
  Vector s;
  double t = 0.0;
  double m = 0.0;
  std::optional<Vector> hat;
  double hat_t = 0.0;  // NaN unless tracked
  int iters = 0;
  double first_t = 0.0;
  bool budget_exhausted = false;
  double best_t = 0.0;
  std::vector<IterationRecord> trace;
  long prox_evals = 0;
  long oracle_calls = 0;
};

// Called once per iteration with (j, x_j, tilde_j, s_j, t_j, m_j).
using PdcpObserver = std::function<void(int, const Vector&, const Vector&,
                                        const Vector&, double, double)>;

CycleResult pdcp_run(const SubgradientOracle& f, const Composite& h,
                     const Vector& x0, double lambda, const PdcpConfig& cfg,
                     const PdcpObserver& observer = nullptr);

// Left-hand side of the gap certificate
//   phi^lambda(tilde) + f*(s) + (h^lambda)*(-s)  <=  t,
// for an arbitrary (tilde, s) pair of a cycle. phi_lam_tilde is
// phi^lambda(tilde); throws InfeasibleDualError when s lies outside dom f*.
double gap_certificate_at(const ConjugateOracle& f_conj, const Composite& h,
                          const Vector& x0, double lambda,
                          double phi_lam_tilde, const Vector& s);

// Certificate evaluated at the cycle's output pair; phi^lambda(tilde) is
// recovered as t + m.
double gap_certificate(const CycleResult& result,
                       const ConjugateOracle& f_conj, const Composite& h,
                       const Vector& x0, double lambda);

}  // namespace pdbundle

#endif  // PDBUNDLE_PDCP_HPP_
