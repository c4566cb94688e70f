#ifndef PDBUNDLE_TRACE_HPP_
#define PDBUNDLE_TRACE_HPP_

#include <functional>

namespace pdbundle {

// One logged point of a run: the gap at outer iteration k together with the
// work counters at that moment. Solvers fire the hook at their log cadence;
// the harness stamps wall-clock time there.
struct GapSample {
  long k = 0;
  double gap = 0.0;
  long total_inner_iters = 0;
  long prox_evals = 0;
  long oracle_calls = 0;
};

using LogHook = std::function<void(const GapSample&)>;

}  // namespace pdbundle

#endif  // PDBUNDLE_TRACE_HPP_
