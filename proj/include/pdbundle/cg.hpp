#ifndef PDBUNDLE_CG_HPP_
#define PDBUNDLE_CG_HPP_

#include <vector>

#include "pdbundle/pdcp.hpp"

namespace pdbundle {

// Conditional gradient on the Fenchel dual of the proximal subproblem,
//   min_z psi(z) = (h^lambda)*(-z) + f*(z).
// The linear minimization oracle is realized through the primal problem:
// one prox gives x = grad (h^lambda)*(-z), one subgradient call gives zbar.
enum class CgStepRule { OpenLoop, Adaptive, LineSearch };

struct CgIterate {
  Vector z;
  Vector zbar;
  Vector x;  // grad (h^lambda)*(-z)
  Vector u;  // primal average, open-loop weights
  double tau = 0.0;  // step actually taken at this iteration
  // Convex-combination weights of z over {zbar_0 = z_1, zbar_1, ...,
  // zbar_{j-1}} and the Fenchel values f*(zbar_i) those atoms carry.
  std::vector<double> weights;
};

struct CgTrace {
  std::vector<CgIterate> iterates;
  std::vector<double> conjugate_at_atoms;  // f*(zbar_i) via Fenchel equality
  long prox_evals = 0;
  long oracle_calls = 0;
};

// LMO step at a dual point z.
struct LmoResult {
  Vector zbar;
  Vector x;
};
LmoResult lmo_dual(const SubgradientOracle& f, const Composite& h,
                   const Vector& x0, double lambda, const Vector& z);

// Called after each iteration with the fresh iterate and running counters;
// returning false stops the run early.
using CgObserver =
    std::function<bool(const CgIterate&, long prox_evals, long oracle_calls)>;

CgTrace cg_run(const SubgradientOracle& f, const Composite& h,
               const Vector& x0, double lambda, int iters, CgStepRule rule,
               const ConjugateOracle& f_conj = {},
               const CgObserver& observer = {});

// psi(z) with an exact conjugate oracle.
double psi_value(const ConjugateOracle& f_conj, const Composite& h,
                 const Vector& x0, double lambda, const Vector& z);

// Wolfe gap S(z_j) = f(x_j) - <x_j, z_j> + f*(z_j). Exact mode uses the
// conjugate oracle; the estimate mode replaces f*(z_j) by the tracked
// convex-combination upper bound and is an upper estimate of S.
double wolfe_gap_exact(const CgTrace& trace, int j, const SubgradientOracle& f,
                       const ConjugateOracle& f_conj);
double wolfe_gap_upper(const CgTrace& trace, int j, const SubgradientOracle& f);

// Dual iterates extracted from PDCP run with the two- or multi-cuts scheme:
// z_j is the multiplier combination of past atoms. Verifies the duality
// relations each iteration and reports multiplier sparsity.
enum class ExtractScheme { TwoCut, MultiCut };

struct DualExtractTrace {
  std::vector<Vector> z;
  std::vector<Vector> x;
  std::vector<Vector> tilde;
  std::vector<double> t;
  std::vector<int> support_size;  // nonzero multipliers per iteration
  std::vector<double> residuals;  // complementarity |Gamma(x) - sum theta l_i(x)|
  long prox_evals = 0;
  long oracle_calls = 0;
};

DualExtractTrace cg_variant_extract(ExtractScheme scheme,
                                    const SubgradientOracle& f,
                                    const Composite& h, const Vector& x0,
                                    double lambda, int iters);

}  // namespace pdbundle

#endif  // PDBUNDLE_CG_HPP_
