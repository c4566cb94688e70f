// Test-side reference oracles: brute-force and grid minimizers kept
// independent of the solver code paths they check.
#ifndef PDBUNDLE_TESTS_SUPPORT_HPP_
#define PDBUNDLE_TESTS_SUPPORT_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "pdbundle/problem.hpp"
#include "pdbundle/rng.hpp"

namespace pdbundle::testsupport {

// max_i cuts_i(u) for hand-built cut collections.
inline double max_affine(const std::vector<Cut>& cuts, const Vector& u) {
  double v = -std::numeric_limits<double>::infinity();
  for (const Cut& c : cuts) v = std::max(v, cut_eval(c, u));
  return v;
}

// Exact minimizer of max_i l_i(u) + ||u - x0||^2 / (2 lambda) over the unit
// simplex by brute force over active sets: every combination of active cuts
// and zeroed coordinates yields one KKT-stationarity linear system; each
// feasible solution is a candidate and the optimum is among them.
struct ExactMin {
  Vector argmin;
  double value = 0.0;
};

inline ExactMin exact_min_maxaffine_simplex(const std::vector<Cut>& cuts,
                                            const Vector& x0, double lambda) {
  const int n = static_cast<int>(x0.size());
  const int kc = static_cast<int>(cuts.size());
  Eigen::VectorXd intercepts(kc);
  Eigen::MatrixXd grads(n, kc);
  for (int i = 0; i < kc; ++i) {
    intercepts[i] = cuts[i].anchor_value - cuts[i].grad.dot(cuts[i].anchor);
    grads.col(i) = cuts[i].grad;
  }
  auto objective = [&](const Vector& u) {
    return max_affine(cuts, u) + (u - x0).squaredNorm() / (2.0 * lambda);
  };

  ExactMin best;
  best.value = std::numeric_limits<double>::infinity();
  for (int smask = 1; smask < (1 << kc); ++smask) {
    for (int zmask = 0; zmask < (1 << n) - 1; ++zmask) {
      std::vector<int> active, zeroed;
      for (int i = 0; i < kc; ++i)
        if (smask & (1 << i)) active.push_back(i);
      for (int j = 0; j < n; ++j)
        if (zmask & (1 << j)) zeroed.push_back(j);
      const int s = static_cast<int>(active.size());
      const int z = static_cast<int>(zeroed.size());
      // unknowns: u (n), r, mu (s), nu (z), kappa
      const int dim = n + 1 + s + z + 1;
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
      for (int a = 0; a < n; ++a) {
        M(a, a) = 1.0 / lambda;
        for (int i = 0; i < s; ++i) M(a, n + 1 + i) = grads(a, active[i]);
        for (int j = 0; j < z; ++j) M(a, n + 1 + s + j) = (zeroed[j] == a);
        M(a, dim - 1) = 1.0;
        rhs[a] = x0[a] / lambda;
      }
      for (int i = 0; i < s; ++i) M(n, n + 1 + i) = 1.0;  // sum mu = 1
      rhs[n] = 1.0;
      for (int i = 0; i < s; ++i) {  // l_i(u) = r
        for (int a = 0; a < n; ++a) M(n + 1 + i, a) = grads(a, active[i]);
        M(n + 1 + i, n) = -1.0;
        rhs[n + 1 + i] = -intercepts[active[i]];
      }
      for (int j = 0; j < z; ++j) M(n + 1 + s + j, zeroed[j]) = 1.0;
      for (int a = 0; a < n; ++a) M(dim - 1, a) = 1.0;  // sum u = 1
      rhs[dim - 1] = 1.0;

      const Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      if (!lu.isInvertible()) continue;
      const Eigen::VectorXd sol = lu.solve(rhs);
      const Vector u = sol.head(n);
      if (u.minCoeff() < -1e-9 || std::abs(u.sum() - 1.0) > 1e-9) continue;
      const double val = objective(u);
      if (val < best.value) {
        best.value = val;
        best.argmin = u;
      }
    }
  }
  return best;
}

inline std::vector<Vector> random_simplex_points(Rng& rng, int n, int count) {
  std::vector<Vector> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) pts.push_back(rng.simplex_point(n));
  return pts;
}

}  // namespace pdbundle::testsupport

#endif  // PDBUNDLE_TESTS_SUPPORT_HPP_
