#ifndef PDBUNDLE_PROBLEM_HPP_
#define PDBUNDLE_PROBLEM_HPP_

#include <Eigen/Core>
#include <functional>

#include "pdbundle/errors.hpp"

namespace pdbundle {

using Vector = Eigen::VectorXd;

// First-order oracle for a convex f: value, one deterministic subgradient,
// and a bound M with ||subgradient(x)|| <= M everywhere it is queried.
// Deterministic means the same point always yields the same subgradient;
// the primal-dual equivalence tests rely on that.
struct SubgradientOracle {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> subgradient;
  double lipschitz_bound = 0.0;
};

// Evaluator of the Fenchel conjugate f*. Returns kOutsideDomain off dom f*.
// Optional capability: a default-constructed oracle is "absent".
struct ConjugateOracle {
  std::function<double(const Vector&)> value;
  explicit operator bool() const { return static_cast<bool>(value); }
};

// Prox-friendly convex h. prox(center, tilt, lambda) solves
//   argmin_u <tilt, u> + h(u) + ||u - center||^2 / (2 lambda)
// exactly. support(c) = sup_{u in dom h} { <c, u> - h(u) }, available only
// when dom h is bounded.
struct Composite {
  std::function<double(const Vector&)> value;  // h(x), kOutsideDomain outside
  std::function<Vector(const Vector&, const Vector&, double)> prox;
  std::function<double(const Vector&)> support;  // empty when dom h unbounded
  std::function<bool(const Vector&)> contains;

  bool bounded_domain() const { return static_cast<bool>(support); }
};

// One affine minorant of f: u -> anchor_value + <grad, u - anchor>.
struct Cut {
  Vector anchor;
  double anchor_value = 0.0;
  Vector grad;
};

double cut_eval(const Cut& cut, const Vector& u);

Cut linearize(const SubgradientOracle& oracle, const Vector& x);

// h == 0 on all of R^n. Unbounded domain: no support function.
Composite free_space();

// (h^lambda)*(-s) where h^lambda(u) = h(u) + ||u - center||^2/(2 lambda),
// evaluated through a single prox call.
double hlam_conjugate_neg(const Composite& h, const Vector& center,
                          double lambda, const Vector& s);

}  // namespace pdbundle

#endif  // PDBUNDLE_PROBLEM_HPP_
