#include "pdbundle/problem.hpp"

#include <cmath>

namespace pdbundle {

double cut_eval(const Cut& cut, const Vector& u) {
  if (u.size() != cut.anchor.size()) {
    throw UsageError("cut_eval: dimension mismatch");
  }
  return cut.anchor_value + cut.grad.dot(u - cut.anchor);
}

Cut linearize(const SubgradientOracle& oracle, const Vector& x) {
  Cut cut;
  cut.anchor = x;
  cut.anchor_value = oracle.value(x);
  if (!std::isfinite(cut.anchor_value)) {
    throw UsageError("linearize: oracle returned a non-finite value");
  }
  cut.grad = oracle.subgradient(x);
  if (!cut.grad.allFinite()) {
    throw UsageError("linearize: oracle returned a non-finite subgradient");
  }
  return cut;
}

Composite free_space() {
  Composite h;
  h.value = [](const Vector&) { return 0.0; };
  h.prox = [](const Vector& center, const Vector& tilt, double lambda) {
    return Vector(center - lambda * tilt);
  };
  h.contains = [](const Vector&) { return true; };
  return h;
}

double hlam_conjugate_neg(const Composite& h, const Vector& center,
                          double lambda, const Vector& s) {
  const Vector u = h.prox(center, s, lambda);
  return -s.dot(u) - h.value(u) - (u - center).squaredNorm() / (2.0 * lambda);
}

}  // namespace pdbundle
