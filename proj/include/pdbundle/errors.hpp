#ifndef PDBUNDLE_ERRORS_HPP_
#define PDBUNDLE_ERRORS_HPP_

#include <limits>
#include <stdexcept>
#include <string>

namespace pdbundle {

// Misuse of an operation: bad dimensions, parameters outside their range,
// points outside the feasible set.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The requested computation needs a capability the instance does not carry
// (conjugate oracle, bounded domain, exact evaluators).
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An inner solver stopped at its iteration cap without reaching its KKT
// tolerance. Carries the residual it did reach.
struct SolverToleranceError : std::runtime_error {
  SolverToleranceError(const std::string& what, double res)
      : std::runtime_error(what), residual(res) {}
  double residual;
};

// A runtime certificate (duality relation, IPPF inequality) failed.
struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A dual point fell outside dom f*; averaging or aggregation is broken.
struct InfeasibleDualError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed configuration or instance file.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Marker for +infinity function values (points outside dom h, dual points
// outside dom f*). Stored explicitly, never produced by overflow.
inline constexpr double kOutsideDomain = std::numeric_limits<double>::infinity();

inline bool outside_domain(double v) {
  return v == std::numeric_limits<double>::infinity();
}

}  // namespace pdbundle

#endif  // PDBUNDLE_ERRORS_HPP_
