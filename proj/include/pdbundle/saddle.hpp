#ifndef PDBUNDLE_SADDLE_HPP_
#define PDBUNDLE_SADDLE_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "pdbundle/pdcp.hpp"
#include "pdbundle/trace.hpp"

namespace pdbundle {

// Convex-concave saddle-point instance min_x max_y f(x,y) + h1(x) - h2(y)
// with bounded domains. The x/y piece factories freeze one variable and
// expose the other side as a plain composite-optimization oracle; the
// optional conjugate factories make gap certificates exact.
struct SaddleInstance {
  std::function<double(const Vector&, const Vector&)> f;
  std::function<Vector(const Vector&, const Vector&)> fx;  // in dx f
  std::function<Vector(const Vector&, const Vector&)> fy;  // in dy f (super)
  Composite h1;
  Composite h2;
  double M = 0.0;  // uniform bound on ||fx||, ||fy||
  double D = 0.0;  // diameter of dom h1 x dom h2
  std::function<double(const Vector&)> phi_exact;  // max_y phi(x, y)
  std::function<double(const Vector&)> psi_exact;  // min_x phi(x, y)
  std::function<ConjugateOracle(const Vector&)> x_piece_conj;  // conj of f(.,y)
  std::function<ConjugateOracle(const Vector&)> y_piece_conj;  // conj of -f(x,.)

  bool has_exact_evaluators() const {
    return static_cast<bool>(phi_exact) && static_cast<bool>(psi_exact);
  }

  SubgradientOracle x_piece(const Vector& y_frozen) const;
  SubgradientOracle y_piece(const Vector& x_frozen) const;
};

// phi(x) - psi(y) >= 0; needs exact evaluators.
double saddle_gap(const SaddleInstance& inst, const Vector& x, const Vector& y);

// Data of one outer step, enough to certify it as an inexact proximal-point
// step. model_x_at_x is (Gamma^x + h1)(x_k) for the bundle method (unused by
// the subgradient method), likewise model_y_at_y.
struct SaddleStepData {
  int k = 0;
  double lambda = 0.0;
  Vector x_prev, y_prev;
  Vector x, y;
  Vector tx, ty;  // the tilde points (equal to x, y for CS-SPP)
  double model_x_at_x = 0.0;
  double model_y_at_y = 0.0;
  double eps_bar = 0.0;  // PB-SPP tolerance, sets the proximity budget
};

using SaddleObserver = std::function<void(const SaddleStepData&)>;

struct SaddleRunResult {
  Vector x_bar, y_bar;
  std::vector<GapSample> gap_trace;
  long outer_iters = 0;
  long total_inner_iters = 0;
  long prox_evals = 0;
  long oracle_calls = 0;
  bool reached_target = false;
  std::vector<int> cycle_lengths_x;  // PB-SPP only
  std::vector<int> cycle_lengths_y;
};

// Composite subgradient method: simultaneous prox-linear steps in x and y,
// both linearized at the previous pair, averages over all iterates.
struct CsSppOptions {
  long max_iters = 1000000;
  double eps_target = 0.0;  // 0: run out the budget
  long gap_cadence = 1000;
  LogHook on_log;  // fired at every gap sample
};

SaddleRunResult cs_spp_run(const SaddleInstance& inst, const Vector& x0,
                           const Vector& y0, double lambda,
                           const CsSppOptions& opts,
                           const SaddleObserver& observer = nullptr);

// Proximal bundle method for the saddle problem: per outer step, two
// independent PDCP cycles at tolerance eps_bar / 4 with stepsize
// lambda_k = lambda1 / sqrt(k); averages over the cycle tilde outputs.
// improved_gap switches the cycles to the weighted-average gap (two-/multi-
// cuts only) and averages those points instead.
struct PbSppOptions {
  double eps_bar = 1e-4;
  double lambda1 = 0.0;  // <= 0: use D / (4 M)
  Scheme scheme = Scheme::OneCut;
  int max_cuts = 10;
  long max_outer = 100000;
  int max_cycle_iters = 10000000;
  bool improved_gap = false;
  long gap_cadence = 1;
  LogHook on_log;  // fired at every gap sample
};

SaddleRunResult pb_spp_run(const SaddleInstance& inst, const Vector& x0,
                           const Vector& y0, const PbSppOptions& opts,
                           const SaddleObserver& observer = nullptr);

// Certificate of the inexact proximal-point inclusion and proximity bound.
// The subgradient method is certified with (sigma, delta) = (1, 8 lambda^2 M^2),
// the bundle method with (0, lambda_k eps_bar): its left-hand side equals
// 2 lambda_k (t_k^x + t_k^y) identically, which the eps_bar/4 cycle
// tolerances bound by lambda_k eps_bar.
enum class SaddleMethod { CsSpp, PbSpp };

struct IppfCertificate {
  double eps_k = 0.0;
  double inclusion_residual = 0.0;  // worst violation over sampled (u, v)
  double proximity_lhs = 0.0;
  double proximity_rhs = 0.0;
};

// validate=true raises CertificationError on any violation beyond 1e-8,
// naming the inequality and the iteration.
IppfCertificate ippf_certificate(SaddleMethod method,
                                 const SaddleInstance& inst,
                                 const SaddleStepData& step, int sample_count,
                                 std::uint64_t sample_seed = 2024,
                                 bool validate = true);

}  // namespace pdbundle

#endif  // PDBUNDLE_SADDLE_HPP_
