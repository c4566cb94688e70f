#ifndef PDBUNDLE_MATRIX_GAME_HPP_
#define PDBUNDLE_MATRIX_GAME_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pdbundle/problem.hpp"

namespace pdbundle {

// Sparse payoff matrix in coordinate-triplet form. Entries are kept in
// row-major order and mat-vec products accumulate in that fixed order, so
// results are reproducible bit for bit.
struct SparseMatrixCoo {
  struct Entry {
    int row = 0;
    int col = 0;
    double value = 0.0;
  };

  int rows = 0;
  int cols = 0;
  std::vector<Entry> entries;

  Vector multiply(const Vector& x) const;            // A x
  Vector multiply_transpose(const Vector& y) const;  // A^T y
  double max_row_norm() const;
  double max_col_norm() const;
};

// The l_inf-regularized matrix game of the benchmark family:
//   min_{x in Delta_n} max_{y in Delta_m}  y^T A x + gx ||x||_inf - gy ||y||_inf.
struct GameInstance {
  SparseMatrixCoo A;
  double gamma_x = 0.0;
  double gamma_y = 0.0;
  double density = 0.0;
  std::uint64_t seed = 0;
  double Mx = 0.0;  // max row norm of A + gamma_x
  double My = 0.0;  // max col norm of A + gamma_y
  double M = 0.0;   // max(Mx, My)

  int m() const { return A.rows; }
  int n() const { return A.cols; }
};

GameInstance generate_instance(int m, int n, double density, double gamma_x,
                               double gamma_y, std::uint64_t seed);

// Subgradient of ||.||_inf with uniform weights over the active set
// I(x) = { j : |x_j| >= ||x||_inf (1 - 1e-12) }, signed by sign(x_j).
// Returns zero at x = 0.
Vector linf_subgradient(const Vector& x);

// Euclidean projection onto the unit simplex (sort-and-threshold).
Vector project_simplex(const Vector& v);

// Indicator of the unit simplex as a Composite; prox(center, tilt, lambda)
// projects center - lambda * tilt, support(c) = max_i c_i.
Composite simplex_composite();

// Exact solution of min_{x in Delta_n} <z, x> + gamma ||x||_inf.
struct FzSolution {
  Vector x;
  double value = 0.0;
  int jstar = 0;  // number of active (uniform) coordinates
};
FzSolution exact_fz(const Vector& z, double gamma);

// Exact primal and dual value functions of the game,
//   phi(x) = gx ||x||_inf + max_{y in Delta_m} { y^T A x - gy ||y||_inf },
//   psi(y) = -gy ||y||_inf + min_{x in Delta_n} { y^T A x + gx ||x||_inf }.
double phi_eval(const GameInstance& inst, const Vector& x);
double psi_eval(const GameInstance& inst, const Vector& y);

// Conjugate of u -> <c, u> + gamma ||u||_inf: the indicator of the l1-ball
// { z : ||z - c||_1 <= gamma }. Returns 0 on membership (within an absolute
// tolerance of 1e-9 on the l1 residual) and kOutsideDomain otherwise.
double conj_membership(const Vector& c, double gamma, const Vector& z);

enum class GameSide { X, Y };

// Instance-level membership test. anchor is the frozen other variable:
// side X freezes y (c = A^T y), side Y freezes x (c = -A x after negation).
double conj_membership(const GameInstance& inst, GameSide side,
                       const Vector& anchor, const Vector& z);

// One-sided piece f(u) = <c, u> + gamma ||u||_inf as a subgradient oracle
// (lipschitz_bound = ||c|| + gamma) and its exact conjugate.
SubgradientOracle linf_piece(const Vector& c, double gamma);
ConjugateOracle linf_piece_conjugate(const Vector& c, double gamma);

// Text instance format: header "m n density gamma_x gamma_y seed", then one
// "i j value" triplet per line (0-based indices, 17 significant digits).
void save_instance(std::ostream& out, const GameInstance& inst);
GameInstance load_instance(std::istream& in);
void save_instance_file(const std::string& path, const GameInstance& inst);
GameInstance load_instance_file(const std::string& path);

}  // namespace pdbundle

#endif  // PDBUNDLE_MATRIX_GAME_HPP_
