#include "pdbundle/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "pdbundle/rng.hpp"

namespace pdbundle {

Vector SparseMatrixCoo::multiply(const Vector& x) const {
  Vector y = Vector::Zero(rows);
  for (const Entry& e : entries) y[e.row] += e.value * x[e.col];
  return y;
}

Vector SparseMatrixCoo::multiply_transpose(const Vector& y) const {
  Vector x = Vector::Zero(cols);
  for (const Entry& e : entries) x[e.col] += e.value * y[e.row];
  return x;
}

double SparseMatrixCoo::max_row_norm() const {
  Vector sq = Vector::Zero(rows);
  for (const Entry& e : entries) sq[e.row] += e.value * e.value;
  return rows == 0 ? 0.0 : std::sqrt(sq.maxCoeff());
}

double SparseMatrixCoo::max_col_norm() const {
  Vector sq = Vector::Zero(cols);
  for (const Entry& e : entries) sq[e.col] += e.value * e.value;
  return cols == 0 ? 0.0 : std::sqrt(sq.maxCoeff());
}

static void finalize_bounds(GameInstance& g) {
  g.Mx = g.A.max_row_norm() + g.gamma_x;
  g.My = g.A.max_col_norm() + g.gamma_y;
  g.M = std::max(g.Mx, g.My);
}

GameInstance generate_instance(int m, int n, double density, double gamma_x,
                               double gamma_y, std::uint64_t seed) {
  if (m < 1 || n < 1) throw UsageError("generate_instance: m, n must be >= 1");
  if (!(density > 0.0 && density <= 1.0)) {
    throw UsageError("generate_instance: density must lie in (0, 1]");
  }
  GameInstance g;
  g.A.rows = m;
  g.A.cols = n;
  g.gamma_x = gamma_x;
  g.gamma_y = gamma_y;
  g.density = density;
  g.seed = seed;
  Rng rng(seed);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      if (rng.uniform() < density) {
        g.A.entries.push_back({i, j, rng.normal()});
      }
    }
  }
  finalize_bounds(g);
  return g;
}

Vector linf_subgradient(const Vector& x) {
  const double norm = x.cwiseAbs().maxCoeff();
  Vector g = Vector::Zero(x.size());
  if (norm == 0.0) return g;
  const double threshold = norm * (1.0 - 1e-12);
  int active = 0;
  for (int j = 0; j < x.size(); ++j) {
    if (std::abs(x[j]) >= threshold) ++active;
  }
  const double w = 1.0 / active;
  for (int j = 0; j < x.size(); ++j) {
    if (std::abs(x[j]) >= threshold) g[j] = x[j] < 0.0 ? -w : w;
  }
  return g;
}

Vector project_simplex(const Vector& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (int k = 0; k < n; ++k) {
    cumsum += u[k];
    const double cand = (cumsum - 1.0) / (k + 1);
    if (u[k] - cand > 0.0) {
      theta = cand;
    } else {
      break;
    }
  }
  return (v.array() - theta).max(0.0);
}

Composite simplex_composite() {
  constexpr double kFeasTol = 1e-8;
  Composite h;
  h.contains = [](const Vector& x) {
    return x.minCoeff() >= -kFeasTol && std::abs(x.sum() - 1.0) <= kFeasTol;
  };
  h.value = [contains = h.contains](const Vector& x) {
    return contains(x) ? 0.0 : kOutsideDomain;
  };
  h.prox = [](const Vector& center, const Vector& tilt, double lambda) {
    return project_simplex(center - lambda * tilt);
  };
  h.support = [](const Vector& c) { return c.maxCoeff(); };
  return h;
}

FzSolution exact_fz(const Vector& z, double gamma) {
  const int n = static_cast<int>(z.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return z[a] < z[b]; });

  // S_j = (gamma + sum of the j smallest entries) / j; the sequence is
  // non-increasing up to its minimizer and non-decreasing after, so the first
  // j with S_j <= S_{j+1} is optimal.
  double prefix = z[order[0]];
  double s_prev = gamma + prefix;  // S_j at the current j
  int jstar = n;
  for (int j = 1; j < n; ++j) {
    prefix += z[order[j]];
    const double s_next = (gamma + prefix) / (j + 1);
    if (s_prev <= s_next) {
      jstar = j;
      break;
    }
    s_prev = s_next;
  }
  FzSolution sol;
  sol.jstar = jstar;
  sol.value = s_prev;
  sol.x = Vector::Zero(n);
  const double w = 1.0 / jstar;
  for (int i = 0; i < jstar; ++i) sol.x[order[i]] = w;
  return sol;
}

static void require_simplex(const Vector& p, const char* what) {
  if (p.minCoeff() < -1e-8 || std::abs(p.sum() - 1.0) > 1e-8) {
    throw UsageError(std::string(what) + ": point is off the simplex");
  }
}

double phi_eval(const GameInstance& inst, const Vector& x) {
  require_simplex(x, "phi_eval");
  const Vector ax = inst.A.multiply(x);
  return inst.gamma_x * x.cwiseAbs().maxCoeff() -
         exact_fz(-ax, inst.gamma_y).value;
}

double psi_eval(const GameInstance& inst, const Vector& y) {
  require_simplex(y, "psi_eval");
  const Vector aty = inst.A.multiply_transpose(y);
  return -inst.gamma_y * y.cwiseAbs().maxCoeff() +
         exact_fz(aty, inst.gamma_x).value;
}

double conj_membership(const Vector& c, double gamma, const Vector& z) {
  constexpr double kConjTol = 1e-9;
  const double residual = (z - c).lpNorm<1>();
  return residual <= gamma + kConjTol ? 0.0 : kOutsideDomain;
}

double conj_membership(const GameInstance& inst, GameSide side,
                       const Vector& anchor, const Vector& z) {
  if (side == GameSide::X) {
    return conj_membership(inst.A.multiply_transpose(anchor), inst.gamma_x, z);
  }
  return conj_membership(-inst.A.multiply(anchor), inst.gamma_y, z);
}

SubgradientOracle linf_piece(const Vector& c, double gamma) {
  SubgradientOracle f;
  f.value = [c, gamma](const Vector& u) {
    return c.dot(u) + gamma * u.cwiseAbs().maxCoeff();
  };
  f.subgradient = [c, gamma](const Vector& u) {
    return Vector(c + gamma * linf_subgradient(u));
  };
  f.lipschitz_bound = c.norm() + gamma;
  return f;
}

ConjugateOracle linf_piece_conjugate(const Vector& c, double gamma) {
  ConjugateOracle conj;
  conj.value = [c, gamma](const Vector& z) {
    return conj_membership(c, gamma, z);
  };
  return conj;
}

void save_instance(std::ostream& out, const GameInstance& inst) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d %d %.17g %.17g %.17g %llu\n", inst.m(),
                inst.n(), inst.density, inst.gamma_x, inst.gamma_y,
                static_cast<unsigned long long>(inst.seed));
  out << buf;
  for (const auto& e : inst.A.entries) {
    std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", e.row, e.col, e.value);
    out << buf;
  }
}

GameInstance load_instance(std::istream& in) {
  GameInstance g;
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("instance file: missing header line");
  }
  {
    std::istringstream hs(line);
    unsigned long long seed = 0;
    if (!(hs >> g.A.rows >> g.A.cols >> g.density >> g.gamma_x >> g.gamma_y >>
          seed)) {
      throw ConfigError("instance file: malformed header '" + line + "'");
    }
    g.seed = seed;
  }
  if (g.A.rows < 1 || g.A.cols < 1) {
    throw ConfigError("instance file: non-positive dimensions in header");
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    SparseMatrixCoo::Entry e;
    if (!(ls >> e.row >> e.col >> e.value)) {
      throw ConfigError("instance file: malformed triplet at line " +
                        std::to_string(lineno));
    }
    if (e.row < 0 || e.row >= g.A.rows || e.col < 0 || e.col >= g.A.cols) {
      throw ConfigError("instance file: index out of range at line " +
                        std::to_string(lineno));
    }
    g.A.entries.push_back(e);
  }
  finalize_bounds(g);
  return g;
}

void save_instance_file(const std::string& path, const GameInstance& inst) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open instance file for writing: " + path);
  save_instance(out, inst);
}

GameInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open instance file: " + path);
  return load_instance(in);
}

}  // namespace pdbundle
