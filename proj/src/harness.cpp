#include "pdbundle/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <numeric>
#include <sstream>

#include "pdbundle/cg.hpp"
#include "pdbundle/pdpb.hpp"
#include "pdbundle/rng.hpp"

namespace pdbundle {

SaddleInstance make_saddle(const GameInstance& game) {
  // one shared copy so the oracles stay valid however long the instance lives
  const auto g = std::make_shared<const GameInstance>(game);
  SaddleInstance inst;
  inst.f = [g](const Vector& x, const Vector& y) {
    return y.dot(g->A.multiply(x)) + g->gamma_x * x.cwiseAbs().maxCoeff() -
           g->gamma_y * y.cwiseAbs().maxCoeff();
  };
  inst.fx = [g](const Vector& x, const Vector& y) {
    return Vector(g->A.multiply_transpose(y) +
                  g->gamma_x * linf_subgradient(x));
  };
  inst.fy = [g](const Vector& x, const Vector& y) {
    return Vector(g->A.multiply(x) - g->gamma_y * linf_subgradient(y));
  };
  inst.h1 = simplex_composite();
  inst.h2 = simplex_composite();
  inst.M = game.M;
  // Product of two unit simplices: sqrt(2 + 2) whenever both sides have at
  // least two coordinates.
  const double dx = game.n() > 1 ? 2.0 : 0.0;
  const double dy = game.m() > 1 ? 2.0 : 0.0;
  inst.D = std::sqrt(dx + dy);
  inst.phi_exact = [g](const Vector& x) { return phi_eval(*g, x); };
  inst.psi_exact = [g](const Vector& y) { return psi_eval(*g, y); };
  inst.x_piece_conj = [g](const Vector& y) {
    const Vector c = g->A.multiply_transpose(y);
    const double shift = -g->gamma_y * y.cwiseAbs().maxCoeff();
    ConjugateOracle conj;
    conj.value = [c, gamma = g->gamma_x, shift](const Vector& z) {
      const double member = conj_membership(c, gamma, z);
      return outside_domain(member) ? kOutsideDomain : member - shift;
    };
    return conj;
  };
  inst.y_piece_conj = [g](const Vector& x) {
    const Vector c = -g->A.multiply(x);
    const double shift = g->gamma_x * x.cwiseAbs().maxCoeff();
    ConjugateOracle conj;
    conj.value = [c, gamma = g->gamma_y, shift](const Vector& z) {
      const double member = conj_membership(c, gamma, z);
      return outside_domain(member) ? kOutsideDomain : member - shift;
    };
    return conj;
  };
  return inst;
}

Method parse_method(const std::string& name) {
  if (name == "cs-spp") return Method::CsSpp;
  if (name == "pb-spp-1cut") return Method::PbSpp1Cut;
  if (name == "pb-spp-2cut") return Method::PbSpp2Cut;
  if (name == "pb-spp-multicut") return Method::PbSppMultiCut;
  if (name == "pdpb") return Method::Pdpb;
  if (name == "pds") return Method::Pds;
  if (name == "cg") return Method::Cg;
  throw ConfigError("unknown method '" + name + "'");
}

std::string method_name(Method m, int multi_cuts) {
  switch (m) {
    case Method::CsSpp:
      return "cs-spp";
    case Method::PbSpp1Cut:
      return "pb-spp-1cut";
    case Method::PbSpp2Cut:
      return "pb-spp-2cut";
    case Method::PbSppMultiCut:
      return multi_cuts > 0
                 ? "pb-spp-multicut(" + std::to_string(multi_cuts) + ")"
                 : "pb-spp-multicut";
    case Method::Pdpb:
      return "pdpb";
    case Method::Pds:
      return "pds";
    case Method::Cg:
      return "cg";
  }
  return "?";
}

RunConfig parse_run_config(std::istream& in, RunConfig base) {
  RunConfig cfg = base;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!line.empty() && is_space(line.back())) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && is_space(line[start])) ++start;
    line.erase(0, start);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key=value, got '" + line + "'");
    }
    auto strip = [&is_space](std::string text) {
      while (!text.empty() && is_space(text.back())) text.pop_back();
      std::size_t first = 0;
      while (first < text.size() && is_space(text[first])) ++first;
      return text.substr(first);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    try {
      if (key == "method") {
        cfg.method = parse_method(value);
      } else if (key == "cuts") {
        cfg.multi_cuts = std::stoi(value);
      } else if (key == "cg_rule") {
        cfg.cg_rule = value;
      } else if (key == "instance") {
        cfg.instance_path = value;
      } else if (key == "m") {
        cfg.m = std::stoi(value);
      } else if (key == "n") {
        cfg.n = std::stoi(value);
      } else if (key == "density") {
        cfg.density = std::stod(value);
      } else if (key == "gamma_x") {
        cfg.gamma_x = std::stod(value);
      } else if (key == "gamma_y") {
        cfg.gamma_y = std::stod(value);
      } else if (key == "seed") {
        cfg.seed = std::stoull(value);
      } else if (key == "eps_bar") {
        cfg.eps_bar = std::stod(value);
      } else if (key == "lambda") {
        cfg.lambda = std::stod(value);
      } else if (key == "lambda1") {
        cfg.lambda1 = std::stod(value);
      } else if (key == "cadence") {
        cfg.log_cadence = std::stol(value);
      } else if (key == "max_outer") {
        cfg.max_outer = std::stol(value);
      } else if (key == "improved") {
        cfg.improved_gap = value == "1" || value == "true";
      } else if (key == "out") {
        cfg.output_path = value;
      } else {
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": bad value for key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_run_config(in, base);
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kCsvHeader << "\n";
  char buf[256];
  for (const RunRecord& r : records) {
    std::snprintf(buf, sizeof(buf), "%s,%ld,%ld,%ld,%ld,%.6f,%.17g\n",
                  r.method.c_str(), r.outer_iter, r.total_inner_iters,
                  r.prox_evals, r.oracle_calls, r.elapsed_seconds, r.gap);
    out << buf;
  }
}

std::vector<RunRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::stringstream expect(kCsvHeader), got(line);
    std::string ecol, gcol;
    while (std::getline(expect, ecol, ',')) {
      if (!std::getline(got, gcol, ',') || gcol != ecol) {
        throw ConfigError("csv: missing or misplaced column '" + ecol + "'");
      }
    }
    if (std::getline(got, gcol, ',')) {
      throw ConfigError("csv: unexpected extra column '" + gcol + "'");
    }
  }
  std::vector<RunRecord> records;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ls(line);
    RunRecord r;
    std::string field;
    try {
      std::getline(ls, r.method, ',');
      std::getline(ls, field, ',');
      r.outer_iter = std::stol(field);
      std::getline(ls, field, ',');
      r.total_inner_iters = std::stol(field);
      std::getline(ls, field, ',');
      r.prox_evals = std::stol(field);
      std::getline(ls, field, ',');
      r.oracle_calls = std::stol(field);
      std::getline(ls, field, ',');
      r.elapsed_seconds = std::stod(field);
      if (!std::getline(ls, field, ',')) throw std::invalid_argument("gap");
      r.gap = std::stod(field);
    } catch (const std::exception&) {
      throw ConfigError("csv line " + std::to_string(lineno) +
                        ": malformed record");
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<RunRecord> read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open csv: " + path);
  return read_csv(in);
}

namespace {

// Same sort-and-threshold projection as project_simplex, but tuned for a long
// sequence of slowly drifting inputs: the descending order from the previous
// call seeds an insertion sort, and the prefix sums run over the identical
// descending value sequence, so the output matches the reference bit for bit.
class DriftingSimplexProjector {
 public:
  void project(const Vector& v, Vector& out) {
    const int n = static_cast<int>(v.size());
    if (static_cast<int>(order_.size()) != n) {
      order_.resize(n);
      std::iota(order_.begin(), order_.end(), 0);
      values_.resize(n);
    }
    for (int i = 0; i < n; ++i) values_[i] = v[order_[i]];
    for (int i = 1; i < n; ++i) {
      const double wi = values_[i];
      const int oi = order_[i];
      int j = i - 1;
      while (j >= 0 && values_[j] < wi) {
        values_[j + 1] = values_[j];
        order_[j + 1] = order_[j];
        --j;
      }
      values_[j + 1] = wi;
      order_[j + 1] = oi;
    }
    double cumsum = 0.0;
    double theta = 0.0;
    for (int k = 0; k < n; ++k) {
      cumsum += values_[k];
      const double cand = (cumsum - 1.0) / (k + 1);
      if (values_[k] - cand > 0.0) {
        theta = cand;
      } else {
        break;
      }
    }
    out = (v.array() - theta).max(0.0);
  }

 private:
  std::vector<int> order_;
  std::vector<double> values_;
};

// Allocation-free twin of linf_subgradient.
void linf_subgradient_into(const Vector& x, Vector& g) {
  const double norm = x.cwiseAbs().maxCoeff();
  g.setZero();
  if (norm == 0.0) return;
  const double threshold = norm * (1.0 - 1e-12);
  int active = 0;
  for (int j = 0; j < x.size(); ++j) {
    if (std::abs(x[j]) >= threshold) ++active;
  }
  const double w = 1.0 / active;
  for (int j = 0; j < x.size(); ++j) {
    if (std::abs(x[j]) >= threshold) g[j] = x[j] < 0.0 ? -w : w;
  }
}

}  // namespace

SaddleRunResult cs_spp_game_run(const GameInstance& game, double lambda,
                                const CsSppOptions& opts) {
  if (!(lambda > 0.0)) throw UsageError("cs_spp_game_run: lambda must be > 0");
  const int m = game.m(), n = game.n();
  SaddleRunResult r;
  Vector x = Vector::Constant(n, 1.0 / n);
  Vector y = Vector::Constant(m, 1.0 / m);
  Vector x_sum = Vector::Zero(n), y_sum = Vector::Zero(m);
  Vector aty(n), ax(m), gx(n), gy(m), vx(n), vy(m), dx(n), dy(m);
  DriftingSimplexProjector proj_x, proj_y;
  const std::vector<SparseMatrixCoo::Entry>& entries = game.A.entries;

  for (long k = 1; k <= opts.max_iters; ++k) {
    aty.setZero();
    ax.setZero();
    for (const auto& e : entries) {
      aty[e.col] += e.value * y[e.row];
      ax[e.row] += e.value * x[e.col];
    }
    // gx = A^T y + gamma_x d||x||_inf, gy = A x - gamma_y d||y||_inf,
    // mirroring make_saddle's oracles operation for operation.
    linf_subgradient_into(x, dx);
    linf_subgradient_into(y, dy);
    gx = aty + game.gamma_x * dx;
    gy = ax - game.gamma_y * dy;
    r.oracle_calls += 2;
    vx = x - lambda * gx;
    vy = y + lambda * gy;
    proj_x.project(vx, x);
    proj_y.project(vy, y);
    r.prox_evals += 2;
    x_sum += x;
    y_sum += y;
    r.outer_iters = k;
    r.total_inner_iters = k;
    if (opts.gap_cadence > 0 &&
        (k % opts.gap_cadence == 0 || k == opts.max_iters)) {
      r.x_bar = x_sum / static_cast<double>(k);
      r.y_bar = y_sum / static_cast<double>(k);
      const double gap =
          phi_eval(game, r.x_bar) - psi_eval(game, r.y_bar);
      const GapSample sample{k, gap, r.total_inner_iters, r.prox_evals,
                             r.oracle_calls};
      r.gap_trace.push_back(sample);
      if (opts.on_log) opts.on_log(sample);
      if (opts.eps_target > 0.0 && gap <= opts.eps_target) {
        r.reached_target = true;
        break;
      }
    }
  }
  if (r.outer_iters > 0) {
    r.x_bar = x_sum / static_cast<double>(r.outer_iters);
    r.y_bar = y_sum / static_cast<double>(r.outer_iters);
  } else {
    r.x_bar = x;
    r.y_bar = y;
  }
  return r;
}

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

GameInstance obtain_instance(const RunConfig& cfg) {
  if (!cfg.instance_path.empty()) return load_instance_file(cfg.instance_path);
  return generate_instance(cfg.m, cfg.n, cfg.density, cfg.gamma_x, cfg.gamma_y,
                           cfg.seed);
}

// Column problem of the game with the row player frozen at uniform: the
// benchmark CNCO instance used by the pdpb / pds / cg methods.
struct ColumnProblem {
  SubgradientOracle f;
  ConjugateOracle conj;
  Composite h;
  Vector x0;
};

ColumnProblem column_problem(const GameInstance& game) {
  ColumnProblem p;
  const Vector y0 = Vector::Constant(game.m(), 1.0 / game.m());
  const Vector c = game.A.multiply_transpose(y0);
  p.f = linf_piece(c, game.gamma_x);
  p.conj = linf_piece_conjugate(c, game.gamma_x);
  p.h = simplex_composite();
  p.x0 = Vector::Constant(game.n(), 1.0 / game.n());
  return p;
}

}  // namespace

RunOutcome run_experiment(const RunConfig& cfg) {
  if (cfg.log_cadence < 0) throw ConfigError("cadence must be >= 1");
  if (cfg.eps_bar <= 0.0) throw ConfigError("eps_bar must be > 0");
  const GameInstance game = obtain_instance(cfg);
  const std::string name = method_name(cfg.method, cfg.multi_cuts);

  RunOutcome outcome;
  Stopwatch clock;
  auto log = [&](const GapSample& s) {
    outcome.records.push_back({name, s.k, s.total_inner_iters, s.prox_evals,
                               s.oracle_calls, clock.seconds(), s.gap});
    outcome.final_gap = s.gap;
  };

  const long cadence = cfg.log_cadence > 0
                           ? cfg.log_cadence
                           : (cfg.method == Method::CsSpp ? 1000 : 10);

  switch (cfg.method) {
    case Method::CsSpp: {
      const double lambda = cfg.lambda > 0.0
                                ? cfg.lambda
                                : cfg.eps_bar / (32.0 * game.M * game.M);
      const Vector x0 = Vector::Constant(game.n(), 1.0 / game.n());
      const Vector y0 = Vector::Constant(game.m(), 1.0 / game.m());
      log({0, phi_eval(game, x0) - psi_eval(game, y0), 0, 0, 0});
      CsSppOptions opts;
      opts.max_iters = cfg.max_outer >= 0 ? cfg.max_outer : 20000000000L;
      opts.eps_target = cfg.eps_bar;
      opts.gap_cadence = cadence;
      opts.on_log = log;
      const SaddleRunResult res = cs_spp_game_run(game, lambda, opts);
      outcome.reached_target = res.reached_target;
      outcome.budget_exhausted = !res.reached_target;
      break;
    }
    case Method::PbSpp1Cut:
    case Method::PbSpp2Cut:
    case Method::PbSppMultiCut: {
      const SaddleInstance inst = make_saddle(game);
      const Vector x0 = Vector::Constant(game.n(), 1.0 / game.n());
      const Vector y0 = Vector::Constant(game.m(), 1.0 / game.m());
      log({0, saddle_gap(inst, x0, y0), 0, 0, 0});
      PbSppOptions opts;
      opts.eps_bar = cfg.eps_bar;
      opts.lambda1 = cfg.lambda1;
      opts.scheme = cfg.method == Method::PbSpp1Cut    ? Scheme::OneCut
                    : cfg.method == Method::PbSpp2Cut ? Scheme::TwoCuts
                                                      : Scheme::MultiCuts;
      opts.max_cuts = cfg.multi_cuts;
      opts.max_outer = cfg.max_outer >= 0 ? cfg.max_outer : 100000;
      opts.improved_gap = cfg.improved_gap;
      opts.gap_cadence = cadence;
      opts.on_log = log;
      const SaddleRunResult res = pb_spp_run(inst, x0, y0, opts);
      outcome.reached_target = res.reached_target;
      outcome.budget_exhausted = !res.reached_target;
      break;
    }
    case Method::Pdpb: {
      const ColumnProblem p = column_problem(game);
      const double mf = p.f.lipschitz_bound;
      double lambda = cfg.lambda;
      if (lambda <= 0.0) {
        // geometric midpoint of the admissible stepsize window, with the
        // simplex diameter standing in for the distance to the optimum
        const double d0 = std::sqrt(2.0);
        const double lo = std::sqrt(cfg.eps_bar * d0) / std::pow(mf, 1.5);
        const double hi = 2.0 * d0 * d0 / cfg.eps_bar;
        lambda = std::sqrt(lo * hi);
      }
      const Vector s0 = p.f.subgradient(p.x0);
      log({0,
           p.f.value(p.x0) + p.conj.value(s0) + p.h.support(-s0),
           0, 0, 1});
      PdcpConfig cycle;
      cycle.scheme = Scheme::OneCut;
      cycle.record_trace = false;
      PdpbOptions opts;
      opts.max_cycles = cfg.max_outer >= 0
                            ? static_cast<int>(cfg.max_outer)
                            : static_cast<int>(std::ceil(
                                  4.0 / (lambda * cfg.eps_bar))) +
                                  1;
      opts.gap_target = 10.0 * cfg.eps_bar;
      opts.keep_history = false;
      opts.on_log = [&](const GapSample& s) {
        if (s.k % cadence == 0 || s.k == 1) log(s);
      };
      const PdpbState st =
          pdpb_run(p.f, p.h, p.x0, lambda, cfg.eps_bar, cycle, opts, p.conj);
      if (!st.gap_history.empty() &&
          (st.cycles % cadence != 0 && st.cycles != 1)) {
        log({st.cycles, st.gap_history.back(), st.total_inner_iters,
             st.prox_evals, st.oracle_calls});
      }
      outcome.reached_target = st.target_reached;
      outcome.budget_exhausted = !st.target_reached;
      break;
    }
    case Method::Pds: {
      const ColumnProblem p = column_problem(game);
      const double mf = p.f.lipschitz_bound;
      const double lambda =
          cfg.lambda > 0.0 ? cfg.lambda : cfg.eps_bar / (16.0 * mf * mf);
      const Vector s0 = p.f.subgradient(p.x0);
      log({0,
           p.f.value(p.x0) + p.conj.value(s0) + p.h.support(-s0),
           0, 0, 1});
      const long iters =
          cfg.max_outer >= 0
              ? cfg.max_outer
              : static_cast<long>(std::ceil(512.0 * mf * mf /
                                            (cfg.eps_bar * cfg.eps_bar)));
      const PdsResult res =
          pds_run(p.f, p.h, p.x0, lambda, iters, p.conj, cadence, log);
      outcome.reached_target =
          !res.gap_trace.empty() && res.gap_trace.back().second <= cfg.eps_bar;
      outcome.budget_exhausted = !outcome.reached_target;
      break;
    }
    case Method::Cg: {
      const ColumnProblem p = column_problem(game);
      const double lambda = cfg.lambda > 0.0 ? cfg.lambda : 1.0;
      CgStepRule rule;
      if (cfg.cg_rule == "open-loop") {
        rule = CgStepRule::OpenLoop;
      } else if (cfg.cg_rule == "adaptive") {
        rule = CgStepRule::Adaptive;
      } else if (cfg.cg_rule == "line-search") {
        rule = CgStepRule::LineSearch;
      } else {
        throw ConfigError("unknown cg rule '" + cfg.cg_rule + "'");
      }
      const Vector s0 = p.f.subgradient(p.x0);
      log({0,
           p.f.value(p.x0) + p.conj.value(s0) + p.h.support(-s0),
           0, 0, 1});
      const long iters = cfg.max_outer >= 0 ? cfg.max_outer : 1000;
      double last_gap = kOutsideDomain;
      long j = 0;
      bool logged_last = false;
      CgObserver obs = [&](const CgIterate& it, long prox, long oracle) {
        ++j;
        const double wolfe =
            p.f.value(it.x) - it.x.dot(it.z) + p.conj.value(it.z);
        last_gap = wolfe;
        logged_last = j % cadence == 0 || j == iters || wolfe <= cfg.eps_bar;
        if (logged_last) log({j, wolfe, j, prox, oracle});
        return wolfe > cfg.eps_bar;
      };
      cg_run(p.f, p.h, p.x0, lambda, static_cast<int>(iters), rule, p.conj,
             obs);
      outcome.reached_target = last_gap <= cfg.eps_bar;
      outcome.budget_exhausted = !outcome.reached_target;
      break;
    }
  }

  if (!cfg.output_path.empty()) {
    std::ofstream out(cfg.output_path);
    if (!out) throw ConfigError("cannot open output: " + cfg.output_path);
    write_csv(out, outcome.records);
  }
  return outcome;
}

namespace {

struct PieceProblem {
  GameInstance game;
  SubgradientOracle f;
  ConjugateOracle conj;
  Composite h;
  Vector x0;
};

PieceProblem piece_problem(std::uint64_t seed, int dim) {
  PieceProblem p;
  p.game = generate_instance(dim, dim, 0.4, 0.05, 0.05, seed);
  const Vector y0 = Vector::Constant(dim, 1.0 / dim);
  const Vector c = p.game.A.multiply_transpose(y0);
  p.f = linf_piece(c, p.game.gamma_x);
  p.conj = linf_piece_conjugate(c, p.game.gamma_x);
  p.h = simplex_composite();
  p.x0 = Vector::Constant(dim, 1.0 / dim);
  return p;
}

double duality_residual(std::uint64_t seed, int dim, int iters) {
  const PieceProblem p = piece_problem(seed, dim);
  const double lambda = 0.25;
  std::vector<Vector> xs, ss;
  PdcpConfig cfg;
  cfg.scheme = Scheme::OneCut;
  cfg.epsilon = 1e-30;
  cfg.max_iters = iters;
  cfg.record_trace = false;
  pdcp_run(p.f, p.h, p.x0, lambda, cfg,
           [&](int, const Vector& x, const Vector&, const Vector& s, double,
               double) {
             xs.push_back(x);
             ss.push_back(s);
           });
  const CgTrace trace =
      cg_run(p.f, p.h, p.x0, lambda, iters, CgStepRule::OpenLoop);
  double res = 0.0;
  const std::size_t count = std::min(xs.size(), trace.iterates.size());
  for (std::size_t j = 0; j < count; ++j) {
    const CgIterate& it = trace.iterates[j];
    res = std::max(res, (ss[j] - it.z).lpNorm<Eigen::Infinity>());
    res = std::max(res, (xs[j] - it.x).lpNorm<Eigen::Infinity>());
    res = std::max(
        res, (p.f.subgradient(xs[j]) - it.zbar).lpNorm<Eigen::Infinity>());
  }
  return res;
}

double certificates_residual(std::uint64_t seed, int dim) {
  const PieceProblem p = piece_problem(seed, dim);
  const double lambda = 0.3;
  double res = 0.0;
  for (Scheme scheme : {Scheme::OneCut, Scheme::TwoCuts, Scheme::MultiCuts}) {
    PdcpConfig cfg;
    cfg.scheme = scheme;
    cfg.epsilon = 1e-8;
    cfg.max_iters = 200;
    cfg.record_trace = false;
    pdcp_run(p.f, p.h, p.x0, lambda, cfg,
             [&](int, const Vector&, const Vector&, const Vector& s, double t,
                 double m) {
               const double lhs =
                   gap_certificate_at(p.conj, p.h, p.x0, lambda, t + m, s);
               res = std::max(res, lhs - t);
               res = std::max(res, -t);
             });
  }
  const SaddleInstance inst = make_saddle(p.game);
  const Vector x0 = Vector::Constant(p.game.n(), 1.0 / p.game.n());
  const Vector y0 = Vector::Constant(p.game.m(), 1.0 / p.game.m());
  auto observe = [&](SaddleMethod method) {
    return [&, method](const SaddleStepData& step) {
      const IppfCertificate cert =
          ippf_certificate(method, inst, step, 20, seed, false);
      res = std::max(res, cert.proximity_lhs - cert.proximity_rhs);
      res = std::max(res, cert.inclusion_residual);
    };
  };
  CsSppOptions cs;
  cs.max_iters = 100;
  cs.gap_cadence = 0;
  cs_spp_run(inst, x0, y0, 0.05, cs, observe(SaddleMethod::CsSpp));
  PbSppOptions pb;
  pb.eps_bar = 1e-2;
  pb.scheme = Scheme::TwoCuts;
  pb.max_outer = 10;
  pb.gap_cadence = 1;
  pb_spp_run(inst, x0, y0, pb, observe(SaddleMethod::PbSpp));
  return res;
}

double rates_residual(std::uint64_t seed, int dim) {
  const PieceProblem p = piece_problem(seed, dim);
  const double lambda = 0.2;
  const double mf = p.f.lipschitz_bound;
  double res = 0.0;
  for (Scheme scheme : {Scheme::OneCut, Scheme::TwoCuts, Scheme::MultiCuts}) {
    PdcpConfig cfg;
    cfg.scheme = scheme;
    cfg.epsilon = 1e-7;
    cfg.max_iters = 400;
    cfg.track_hat = scheme != Scheme::OneCut;
    const CycleResult run = pdcp_run(p.f, p.h, p.x0, lambda, cfg);
    const double t1 = run.first_t;
    for (std::size_t i = 0; i < run.trace.size(); ++i) {
      const int j = static_cast<int>(i) + 1;
      const IterationRecord& rec = run.trace[i];
      const double bound = 2.0 * t1 / (static_cast<double>(j) * (j + 1)) +
                           16.0 * lambda * mf * mf / (j + 1);
      res = std::max(res, rec.t - bound);
      if (scheme != Scheme::OneCut && j >= 2) {
        res = std::max(res, rec.hat_t -
                                16.0 * lambda * mf * mf / (j + 1) - 1e-8);
        res = std::max(res, rec.step_norm - 2.0 * lambda * mf - 1e-8);
      }
    }
  }
  const SaddleInstance inst = make_saddle(p.game);
  const Vector x0 = Vector::Constant(p.game.n(), 1.0 / p.game.n());
  const Vector y0 = Vector::Constant(p.game.m(), 1.0 / p.game.m());
  PbSppOptions pb;
  pb.eps_bar = 1e-3;
  pb.scheme = Scheme::TwoCuts;
  pb.max_outer = 50;
  pb.gap_cadence = 1;
  const double lambda1 = inst.D / (4.0 * inst.M);
  const SaddleRunResult run = pb_spp_run(inst, x0, y0, pb);
  for (const GapSample& s : run.gap_trace) {
    const double rk = std::sqrt(static_cast<double>(s.k));
    const double bound = pb.eps_bar / 2.0 +
                         8.0 * lambda1 * inst.M * inst.M / rk +
                         inst.D * inst.D / (2.0 * lambda1 * rk) + 1e-6;
    res = std::max(res, s.gap - bound);
  }
  return res;
}

double exact_solver_residual(std::uint64_t seed) {
  Rng rng(seed);
  double res = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = rng.uniform_int(2, 6);
    const Vector z = rng.normal_vector(n);
    const double gamma = rep % 5 == 0 ? 0.0 : rng.uniform(0.0, 2.0);
    const FzSolution sol = exact_fz(z, gamma);
    // brute force over the candidate support sizes
    std::vector<double> sorted(z.data(), z.data() + n);
    std::sort(sorted.begin(), sorted.end());
    double brute = kOutsideDomain;
    double prefix = 0.0;
    for (int j = 1; j <= n; ++j) {
      prefix += sorted[j - 1];
      brute = std::min(brute, (gamma + prefix) / j);
    }
    res = std::max(res, std::abs(sol.value - brute));
    for (int t = 0; t < 200; ++t) {
      const Vector u = rng.simplex_point(n);
      res = std::max(res,
                     sol.value - (z.dot(u) + gamma * u.cwiseAbs().maxCoeff()));
    }
  }
  return res;
}

}  // namespace

std::vector<CheckResult> check_suite(const std::string& suite,
                                     const std::vector<std::uint64_t>& seeds,
                                     const std::vector<int>& dims) {
  std::vector<CheckResult> out;
  auto push = [&](std::uint64_t seed, int dim, double residual, double tol) {
    out.push_back({suite, seed, dim, residual, tol, residual <= tol});
  };
  if (suite == "duality") {
    for (auto seed : seeds) {
      for (int dim : dims) push(seed, dim, duality_residual(seed, dim, 100), 1e-10);
    }
  } else if (suite == "certificates") {
    for (auto seed : seeds) {
      for (int dim : dims) push(seed, dim, certificates_residual(seed, dim), 1e-8);
    }
  } else if (suite == "rates") {
    for (auto seed : seeds) {
      for (int dim : dims) push(seed, dim, rates_residual(seed, dim), 1e-9);
    }
  } else if (suite == "exact-solver") {
    for (auto seed : seeds) push(seed, 0, exact_solver_residual(seed), 1e-10);
  } else {
    throw ConfigError("unknown check suite '" + suite + "'");
  }
  return out;
}

bool all_pass(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.pass; });
}

void print_check_report(std::ostream& out,
                        const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "check=%s seed=%llu dim=%d residual=%.3e tol=%.1e status=%s\n",
                  r.check.c_str(), static_cast<unsigned long long>(r.seed),
                  r.dim, r.residual, r.tolerance, r.pass ? "pass" : "FAIL");
    out << buf;
  }
  if (results.empty()) out << "no checks requested: vacuous pass\n";
}

namespace {

void write_series(const std::string& path, const char* x_name,
                  const std::vector<std::vector<RunRecord>>& runs,
                  double (*x_of)(const RunRecord&)) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open report output: " + path);
  out << "method," << x_name << ",gap\n";
  char buf[192];
  for (const auto& run : runs) {
    for (const RunRecord& r : run) {
      std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g\n", r.method.c_str(),
                    x_of(r), std::max(r.gap, 1e-16));
      out << buf;
    }
  }
}

}  // namespace

std::vector<ReportSummary> write_report(const std::vector<std::string>& csvs,
                                        const std::string& out_prefix,
                                        std::ostream& summary_out) {
  std::vector<std::vector<RunRecord>> runs;
  std::vector<ReportSummary> summaries;
  for (const std::string& path : csvs) {
    std::vector<RunRecord> records = read_csv_file(path);
    if (records.empty()) continue;
    const RunRecord& last = records.back();
    summaries.push_back({last.method, last.outer_iter, last.total_inner_iters,
                         last.prox_evals, last.elapsed_seconds, last.gap});
    runs.push_back(std::move(records));
  }
  write_series(out_prefix + "_gap_vs_time.csv", "elapsed_seconds", runs,
               [](const RunRecord& r) { return r.elapsed_seconds; });
  write_series(out_prefix + "_gap_vs_prox.csv", "prox_evals", runs,
               [](const RunRecord& r) { return static_cast<double>(r.prox_evals); });
  write_series(out_prefix + "_gap_vs_inner.csv", "total_inner_iters", runs,
               [](const RunRecord& r) {
                 return static_cast<double>(r.total_inner_iters);
               });
  write_series(out_prefix + "_gap_vs_outer.csv", "outer_iter", runs,
               [](const RunRecord& r) { return static_cast<double>(r.outer_iter); });

  summary_out << std::left << std::setw(22) << "method" << std::right
              << std::setw(12) << "outer" << std::setw(14) << "inner"
              << std::setw(14) << "prox" << std::setw(12) << "seconds"
              << std::setw(14) << "gap" << "\n";
  for (const ReportSummary& s : summaries) {
    summary_out << std::left << std::setw(22) << s.method << std::right
                << std::setw(12) << s.outer_iter << std::setw(14)
                << s.total_inner_iters << std::setw(14) << s.prox_evals
                << std::setw(12) << std::fixed << std::setprecision(2)
                << s.elapsed_seconds << std::setw(14) << std::scientific
                << std::setprecision(3) << s.final_gap << "\n";
  }
  summary_out.unsetf(std::ios::floatfield);
  return summaries;
}

}  // namespace pdbundle
