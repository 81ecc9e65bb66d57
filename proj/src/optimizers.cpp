#include "agentopt/optimizers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "agentopt/errors.hpp"
#include "agentopt/numfmt.hpp"

namespace agentopt::optimizers {

namespace bf = benchfns;

const StepRecord& RunHistory::best() const {
  if (records.empty()) throw ArgumentError("best() on empty history");
  const StepRecord* b = &records.front();
  for (const auto& r : records)
    if (r.f < b->f) b = &r;
  return *b;
}

std::vector<double> RunHistory::best_so_far() const {
  std::vector<double> out;
  out.reserve(records.size());
  double b = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    b = std::min(b, r.f);
    out.push_back(b);
  }
  return out;
}

double OptimizerConfig::hyper(const std::string& name, double fallback) const {
  const auto it = hyperparams.find(name);
  return it == hyperparams.end() ? fallback : it->second;
}

OptimizerConfig OptimizerConfig::defaults(OptKind kind, int steps) {
  OptimizerConfig cfg;
  cfg.kind = kind;
  cfg.steps = steps;
  switch (kind) {
    case OptKind::Gd:
      cfg.hyperparams = {{"lr", 0.05}};
      break;
    case OptKind::Adam:
      cfg.hyperparams = {{"lr", 0.3}, {"beta1", 0.9}, {"beta2", 0.999}, {"eps", 1e-8}};
      break;
    case OptKind::NelderMead:
      cfg.hyperparams = {{"alpha", 1.0}, {"gamma", 2.0},      {"rho", 0.5},
                         {"sigma", 0.5}, {"simplex_offset", 0.5}};
      break;
    case OptKind::RandomSearch:
      break;
  }
  return cfg;
}

namespace {

void check_run_args(const bf::BenchmarkFunction& fn, const std::vector<double>& x0,
                    const OptimizerConfig& cfg) {
  if (static_cast<int>(x0.size()) != fn.dims)
    throw ArgumentError("x0 dimension mismatch");
  if (cfg.steps < 1) throw ArgumentError("steps must be >= 1");
  for (const auto& [name, v] : cfg.hyperparams)
    if (!std::isfinite(v)) throw ArgumentError("non-finite hyperparam " + name);
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void record(RunHistory& h, std::vector<double> x, double f) {
  h.records.push_back({static_cast<int>(h.records.size()), std::move(x), f, "", false});
}

}  // namespace

RunHistory run_gd(const bf::BenchmarkFunction& fn, std::vector<double> x0,
                  const OptimizerConfig& cfg) {
  check_run_args(fn, x0, cfg);
  const double lr = cfg.hyper("lr", 0.05);
  if (lr < 0.0) throw ArgumentError("lr must be >= 0");

  RunHistory h;
  std::vector<double> x = std::move(x0);
  record(h, x, bf::evaluate(fn, x));
  while (static_cast<int>(h.records.size()) < cfg.steps) {
    const auto g = bf::gradient(fn, x);
    ++h.gradient_calls;
    if (!all_finite(g)) {
      h.failed = true;
      h.diagnostic = "non-finite gradient at iteration " +
                     std::to_string(h.records.size());
      return h;
    }
    for (int i = 0; i < fn.dims; ++i) x[i] -= lr * g[i];
    record(h, x, bf::evaluate(fn, x));
  }
  return h;
}

RunHistory run_adam(const bf::BenchmarkFunction& fn, std::vector<double> x0,
                    const OptimizerConfig& cfg) {
  check_run_args(fn, x0, cfg);
  const double lr = cfg.hyper("lr", 0.3);
  const double beta1 = cfg.hyper("beta1", 0.9);
  const double beta2 = cfg.hyper("beta2", 0.999);
  const double eps = cfg.hyper("eps", 1e-8);
  if (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0)
    throw ArgumentError("betas must lie in [0, 1)");
  if (eps <= 0.0) throw ArgumentError("eps must be > 0");

  RunHistory h;
  std::vector<double> x = std::move(x0);
  std::vector<double> m(fn.dims, 0.0), v(fn.dims, 0.0);
  record(h, x, bf::evaluate(fn, x));
  int t = 0;
  while (static_cast<int>(h.records.size()) < cfg.steps) {
    const auto g = bf::gradient(fn, x);
    ++h.gradient_calls;
    if (!all_finite(g)) {
      h.failed = true;
      h.diagnostic = "non-finite gradient at iteration " +
                     std::to_string(h.records.size());
      return h;
    }
    ++t;
    for (int i = 0; i < fn.dims; ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
      v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
      const double mhat = m[i] / (1.0 - std::pow(beta1, t));
      const double vhat = v[i] / (1.0 - std::pow(beta2, t));
      x[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
    record(h, x, bf::evaluate(fn, x));
  }
  return h;
}

namespace {

// |det| of the n x n simplex edge matrix via Gaussian elimination with
// partial pivoting; the simplex volume is this over n!.
double simplex_edge_det(const std::vector<std::vector<double>>& simplex) {
  const int n = static_cast<int>(simplex.size()) - 1;
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = simplex[i + 1][j] - simplex[0][j];
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    if (std::fabs(a[piv][c]) == 0.0) return 0.0;
    if (piv != c) std::swap(a[piv], a[c]);
    det *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      const double factor = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= factor * a[c][k];
    }
  }
  return std::fabs(det);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

RunHistory run_nelder_mead(const bf::BenchmarkFunction& fn, std::vector<double> x0,
                           const OptimizerConfig& cfg) {
  check_run_args(fn, x0, cfg);
  const double alpha = cfg.hyper("alpha", 1.0);
  const double gamma = cfg.hyper("gamma", 2.0);
  const double rho = cfg.hyper("rho", 0.5);
  const double sigma = cfg.hyper("sigma", 0.5);
  const double offset = cfg.hyper("simplex_offset", 0.5);
  const int n = fn.dims;

  RunHistory h;
  const auto budget_left = [&] { return static_cast<int>(h.records.size()) < cfg.steps; };
  const auto eval = [&](const std::vector<double>& x) {
    const double f = bf::evaluate(fn, x);
    record(h, x, f);
    return f;
  };

  std::vector<std::vector<double>> simplex;
  std::vector<double> fs;
  const auto init_simplex = [&](const std::vector<double>& center) {
    simplex.assign(1, center);
    for (int i = 0; i < n; ++i) {
      auto p = center;
      p[i] += offset;
      simplex.push_back(std::move(p));
    }
    fs.clear();
    for (const auto& p : simplex) {
      if (!budget_left()) return false;
      fs.push_back(eval(p));
    }
    return true;
  };
  if (!init_simplex(x0)) return h;

  while (budget_left()) {
    // order best..worst
    std::vector<int> idx(n + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    {
      std::vector<std::vector<double>> s2(n + 1);
      std::vector<double> f2(n + 1);
      for (int i = 0; i <= n; ++i) {
        s2[i] = simplex[idx[i]];
        f2[i] = fs[idx[i]];
      }
      simplex.swap(s2);
      fs.swap(f2);
    }

    if (simplex_edge_det(simplex) / factorial(n) < 1e-14) {
      h.diagnostic += h.diagnostic.empty() ? "" : "; ";
      h.diagnostic += "degenerate simplex reinitialized at evaluation " +
                      std::to_string(h.records.size());
      const auto best_vertex = simplex[0];
      if (!init_simplex(best_vertex)) return h;
      continue;
    }

    std::vector<double> centroid(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;

    const auto& worst = simplex[n];
    std::vector<double> xr(n);
    for (int j = 0; j < n; ++j) xr[j] = centroid[j] + alpha * (centroid[j] - worst[j]);
    if (!budget_left()) break;
    const double fr = eval(xr);

    if (fr < fs[0]) {
      std::vector<double> xe(n);
      for (int j = 0; j < n; ++j) xe[j] = centroid[j] + gamma * (xr[j] - centroid[j]);
      if (!budget_left()) break;
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = std::move(xe);
        fs[n] = fe;
      } else {
        simplex[n] = std::move(xr);
        fs[n] = fr;
      }
      continue;
    }
    if (fr < fs[n - 1]) {
      simplex[n] = std::move(xr);
      fs[n] = fr;
      continue;
    }
    // contraction, outside if the reflection improved on the worst vertex
    std::vector<double> xc(n);
    const auto& toward = fr < fs[n] ? xr : simplex[n];
    for (int j = 0; j < n; ++j) xc[j] = centroid[j] + rho * (toward[j] - centroid[j]);
    if (!budget_left()) break;
    const double fc = eval(xc);
    if (fc < std::min(fr, fs[n])) {
      simplex[n] = std::move(xc);
      fs[n] = fc;
      continue;
    }
    // shrink toward best
    for (int i = 1; i <= n; ++i) {
      for (int j = 0; j < n; ++j)
        simplex[i][j] = simplex[0][j] + sigma * (simplex[i][j] - simplex[0][j]);
      if (!budget_left()) return h;
      fs[i] = eval(simplex[i]);
    }
  }
  return h;
}

RunHistory run_random_search(const bf::BenchmarkFunction& fn, std::vector<double> x0,
                             const OptimizerConfig& cfg, Rng& rng) {
  check_run_args(fn, x0, cfg);
  RunHistory h;
  const double f0 = bf::evaluate(fn, x0);
  record(h, std::move(x0), f0);
  while (static_cast<int>(h.records.size()) < cfg.steps) {
    std::vector<double> x(fn.dims);
    for (double& xi : x) xi = rng.uniform(fn.domain_lo, fn.domain_hi);
    const double f = bf::evaluate(fn, x);
    record(h, std::move(x), f);
  }
  return h;
}

std::vector<MatrixOptimizer> baseline_matrix_optimizers(int steps) {
  std::vector<MatrixOptimizer> out;
  out.push_back({"GD", [steps](const bf::BenchmarkFunction& fn,
                               const std::vector<double>& x0, std::uint64_t) {
                   return run_gd(fn, x0, OptimizerConfig::defaults(OptKind::Gd, steps));
                 }});
  out.push_back({"Adam", [steps](const bf::BenchmarkFunction& fn,
                                 const std::vector<double>& x0, std::uint64_t) {
                   return run_adam(fn, x0,
                                   OptimizerConfig::defaults(OptKind::Adam, steps));
                 }});
  out.push_back({"Nelder-Mead", [steps](const bf::BenchmarkFunction& fn,
                                        const std::vector<double>& x0, std::uint64_t) {
                   return run_nelder_mead(
                       fn, x0, OptimizerConfig::defaults(OptKind::NelderMead, steps));
                 }});
  out.push_back({"Random-Search",
                 [steps](const bf::BenchmarkFunction& fn, const std::vector<double>& x0,
                         std::uint64_t seed) {
                   Rng rng(seed);
                   return run_random_search(
                       fn, x0, OptimizerConfig::defaults(OptKind::RandomSearch, steps),
                       rng);
                 }});
  return out;
}

namespace {

void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(jobs, n);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

StatsTable run_benchmark_matrix(const std::vector<bf::BenchmarkFunction>& functions,
                                const std::vector<MatrixOptimizer>& optimizers,
                                int trials, int steps, std::uint64_t seed, int jobs,
                                const HistorySink& sink) {
  if (trials < 1) throw ArgumentError("trials must be >= 1");
  if (steps < 1) throw ArgumentError("steps must be >= 1");
  if (functions.empty() || optimizers.empty())
    throw ArgumentError("empty function or optimizer list");

  const int nf = static_cast<int>(functions.size());
  const int no = static_cast<int>(optimizers.size());

  // shared start points per (function, trial)
  std::vector<std::vector<std::vector<double>>> x0(nf);
  for (int fi = 0; fi < nf; ++fi) {
    x0[fi].resize(trials);
    for (int t = 0; t < trials; ++t) {
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(fi),
                                 static_cast<std::uint64_t>(t), 0xA001}));
      x0[fi][t] = bf::sample_initial(functions[fi], rng);
    }
  }

  std::vector<RunHistory> runs(static_cast<size_t>(nf) * no * trials);
  const auto slot = [&](int fi, int oi, int t) -> RunHistory& {
    return runs[(static_cast<size_t>(fi) * no + oi) * trials + t];
  };
  parallel_for(nf * no * trials, jobs, [&](int task) {
    const int t = task % trials;
    const int oi = (task / trials) % no;
    const int fi = task / (trials * no);
    const auto run_seed = derive_seed(seed, {static_cast<std::uint64_t>(fi),
                                             static_cast<std::uint64_t>(oi),
                                             static_cast<std::uint64_t>(t), 0xB002});
    try {
      slot(fi, oi, t) = optimizers[oi].run(functions[fi], x0[fi][t], run_seed);
    } catch (const std::exception& e) {
      // a crashed run counts as a failure, it must not take the matrix down
      RunHistory h;
      h.failed = true;
      h.diagnostic = e.what();
      slot(fi, oi, t) = std::move(h);
    }
  });

  StatsTable table;
  for (const auto& fn : functions) table.function_names.push_back(fn.name());
  table.optimizer_names.push_back("Init f(x)");
  for (const auto& o : optimizers) table.optimizer_names.push_back(o.name);
  table.cells.assign(table.optimizer_names.size(),
                     std::vector<StatsCell>(table.function_names.size()));

  const auto stats_of = [](const std::vector<double>& vals) {
    StatsCell c;
    c.trials = static_cast<int>(vals.size());
    if (vals.empty()) return c;
    c.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
    double sq = 0.0;
    for (double v : vals) sq += (v - c.mean) * (v - c.mean);
    c.stddev = std::sqrt(sq / vals.size());
    return c;
  };

  for (int fi = 0; fi < nf; ++fi) {
    std::vector<double> init_vals(trials);
    for (int t = 0; t < trials; ++t)
      init_vals[t] = bf::evaluate(functions[fi], x0[fi][t]);
    table.cells[0][fi] = stats_of(init_vals);

    for (int oi = 0; oi < no; ++oi) {
      std::vector<double> best_vals;
      int failures = 0;
      for (int t = 0; t < trials; ++t) {
        const RunHistory& h = slot(fi, oi, t);
        if (h.failed || h.records.empty()) {
          ++failures;
          continue;
        }
        best_vals.push_back(h.best().f);
      }
      auto cell = stats_of(best_vals);
      cell.failures = failures;
      table.cells[oi + 1][fi] = cell;
    }
  }

  if (sink)
    for (int fi = 0; fi < nf; ++fi)
      for (int oi = 0; oi < no; ++oi)
        for (int t = 0; t < trials; ++t)
          sink(functions[fi].name(), optimizers[oi].name, t, slot(fi, oi, t));

  return table;
}

std::string StatsTable::to_csv() const {
  std::string out = "function,optimizer,mean,std,failures\n";
  for (size_t r = 0; r < optimizer_names.size(); ++r)
    for (size_t c = 0; c < function_names.size(); ++c) {
      const auto& cell = cells[r][c];
      out += function_names[c] + "," + optimizer_names[r] + "," +
             format_fixed(cell.mean, 6) + "," + format_fixed(cell.stddev, 6) + "," +
             std::to_string(cell.failures) + "\n";
    }
  return out;
}

std::string StatsTable::to_text() const {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header = {"Alg."};
  for (const auto& f : function_names) header.push_back(f);
  grid.push_back(header);
  for (size_t r = 0; r < optimizer_names.size(); ++r) {
    std::vector<std::string> row = {optimizer_names[r]};
    for (size_t c = 0; c < function_names.size(); ++c) {
      const auto& cell = cells[r][c];
      std::string s = format_fixed(cell.mean, 2) + "+-" + format_fixed(cell.stddev, 2);
      if (cell.failures > 0) s += " (" + std::to_string(cell.failures) + " failed)";
      row.push_back(std::move(s));
    }
    grid.push_back(std::move(row));
  }
  std::vector<size_t> widths(grid[0].size(), 0);
  for (const auto& row : grid)
    for (size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  std::string out;
  for (const auto& row : grid) {
    for (size_t c = 0; c < row.size(); ++c) {
      out += row[c];
      if (c + 1 < row.size()) out += std::string(widths[c] - row[c].size() + 2, ' ');
    }
    out += "\n";
  }
  return out;
}

}  // namespace agentopt::optimizers
