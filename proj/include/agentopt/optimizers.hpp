#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "agentopt/benchfns.hpp"
#include "agentopt/rng.hpp"

namespace agentopt::optimizers {

using benchfns::BenchmarkFunction;

/// One function evaluation of an optimization run.
struct StepRecord {
  int iteration = 0;
  std::vector<double> x;
  double f = 0.0;
  std::string explanation;  // empty for baselines
  bool fallback = false;    // point came from the loop's fallback policy
};

/// A full run. `records` holds exactly one entry per function evaluation,
/// in evaluation order; the budget caps its length.
struct RunHistory {
  std::vector<StepRecord> records;
  bool failed = false;
  std::string diagnostic;
  int gradient_calls = 0;

  const StepRecord& best() const;          // lowest f, earliest on ties
  std::vector<double> best_so_far() const; // non-increasing curve over records
};

enum class OptKind { Gd, Adam, NelderMead, RandomSearch };

struct OptimizerConfig {
  OptKind kind = OptKind::Gd;
  int steps = 100;  // evaluation budget
  std::map<std::string, double> hyperparams;

  double hyper(const std::string& name, double fallback) const;
  static OptimizerConfig defaults(OptKind kind, int steps);
};

// The four baselines. Each consumes exactly cfg.steps function evaluations
// (fewer only when a run aborts, in which case the history is flagged
// failed). Gradient calls are tallied separately in RunHistory.
RunHistory run_gd(const BenchmarkFunction& fn, std::vector<double> x0,
                  const OptimizerConfig& cfg);
RunHistory run_adam(const BenchmarkFunction& fn, std::vector<double> x0,
                    const OptimizerConfig& cfg);
RunHistory run_nelder_mead(const BenchmarkFunction& fn, std::vector<double> x0,
                           const OptimizerConfig& cfg);
RunHistory run_random_search(const BenchmarkFunction& fn, std::vector<double> x0,
                             const OptimizerConfig& cfg, Rng& rng);

/// A named column entry for the comparison matrix; the callable must be
/// deterministic in (fn, x0, seed).
struct MatrixOptimizer {
  std::string name;
  std::function<RunHistory(const BenchmarkFunction&, const std::vector<double>&,
                           std::uint64_t seed)>
      run;
};

/// The four baselines under their default hyperparameters.
std::vector<MatrixOptimizer> baseline_matrix_optimizers(int steps);

struct StatsCell {
  double mean = 0.0;
  double stddev = 0.0;  // population std; 0 for a single trial
  int failures = 0;
  int trials = 0;
};

/// Mean/std of best-found value per (optimizer, function) plus an initial
/// row, in the layout of the method-comparison table.
struct StatsTable {
  std::vector<std::string> function_names;   // columns
  std::vector<std::string> optimizer_names;  // rows; [0] is "Init f(x)"
  std::vector<std::vector<StatsCell>> cells;  // [row][col]

  std::string to_csv() const;   // function,optimizer,mean,std,failures
  std::string to_text() const;  // aligned table, one row per optimizer
};

/// Called once per completed run, in deterministic (function, optimizer,
/// trial) order, after all workers have joined.
using HistorySink = std::function<void(const std::string& function_name,
                                       const std::string& optimizer_name, int trial,
                                       const RunHistory&)>;

/// Runs every optimizer on every function with `trials` repetitions.
/// Trial t of every optimizer shares the same start point x0[t]; all seeds
/// derive from `seed`, so the result is a pure function of the arguments.
StatsTable run_benchmark_matrix(const std::vector<BenchmarkFunction>& functions,
                                const std::vector<MatrixOptimizer>& optimizers,
                                int trials, int steps, std::uint64_t seed,
                                int jobs = 1, const HistorySink& sink = {});

}  // namespace agentopt::optimizers
