#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "agentopt/sas.hpp"
#include "agentopt/trace.hpp"

namespace agentopt::retrieval {

using sas::AgentLoopOptions;
using trace::ExecutionTrace;
using trace::TraceCache;

/// A natural-language retrieval instruction together with its machine
/// scoring rule (lower is better) used as ground truth.
struct RetrievalObjective {
  std::string id;    // "O1" .. "O10"
  std::string text;  // the instruction given to the agent
  std::function<double(const ExecutionTrace&)> score;
};

/// The ten standard objectives. Scoring rules: O1 max landing x; O2 min
/// landing x; O3 min landing y; O4 closest to the middle of the opponent's
/// half; O5 closest to the back-left corner; O6 closest to the back edge;
/// O7/O8 closest to (+-0.2, 0.8); O9 max peak height; O10 min peak height.
/// Off-table landings rank last for every objective.
std::vector<RetrievalObjective> standard_objectives(
    const sim::EnvConfig& env = sim::EnvConfig::sim_default());

/// Ids of all cached traces sorted best-first under the objective; ties
/// break toward the lower id.
std::vector<int> oracle_rank(const RetrievalObjective& objective,
                             const TraceCache& cache);

struct TopKResult {
  std::string objective_id;
  int trials = 0;
  double top1 = 0.0, top5 = 0.0, top10 = 0.0;
  int parse_failures = 0;  // trials whose reply never parsed (counted as misses)
};

/// Builds one agent per (objective, trial).
using AgentFactory = std::function<std::unique_ptr<agent::AgentInterface>(
    const RetrievalObjective& objective, int trial)>;

/// Raw per-trial outcome, delivered in deterministic (objective, trial)
/// order once an objective's trials have all finished.
using TrialSink = std::function<void(const std::string& objective_id, int trial,
                                     const std::vector<int>& best_ids,
                                     bool parse_failed)>;

/// For each objective: run the retrieval round trip `trials` times and score
/// a top-k hit whenever the oracle's best id appears among the agent's first
/// k answers. The prompt is built once per objective (the cache is fixed),
/// so every trial sees identical bytes.
std::vector<TopKResult> evaluate_retrieval(const AgentFactory& factory,
                                           const std::vector<RetrievalObjective>& objectives,
                                           const TraceCache& cache, int trials,
                                           const AgentLoopOptions& opts = {},
                                           int jobs = 1, const TrialSink& sink = {});

std::string topk_to_csv(const std::vector<TopKResult>& results);

}  // namespace agentopt::retrieval
