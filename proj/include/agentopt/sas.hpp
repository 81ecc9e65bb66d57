#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agentopt/agent.hpp"
#include "agentopt/numopt_protocol.hpp"
#include "agentopt/sim_env.hpp"
#include "agentopt/trace.hpp"

namespace agentopt::sas {

using agent::AgentInterface;
using protocol::AgentLoopOptions;
using sim::EnvConfig;
using sim::GoalSpec;
using trace::ExecutionTrace;
using trace::ParamBounds;
using trace::ParamVector;
using trace::TraceCache;

enum class Mode { RetrieveOnly, Synthesize };

struct SasPromptConfig {
  std::string domain_description;           // empty -> default_domain_description
  std::string objective_text;
  Mode mode = Mode::RetrieveOnly;
  std::vector<std::string> summary_columns;  // empty -> agent picks its own
  int max_examples = 100;                    // most recent kept beyond this
  int render_precision = 4;
  ParamBounds bounds{0.5, 1.5};
};

std::string default_domain_description(const EnvConfig& cfg);

/// Assembles the retrieval / self-improvement prompt: domain description,
/// user objective, the step-by-step instructions (summarize into a table,
/// pick the best examples, and in Synthesize mode analyze each parameter and
/// propose a new set), the required reply markers, then every cached trace.
/// Pure; pinned by a golden-file test.
std::string build_sas_prompt(const SasPromptConfig& cfg, const TraceCache& cache);

struct SasResponse {
  // (example id, column -> cell) rows of the agent's summary table
  std::vector<std::pair<int, std::map<std::string, std::string>>> summary_rows;
  std::vector<int> best_ids;  // ordered, deduplicated, at most 10
  std::string analysis;
  std::optional<ParamVector> proposal;  // Synthesize mode only
  bool proposal_clamped = false;
  std::string justification;
  std::vector<std::string> warnings;
};

/// Parses the mandated reply grammar: a fenced summary table, a "BEST:" id
/// list, an "ANALYSIS:" section and, in Synthesize mode, a "PARAMS:" line
/// plus a "JUSTIFICATION:" section. Unknown BEST ids are dropped with a
/// warning; out-of-bounds proposals are clamped and flagged. A missing BEST
/// line (RetrieveOnly) or PARAMS line (Synthesize) raises ParseError.
SasResponse parse_sas_response(const std::string& text, Mode mode,
                               const std::vector<int>& cache_ids,
                               const ParamBounds& bounds);

/// One round trip of the retrieval prompt against a prebuilt prompt string;
/// retries with a format reminder per the loop options.
SasResponse exchange_sas(AgentInterface& agent, const std::string& prompt, Mode mode,
                         const std::vector<int>& cache_ids, const ParamBounds& bounds,
                         const AgentLoopOptions& opts, int* parse_failures = nullptr);

/// RetrieveOnly round trip: build prompt, query, parse.
SasResponse retrieve(AgentInterface& agent, const std::string& objective_text,
                     const TraceCache& cache, const AgentLoopOptions& opts = {},
                     const SasPromptConfig* base = nullptr);

struct ImprovementStep {
  int iteration = 0;  // 1-based
  ParamVector proposal;
  bool clamped = false;
  bool fallback = false;
  trace::LandingRecord landing;
  double distance = 0.0;
  std::string analysis;
  std::string justification;
  int trace_id = 0;
};

struct ImprovementReport {
  double initial_mean_distance = 0.0;
  std::vector<ImprovementStep> steps;
  bool failed = false;
  std::string diagnostic;

  double final_best_distance() const;
  std::vector<double> best_so_far() const;  // non-increasing distance curve
  std::string to_json() const;
  std::string to_csv() const;  // iteration,distance,landing_x,landing_y,...
};

/// The self-improvement loop: build a Synthesize prompt over the cache, ask
/// the agent for parameters, roll them out, append the new trace and score
/// it against the goal; repeat. The cache only ever grows. Transport failure
/// aborts with a partial report flagged failed.
ImprovementReport self_improve(AgentInterface& agent, const EnvConfig& env,
                               const GoalSpec& goal, const std::string& objective_text,
                               TraceCache& cache, int iterations,
                               const AgentLoopOptions& opts = {},
                               const SasPromptConfig* base = nullptr,
                               std::uint64_t rollout_seed = 0);

}  // namespace agentopt::sas
