#pragma once

#include <chrono>
#include <span>
#include <string>
#include <vector>

#include "agentopt/agent.hpp"
#include "agentopt/benchfns.hpp"
#include "agentopt/optimizers.hpp"

namespace agentopt::protocol {

using agent::AgentInterface;
using agent::AgentTranscript;
using benchfns::BenchmarkFunction;
using benchfns::EvalPoint;
using optimizers::RunHistory;

/// A parsed agent reply: the proposed point and its one-sentence rationale.
struct Proposal {
  std::vector<double> x;
  std::string explanation;
};

struct AgentEndpointConfig {
  std::string base_url;
  std::string model_id;
  std::string api_key_env_var = "AGENTOPT_API_KEY";
  std::string completions_path = "/chat/completions";
  std::chrono::milliseconds timeout{30000};
  int max_retries = 2;
  double temperature = 0.0;
  int requests_per_minute = 60;
};

/// The optimization-assistant system prompt with MAX_STEPS resolved.
/// Pure; output is pinned by a golden-file test.
std::string build_numopt_system_prompt(int max_steps);

/// Harness turn for the given iteration. Iteration 0 announces the budget
/// and lists the seed examples; later iterations report the latest f value
/// and the iteration number. Values are fixed-point with 4 decimals.
std::string build_step_message(const RunHistory& history, int iteration,
                               std::span<const EvalPoint> seeds, int max_steps);

/// Extracts the first line of the form "x: <dims reals>" (a bare real is
/// accepted when dims == 1; leading labels such as "Step: 0," are ignored)
/// and the text after an "Explanation:" marker. Throws ParseError when no
/// x-line exists or a value is non-finite, ArityError on a wrong count.
Proposal parse_proposal(const std::string& text, int dims);

struct AgentLoopOptions {
  int max_retries = 2;           // parse re-requests and transport retries
  std::uint64_t fallback_seed = 0;
};

struct AgentRunResult {
  RunHistory history;
  AgentTranscript transcript;
  int parse_failures = 0;  // unparseable replies, including retried ones
  int fallbacks = 0;       // steps that had to use the fallback policy
};

/// Runs the full conversational loop: seed evaluations enter the history
/// first, then the agent proposes points until exactly `steps` evaluations
/// have been spent. Unparseable replies are re-requested with a format
/// reminder up to max_retries times, after which the step falls back to
/// best-known-x plus Gaussian noise (sigma = 0.1 * domain span) and is
/// labeled as such. Transport failure after retries aborts the run with a
/// partial, failed-flagged history.
AgentRunResult optimize_with_agent(AgentInterface& agent, const BenchmarkFunction& fn,
                                   std::span<const EvalPoint> seeds, int steps,
                                   const AgentLoopOptions& opts = {});

}  // namespace agentopt::protocol
