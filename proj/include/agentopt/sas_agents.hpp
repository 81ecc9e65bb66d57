#pragma once

#include <cstdint>
#include <functional>

#include "agentopt/agent.hpp"
#include "agentopt/sas.hpp"

namespace agentopt::sas {

/// Deterministic offline agent that walks the exact prompt/parse path a live
/// model would: it reads the example blocks out of its own prompt, ranks
/// them with the supplied scorer (lower is better), and answers in the full
/// reply grammar. In Synthesize mode it proposes the best example's
/// parameters stepped by 0.1 on the parameter whose values correlate most
/// strongly with the score across the cache, skipping candidates that were
/// already tried.
class ScriptedImprover : public agent::AgentInterface {
 public:
  using Scorer = std::function<double(const ExecutionTrace&)>;

  explicit ScriptedImprover(GoalSpec goal, ParamBounds bounds = {});
  explicit ScriptedImprover(Scorer scorer, ParamBounds bounds = {});

  std::string send(const agent::AgentTranscript& transcript) override;

 private:
  Scorer scorer_;
  ParamBounds bounds_;
};

/// Answers with 10 distinct uniformly random example ids (and, when asked
/// for parameters, a uniform draw within bounds). Deterministic given the
/// seed; each call advances its stream.
class RandomIdAgent : public agent::AgentInterface {
 public:
  explicit RandomIdAgent(std::uint64_t seed, ParamBounds bounds = {});

  std::string send(const agent::AgentTranscript& transcript) override;

 private:
  std::uint64_t seed_;
  std::uint64_t calls_ = 0;
  ParamBounds bounds_;
};

/// Splits a SAS prompt back into its rendered example traces; exposed for
/// agents and tests that need to see what the model sees.
std::vector<ExecutionTrace> extract_prompt_examples(const std::string& prompt);

/// True when the prompt asks for a PARAMS line (Synthesize mode).
bool prompt_wants_params(const std::string& prompt);

}  // namespace agentopt::sas
