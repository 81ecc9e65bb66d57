#pragma once

#include <string>
#include <vector>

#include "agentopt/agent.hpp"

namespace agentopt::protocol {

/// Replays a recorded session from a JSON-lines fixture; one object per
/// exchange: {"prompt_sha256": hex, "response": string}. Strict mode checks
/// the hash of every outgoing prompt against the recording; lenient mode
/// just plays responses in order.
class ReplayAgent : public agent::AgentInterface {
 public:
  enum class Mode { Strict, Lenient };

  explicit ReplayAgent(const std::string& fixture_path, Mode mode = Mode::Strict);

  std::string send(const agent::AgentTranscript& transcript) override;

  size_t entries() const { return entries_.size(); }
  size_t position() const { return next_; }

 private:
  struct Entry {
    std::string prompt_sha256;
    std::string response;
  };
  std::vector<Entry> entries_;
  size_t next_ = 0;
  Mode mode_;
};

}  // namespace agentopt::protocol
