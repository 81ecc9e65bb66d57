#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace agentopt::agent {

enum class Role { System, Harness, Agent };

std::string role_name(Role role);

struct AgentMessage {
  Role role;
  std::string text;  // non-empty
};

/// The ordered exchange with an optimizer agent. The first message is the
/// system prompt; harness and agent messages strictly alternate after it.
/// The append methods enforce that shape.
class AgentTranscript {
 public:
  void begin_system(std::string text);
  void add_harness(std::string text);
  void add_agent(std::string text);

  const std::vector<AgentMessage>& messages() const { return messages_; }
  bool empty() const { return messages_.empty(); }
  size_t size() const { return messages_.size(); }
  bool well_formed() const;

  /// Stable byte rendering used for fixture hashing.
  std::string canonical_text() const;

 private:
  std::vector<AgentMessage> messages_;
};

/// Anything that can answer the next turn of a transcript: a live HTTP
/// endpoint, a deterministic mock, a scripted oracle or a replay fixture.
class AgentInterface {
 public:
  virtual ~AgentInterface() = default;
  virtual std::string send(const AgentTranscript& transcript) = 0;
};

std::string sha256_hex(std::string_view data);

/// Tees every (prompt hash, response) pair through to a sink so a live
/// session can be turned into a replay fixture.
class RecordingAgent : public AgentInterface {
 public:
  RecordingAgent(AgentInterface& inner, std::string fixture_path);
  std::string send(const AgentTranscript& transcript) override;

 private:
  AgentInterface& inner_;
  std::string path_;
};

}  // namespace agentopt::agent
