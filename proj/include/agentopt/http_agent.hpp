#pragma once

#include <memory>

#include "agentopt/agent.hpp"
#include "agentopt/numopt_protocol.hpp"

namespace agentopt::protocol {

/// Blocking token bucket shared by every HttpAgent in the process; keeps the
/// request rate under a configurable ceiling no matter how many runs are in
/// flight.
class RequestRateLimiter {
 public:
  static RequestRateLimiter& instance();
  void set_rate(int requests_per_minute);
  void acquire();  // blocks until a token is available

 private:
  RequestRateLimiter() = default;
  struct State;
  std::shared_ptr<State> state_ = make_state();
  static std::shared_ptr<State> make_state();
};

/// Chat-completion client for any endpoint speaking the plain
/// {model, messages, temperature} POST shape. System/harness/agent roles map
/// to system/user/assistant. Failures surface as TransportError; retrying is
/// the caller's job.
class HttpAgent : public agent::AgentInterface {
 public:
  explicit HttpAgent(AgentEndpointConfig config);
  std::string send(const agent::AgentTranscript& transcript) override;

  const AgentEndpointConfig& config() const { return config_; }

 private:
  AgentEndpointConfig config_;
};

}  // namespace agentopt::protocol
