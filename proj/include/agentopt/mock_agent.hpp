#pragma once

#include <cstdint>

#include "agentopt/agent.hpp"

namespace agentopt::protocol {

/// Deterministic stand-in for a live optimizer agent. Every reply is a pure
/// function of (constructor arguments, transcript): the mock re-reads the
/// whole transcript, reconstructs the best point seen so far, then either
/// explores (uniform in the domain, probability decaying 0.5 -> 0.05 over
/// the budget) or exploits (best + Gaussian whose sigma starts at
/// 0.2 * span / dims and shrinks by 0.95 per accepted improvement). The
/// explanation line names the chosen mode.
class MockAgent : public agent::AgentInterface {
 public:
  MockAgent(double domain_lo, double domain_hi, int dims, int budget,
            std::uint64_t seed);

  std::string send(const agent::AgentTranscript& transcript) override;

 private:
  double lo_;
  double hi_;
  int dims_;
  int budget_;
  std::uint64_t seed_;
};

}  // namespace agentopt::protocol
