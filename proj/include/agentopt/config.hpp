#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "agentopt/benchfns.hpp"
#include "agentopt/numopt_protocol.hpp"
#include "agentopt/sim_env.hpp"

namespace agentopt::cli {

struct AgentConfig {
  std::string kind = "mock";  // mock | http | replay | scripted
  std::string fixture;                  // replay: JSON-lines session file
  std::string fixture_mode = "strict";  // strict | lenient
  protocol::AgentEndpointConfig endpoint;
};

struct CacheGenConfig {
  std::string region = "full";  // full | left | lower
  int n = 100;
  std::uint64_t seed = 7;
  double noise_sigma = 0.0;
};

struct BenchConfig {
  struct Function {
    benchfns::FnKind kind = benchfns::FnKind::Sphere;
    int dims = 2;
    std::optional<std::uint64_t> shift_seed;  // default: derived from the master seed
    double domain_lo = -5.12;
    double domain_hi = 5.12;
  };
  std::vector<Function> functions;     // default: 2D/8D Ackley and Rastrigin
  std::vector<std::string> optimizers; // default: gd adam nelder-mead random-search agent
  int trials = 50;
  int steps = 100;
  int agent_seeds = 3;  // in-context examples given to the agent, x0 included
};

struct RetrieveConfig {
  std::vector<std::string> objectives;  // default: O1..O10
  std::string cache_path;               // exclusive with cache_gen
  std::optional<CacheGenConfig> cache_gen;
  int trials = 100;
};

struct SelfImproveConfig {
  sim::GoalSpec goal;
  std::string objective_text;
  CacheGenConfig cache_gen;
  int iterations = 30;
  int repeats = 1;
  std::string env_profile = "sim-default";
  double noise_sigma = 0.0;
};

/// One experiment definition: exactly one of the command sections is set.
struct RunConfig {
  int version = 1;
  std::uint64_t seed = 42;
  int jobs = 1;
  AgentConfig agent;
  std::optional<BenchConfig> bench;
  std::optional<RetrieveConfig> retrieve;
  std::optional<SelfImproveConfig> self_improve;

  static RunConfig load(const std::filesystem::path& path);
  static RunConfig from_json_text(const std::string& text,
                                  const std::filesystem::path& base_dir);
  std::string to_json() const;  // resolved snapshot, stable field order
};

}  // namespace agentopt::cli
