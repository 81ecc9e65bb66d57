#include "agentopt/replay_agent.hpp"

#include <fstream>

#include "agentopt/errors.hpp"

#include "json.hpp"

namespace agentopt::protocol {

ReplayAgent::ReplayAgent(const std::string& fixture_path, Mode mode) : mode_(mode) {
  std::ifstream in(fixture_path);
  if (!in) throw IoError("cannot open fixture " + fixture_path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto row = nlohmann::json::parse(line);
      entries_.push_back({row.at("prompt_sha256").get<std::string>(),
                          row.at("response").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw IoError("fixture " + fixture_path + " line " + std::to_string(lineno) +
                    ": " + e.what());
    }
  }
  if (entries_.empty()) throw IoError("fixture " + fixture_path + " is empty");
}

std::string ReplayAgent::send(const agent::AgentTranscript& transcript) {
  if (next_ >= entries_.size())
    throw ReplayError("fixture exhausted after " + std::to_string(entries_.size()) +
                      " exchanges");
  const Entry& e = entries_[next_];
  if (mode_ == Mode::Strict) {
    const std::string h = agent::sha256_hex(transcript.canonical_text());
    if (h != e.prompt_sha256)
      throw ReplayError("prompt hash mismatch at exchange " + std::to_string(next_) +
                        ": got " + h.substr(0, 12) + ", fixture has " +
                        e.prompt_sha256.substr(0, 12));
  }
  ++next_;
  return e.response;
}

}  // namespace agentopt::protocol
