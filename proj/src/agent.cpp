#include "agentopt/agent.hpp"

#include <openssl/evp.h>

#include <fstream>

#include "agentopt/errors.hpp"

#include "json.hpp"

namespace agentopt::agent {

std::string role_name(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::Harness: return "harness";
    case Role::Agent: return "agent";
  }
  return "?";
}

void AgentTranscript::begin_system(std::string text) {
  if (!messages_.empty()) throw ArgumentError("system message must come first");
  if (text.empty()) throw ArgumentError("empty message text");
  messages_.push_back({Role::System, std::move(text)});
}

void AgentTranscript::add_harness(std::string text) {
  if (messages_.empty()) throw ArgumentError("transcript must start with a system message");
  if (messages_.back().role == Role::Harness)
    throw ArgumentError("two harness messages in a row");
  if (text.empty()) throw ArgumentError("empty message text");
  messages_.push_back({Role::Harness, std::move(text)});
}

void AgentTranscript::add_agent(std::string text) {
  if (messages_.empty() || messages_.back().role != Role::Harness)
    throw ArgumentError("agent message must follow a harness message");
  if (text.empty()) throw ArgumentError("empty message text");
  messages_.push_back({Role::Agent, std::move(text)});
}

bool AgentTranscript::well_formed() const {
  if (messages_.empty()) return false;
  if (messages_[0].role != Role::System) return false;
  for (size_t i = 1; i < messages_.size(); ++i) {
    const Role want = (i % 2 == 1) ? Role::Harness : Role::Agent;
    if (messages_[i].role != want) return false;
    if (messages_[i].text.empty()) return false;
  }
  return true;
}

std::string AgentTranscript::canonical_text() const {
  std::string out;
  for (const auto& m : messages_) {
    out += role_name(m.role);
    out += '\n';
    out += m.text;
    out += '\x1e';  // record separator keeps message boundaries unambiguous
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw ArgumentError("sha256 failure");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

RecordingAgent::RecordingAgent(AgentInterface& inner, std::string fixture_path)
    : inner_(inner), path_(std::move(fixture_path)) {}

std::string RecordingAgent::send(const AgentTranscript& transcript) {
  const std::string response = inner_.send(transcript);
  nlohmann::json row = {{"prompt_sha256", sha256_hex(transcript.canonical_text())},
                        {"response", response}};
  std::ofstream out(path_, std::ios::app);
  if (!out) throw IoError("cannot append to fixture " + path_);
  out << row.dump() << "\n";
  return response;
}

}  // namespace agentopt::agent
