#include "agentopt/http_agent.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <mutex>

#include "agentopt/errors.hpp"

#include "httplib.h"
#include "json.hpp"

namespace agentopt::protocol {

struct RequestRateLimiter::State {
  std::mutex mu;
  std::condition_variable cv;
  double tokens = 60.0;
  double capacity = 60.0;
  double per_second = 1.0;
  std::chrono::steady_clock::time_point last = std::chrono::steady_clock::now();

  void refill() {
    const auto now = std::chrono::steady_clock::now();
    const double elapsed = std::chrono::duration<double>(now - last).count();
    tokens = std::min(capacity, tokens + elapsed * per_second);
    last = now;
  }
};

std::shared_ptr<RequestRateLimiter::State> RequestRateLimiter::make_state() {
  return std::make_shared<State>();
}

RequestRateLimiter& RequestRateLimiter::instance() {
  static RequestRateLimiter limiter;
  return limiter;
}

void RequestRateLimiter::set_rate(int requests_per_minute) {
  if (requests_per_minute < 1) throw ArgumentError("requests_per_minute must be >= 1");
  std::lock_guard lock(state_->mu);
  state_->refill();
  state_->capacity = requests_per_minute;
  state_->per_second = requests_per_minute / 60.0;
  state_->tokens = std::min(state_->tokens, state_->capacity);
}

void RequestRateLimiter::acquire() {
  std::unique_lock lock(state_->mu);
  for (;;) {
    state_->refill();
    if (state_->tokens >= 1.0) {
      state_->tokens -= 1.0;
      return;
    }
    const auto wait = std::chrono::duration<double>((1.0 - state_->tokens) /
                                                    state_->per_second);
    state_->cv.wait_for(lock,
                        std::chrono::duration_cast<std::chrono::milliseconds>(wait));
  }
}

HttpAgent::HttpAgent(AgentEndpointConfig config) : config_(std::move(config)) {
  if (config_.base_url.empty()) throw ArgumentError("base_url must be set");
  RequestRateLimiter::instance().set_rate(config_.requests_per_minute);
}

std::string HttpAgent::send(const agent::AgentTranscript& transcript) {
  RequestRateLimiter::instance().acquire();

  nlohmann::json body;
  body["model"] = config_.model_id;
  body["temperature"] = config_.temperature;
  auto& messages = body["messages"] = nlohmann::json::array();
  for (const auto& m : transcript.messages()) {
    const char* role = m.role == agent::Role::System     ? "system"
                       : m.role == agent::Role::Harness ? "user"
                                                        : "assistant";
    messages.push_back({{"role", role}, {"content", m.text}});
  }

  httplib::Client client(config_.base_url);
  const auto secs =
      std::chrono::duration_cast<std::chrono::seconds>(config_.timeout).count();
  client.set_connection_timeout(std::max<long>(1, secs), 0);
  client.set_read_timeout(std::max<long>(1, secs), 0);
  client.set_write_timeout(std::max<long>(1, secs), 0);

  httplib::Headers headers;
  if (!config_.api_key_env_var.empty()) {
    if (const char* key = std::getenv(config_.api_key_env_var.c_str()); key != nullptr)
      headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  const auto res =
      client.Post(config_.completions_path, headers, body.dump(), "application/json");
  if (!res)
    throw TransportError("request to " + config_.base_url + " failed: " +
                         httplib::to_string(res.error()));
  if (res->status >= 400)
    throw TransportError("endpoint returned HTTP " + std::to_string(res->status) + ": " +
                         res->body.substr(0, 200));

  try {
    const auto reply = nlohmann::json::parse(res->body);
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed completion response: ") + e.what());
  }
}

}  // namespace agentopt::protocol
