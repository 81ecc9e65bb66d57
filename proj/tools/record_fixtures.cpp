// Records the replay fixtures shipped under fixtures/: starts a local chat
// endpoint, points the harness at it over real HTTP with fixture recording
// enabled, and pins the resulting CSVs. Usage: record_fixtures [out_dir]

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "agentopt/commands.hpp"
#include "agentopt/errors.hpp"
#include "agentopt/retrieval.hpp"
#include "agentopt/sas_agents.hpp"

#include "httplib.h"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace agentopt;

namespace {

constexpr int kPort = 18923;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("missing " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

// Answers like a chatty but well-behaved model: scripted analysis wrapped in
// a little prose.
std::string answer_prompt(const std::string& prompt) {
  sim::GoalSpec goal = sim::GoalSpec::direction(sim::GoalKind::MaxX);
  bool matched = false;
  sas::ScriptedImprover::Scorer scorer;
  const auto objective_pos = prompt.find("User objective: ");
  if (objective_pos != std::string::npos) {
    const auto end = prompt.find('\n', objective_pos);
    const std::string text = prompt.substr(objective_pos + 16, end - objective_pos - 16);
    for (const auto& objective : retrieval::standard_objectives()) {
      if (objective.text == text) {
        scorer = objective.score;
        matched = true;
        break;
      }
    }
  }

  agent::AgentTranscript transcript;
  transcript.begin_system("You are an expert assistant for analyzing and improving "
                          "robot table tennis behavior. Follow the requested output "
                          "format exactly.");
  transcript.add_harness(prompt);
  const std::string body =
      matched ? sas::ScriptedImprover(std::move(scorer)).send(transcript)
              : sas::ScriptedImprover(goal).send(transcript);

  return "Let me work through the in-context examples before answering.\n\n" + body +
         "\nThat is my final answer for this round.";
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path out_dir = argc > 1 ? argv[1] : "fixtures";
  fs::create_directories(out_dir);

  httplib::Server server;
  server.Post("/chat/completions", [](const httplib::Request& req,
                                      httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body);
    std::string prompt;
    for (const auto& m : body.at("messages"))
      if (m.at("role") == "user") prompt = m.at("content").get<std::string>();
    const nlohmann::json reply = {
        {"choices",
         {{{"message", {{"role", "assistant"}, {"content", answer_prompt(prompt)}}}}}}};
    res.set_content(reply.dump(), "application/json");
  });

  std::thread server_thread([&] { server.listen("127.0.0.1", kPort); });
  server.wait_until_ready();

  const std::string endpoint = R"("agent": {
    "kind": "http",
    "endpoint": {"base_url": "http://127.0.0.1:18923", "model_id": "local-stub",
                 "requests_per_minute": 100000}
  })";

  int rc = 0;
  try {
    {
      const std::string session = (out_dir / "retrieve_session.jsonl").string();
      std::remove(session.c_str());
      setenv("AGENTOPT_RECORD_FIXTURE", session.c_str(), 1);
      const auto cfg = cli::RunConfig::from_json_text(R"({
        "version": 1, "seed": 7, )" + endpoint + R"(,
        "retrieve": {"cache_gen": {"region": "full", "n": 12, "seed": 6}, "trials": 2}
      })", ".");
      const auto artifact = fs::temp_directory_path() / "agentopt_record_retrieve";
      fs::remove_all(artifact);
      if (cli::cmd_retrieve(cfg, artifact) != 0) throw IoError("retrieve run failed");
      write_file(out_dir / "retrieve_results_pinned.csv",
                 read_file(artifact / "results.csv"));
      unsetenv("AGENTOPT_RECORD_FIXTURE");
      write_file(out_dir / "retrieve_replay.json", R"({
  "version": 1,
  "seed": 7,
  "agent": {"kind": "replay", "fixture": "retrieve_session.jsonl",
            "fixture_mode": "strict"},
  "retrieve": {"cache_gen": {"region": "full", "n": 12, "seed": 6}, "trials": 2}
}
)");
    }
    {
      const std::string session = (out_dir / "self_improve_session.jsonl").string();
      std::remove(session.c_str());
      setenv("AGENTOPT_RECORD_FIXTURE", session.c_str(), 1);
      const auto cfg = cli::RunConfig::from_json_text(R"({
        "version": 1, "seed": 7, )" + endpoint + R"(,
        "self_improve": {
          "goal": {"kind": "max_x"},
          "objective_text": "Hit the ball as far right as possible!",
          "cache_gen": {"region": "left", "n": 10, "seed": 6},
          "iterations": 6, "repeats": 1
        }
      })", ".");
      const auto artifact = fs::temp_directory_path() / "agentopt_record_improve";
      fs::remove_all(artifact);
      if (cli::cmd_self_improve(cfg, artifact) != 0)
        throw IoError("self-improve run failed");
      write_file(out_dir / "self_improve_report_pinned.csv",
                 read_file(artifact / "report.csv"));
      unsetenv("AGENTOPT_RECORD_FIXTURE");
      write_file(out_dir / "self_improve_replay.json", R"({
  "version": 1,
  "seed": 7,
  "agent": {"kind": "replay", "fixture": "self_improve_session.jsonl",
            "fixture_mode": "strict"},
  "self_improve": {
    "goal": {"kind": "max_x"},
    "objective_text": "Hit the ball as far right as possible!",
    "cache_gen": {"region": "left", "n": 10, "seed": 6},
    "iterations": 6, "repeats": 1
  }
}
)");
    }
    std::cout << "fixtures written to " << out_dir << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = 1;
  }

  server.stop();
  server_thread.join();
  return rc;
}
