#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "agentopt/errors.hpp"
#include "agentopt/sas.hpp"
#include "agentopt/sas_agents.hpp"
#include "golden.hpp"

using namespace agentopt;
using namespace agentopt::sas;
using trace::ParamVector;
using trace::TraceCache;

namespace {

TraceCache small_cache(int n, const sim::ParamRegion& region, std::uint64_t seed = 3) {
  Rng rng(seed);
  return sim::seed_cache(sim::EnvConfig::sim_default(), region, n, rng);
}

TraceCache left_cache(int n, std::uint64_t seed = 3) {
  return small_cache(n, sim::left_biased_region(), seed);
}

/// answers with a fixed canned string
struct CannedAgent : agent::AgentInterface {
  std::string reply;
  int calls = 0;
  std::string send(const agent::AgentTranscript&) override {
    ++calls;
    return reply;
  }
};

}  // namespace

TEST_CASE("retrieve-only prompt: objective included, no synthesis steps") {
  SasPromptConfig cfg;
  cfg.objective_text = "Hit to the top edge of the table";
  cfg.mode = Mode::RetrieveOnly;
  const auto cache = left_cache(3);
  const auto prompt = build_sas_prompt(cfg, cache);
  golden::compare("sas_prompt_retrieve.txt", prompt);
  CHECK(prompt.find("Hit to the top edge of the table") != std::string::npos);
  CHECK(prompt.find("Step 3") == std::string::npos);
  CHECK(prompt.find("Step 4") == std::string::npos);
  CHECK(prompt.find("PARAMS:") == std::string::npos);

  int examples = 0;
  size_t pos = 0;
  while ((pos = prompt.find("\nExample ", pos)) != std::string::npos) {
    ++examples;
    ++pos;
  }
  CHECK(examples == 3);
}

TEST_CASE("synthesize prompt asks for the per-variable analysis") {
  SasPromptConfig cfg;
  cfg.objective_text = "Hit the ball as far right as possible!";
  cfg.mode = Mode::Synthesize;
  cfg.summary_columns = {"id", "landing x", "landing y", "on table", "peak height"};
  const auto cache = left_cache(3);
  const auto prompt = build_sas_prompt(cfg, cache);
  golden::compare("sas_prompt_synthesize.txt", prompt);
  CHECK(prompt.find("the impact of each variable") != std::string::npos);
  CHECK(prompt.find("'PARAMS:") != std::string::npos);
  CHECK(prompt.find("'JUSTIFICATION:'") != std::string::npos);
}

TEST_CASE("prompt truncates to the most recent examples") {
  SasPromptConfig cfg;
  cfg.objective_text = "o";
  cfg.max_examples = 2;
  const auto cache = left_cache(5);
  const auto prompt = build_sas_prompt(cfg, cache);
  CHECK(prompt.find("Example 3:") == std::string::npos);
  CHECK(prompt.find("Example 4:") != std::string::npos);
  CHECK(prompt.find("Example 5:") != std::string::npos);
}

TEST_CASE("empty cache is rejected") {
  SasPromptConfig cfg;
  cfg.objective_text = "o";
  CHECK_THROWS_AS((void)build_sas_prompt(cfg, TraceCache{}), ArgumentError);
}

TEST_CASE("parse_sas_response: BEST ids") {
  const std::vector<int> ids = {16, 17, 18};
  const auto r = parse_sas_response("BEST: 17\n", Mode::RetrieveOnly, ids, {});
  CHECK(r.best_ids == std::vector<int>{17});

  const auto multi =
      parse_sas_response("```\nid | x\n17 | 1\n```\nBEST: 17, 16, 18\nANALYSIS:\nfoo\n",
                         Mode::RetrieveOnly, ids, {});
  CHECK(multi.best_ids == std::vector<int>{17, 16, 18});
  CHECK(multi.analysis == "foo");
  REQUIRE(multi.summary_rows.size() == 1);
  CHECK(multi.summary_rows[0].first == 17);

  const auto unknown = parse_sas_response("BEST: 99, 17\n", Mode::RetrieveOnly, ids, {});
  CHECK(unknown.best_ids == std::vector<int>{17});
  CHECK_FALSE(unknown.warnings.empty());
}

TEST_CASE("parse_sas_response: PARAMS line round-trips the specimen values") {
  const std::vector<int> ids = {1};
  const auto r = parse_sas_response(
      "BEST: 1\nANALYSIS:\nnone\nPARAMS: a:1.1 b:1.2 c:0.7 d:1.1 e:1.1 f:1.1 g:1.1 "
      "h:1.5\nJUSTIFICATION:\nbecause\n",
      Mode::Synthesize, ids, {0.5, 1.5});
  REQUIRE(r.proposal.has_value());
  const ParamVector expect{{1.1, 1.2, 0.7, 1.1, 1.1, 1.1, 1.1, 1.5}};
  for (int i = 0; i < 8; ++i)
    CHECK((*r.proposal)[i] == doctest::Approx(expect[i]));
  CHECK_FALSE(r.proposal_clamped);
  CHECK(r.justification == "because");
}

TEST_CASE("parse_sas_response: errors and clamping") {
  const std::vector<int> ids = {1};
  CHECK_THROWS_AS(
      (void)parse_sas_response("no markers at all", Mode::RetrieveOnly, ids, {}),
      ParseError);
  CHECK_THROWS_AS(
      (void)parse_sas_response("BEST: 1\n", Mode::Synthesize, ids, {}),
      ParseError);
  CHECK_THROWS_AS((void)parse_sas_response(
                      "BEST: 1\nPARAMS: a:1 b:1 c:1 d:1 e:1 f:1 g:1\n",
                      Mode::Synthesize, ids, {}),
                  ParseError);

  const auto clamped = parse_sas_response(
      "BEST: 1\nPARAMS: a:2.5 b:1 c:1 d:1 e:1 f:1 g:1 h:0.1\nJUSTIFICATION:\nx\n",
      Mode::Synthesize, ids, {0.5, 1.5});
  REQUIRE(clamped.proposal.has_value());
  CHECK(clamped.proposal_clamped);
  CHECK((*clamped.proposal)[0] == 1.5);
  CHECK((*clamped.proposal)[7] == 0.5);
}

TEST_CASE("retrieve: degenerate single-example cache") {
  const auto cache = left_cache(1);
  ScriptedImprover agent(GoalSpec::direction(sim::GoalKind::MaxX));
  const auto r = retrieve(agent, "Play as far right as possible", cache);
  CHECK(r.best_ids == std::vector<int>{1});
}

TEST_CASE("retrieve retries on a malformed reply, then fails cleanly") {
  const auto cache = left_cache(2);
  CannedAgent agent;
  agent.reply = "I would rather chat about the weather.";
  AgentLoopOptions opts;
  opts.max_retries = 2;
  CHECK_THROWS_AS((void)retrieve(agent, "objective", cache, opts), ParseError);
  CHECK(agent.calls == 1 + opts.max_retries);
}

TEST_CASE("self_improve: one iteration appends exactly one trace") {
  auto cache = left_cache(4);
  ScriptedImprover agent(GoalSpec::direction(sim::GoalKind::MaxX));
  const auto report =
      self_improve(agent, sim::EnvConfig::sim_default(),
                   GoalSpec::direction(sim::GoalKind::MaxX),
                   "Hit the ball as far right as possible!", cache, 1);
  CHECK(cache.size() == 5);
  REQUIRE(report.steps.size() == 1);
  CHECK(report.steps[0].trace_id == 5);
  CHECK_FALSE(report.failed);
}

TEST_CASE("self_improve: out-of-bounds proposals execute clamped and are flagged") {
  auto cache = left_cache(2);
  CannedAgent agent;
  agent.reply =
      "BEST: 1\nANALYSIS:\nup\nPARAMS: a:9 b:1 c:1 d:1 e:1 f:1 g:1 h:1\n"
      "JUSTIFICATION:\nbig\n";
  const auto report = self_improve(agent, sim::EnvConfig::sim_default(),
                                   GoalSpec::direction(sim::GoalKind::MaxX), "right!",
                                   cache, 1);
  REQUIRE(report.steps.size() == 1);
  CHECK(report.steps[0].clamped);
  CHECK(report.steps[0].proposal[0] == 1.5);  // executed with the clamped value
  CHECK(cache.traces().back().params[0] == 1.5);
}

TEST_CASE("self_improve: unparseable agent falls back but the loop continues") {
  auto cache = left_cache(3);
  CannedAgent agent;
  agent.reply = "nope";
  AgentLoopOptions opts;
  opts.max_retries = 1;
  const auto report =
      self_improve(agent, sim::EnvConfig::sim_default(),
                   GoalSpec::direction(sim::GoalKind::MaxX), "right!", cache, 3, opts);
  REQUIRE(report.steps.size() == 3);
  for (const auto& s : report.steps) CHECK(s.fallback);
  CHECK(cache.size() == 6);
  CHECK_FALSE(report.failed);
}

TEST_CASE("self_improve: transport failure aborts with a partial flagged report") {
  struct DeadAgent : agent::AgentInterface {
    std::string send(const agent::AgentTranscript&) override {
      throw TransportError("gone");
    }
  } dead;
  auto cache = left_cache(3);
  const auto report =
      self_improve(dead, sim::EnvConfig::sim_default(),
                   GoalSpec::direction(sim::GoalKind::MaxX), "right!", cache, 3);
  CHECK(report.failed);
  CHECK(report.steps.empty());
  CHECK(cache.size() == 3);
}

TEST_CASE("self_improve keeps earlier cache entries byte-identical") {
  auto cache = left_cache(6);
  std::vector<std::string> before;
  for (const auto& t : cache.traces()) before.push_back(trace::render_trace(t, 6));
  ScriptedImprover agent(GoalSpec::direction(sim::GoalKind::MaxX));
  (void)self_improve(agent, sim::EnvConfig::sim_default(),
                     GoalSpec::direction(sim::GoalKind::MaxX), "right!", cache, 4);
  for (size_t i = 0; i < before.size(); ++i)
    CHECK(trace::render_trace(cache.traces()[i], 6) == before[i]);
}

TEST_CASE("scripted improver raises the best landing x monotonically at first") {
  auto cache = left_cache(24, 42);
  double max_x = -1e9;
  for (const auto& t : cache.traces()) max_x = std::max(max_x, t.landing.x);

  ScriptedImprover agent(GoalSpec::direction(sim::GoalKind::MaxX));
  std::vector<double> max_curve = {max_x};
  auto env = sim::EnvConfig::sim_default();
  for (int it = 0; it < 5; ++it) {
    (void)self_improve(agent, env, GoalSpec::direction(sim::GoalKind::MaxX),
                       "Hit the ball as far right as possible!", cache, 1);
    max_x = std::max(max_x, cache.traces().back().landing.x);
    max_curve.push_back(max_x);
  }
  for (size_t i = 1; i < max_curve.size(); ++i) CHECK(max_curve[i] > max_curve[i - 1]);
}

TEST_CASE("scripted improver beats the initial cache substantially") {
  auto cache = left_cache(24, 7);
  ScriptedImprover agent(GoalSpec::direction(sim::GoalKind::MaxX));
  const auto report = self_improve(agent, sim::EnvConfig::sim_default(),
                                   GoalSpec::direction(sim::GoalKind::MaxX),
                                   "Hit the ball as far right as possible!", cache, 30);
  CHECK(report.final_best_distance() < report.initial_mean_distance);
  const auto curve = report.best_so_far();
  for (size_t i = 1; i < curve.size(); ++i) CHECK(curve[i] <= curve[i - 1]);
}

TEST_CASE("improvement report serializes to json and csv") {
  auto cache = left_cache(3);
  ScriptedImprover agent(GoalSpec::direction(sim::GoalKind::MaxX));
  const auto report = self_improve(agent, sim::EnvConfig::sim_default(),
                                   GoalSpec::direction(sim::GoalKind::MaxX), "right!",
                                   cache, 2);
  const auto j = report.to_json();
  CHECK(j.find("\"initial_mean_distance\"") != std::string::npos);
  CHECK(j.find("\"justification\"") != std::string::npos);
  const auto csv = report.to_csv();
  CHECK(csv.starts_with("iteration,distance,"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 rows
}
