#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "agentopt/errors.hpp"
#include "agentopt/retrieval.hpp"
#include "agentopt/sas_agents.hpp"

using namespace agentopt;
using namespace agentopt::retrieval;
using trace::ExecutionTrace;
using trace::TraceCache;

namespace {

ExecutionTrace landing_only(double x, double y, bool on_table, double peak = 0.5) {
  ExecutionTrace t;
  t.rows = {{1, 0, 0, 0, x, y, peak}};
  t.landing = {x, y, 0.0, on_table, peak};
  return t;
}

const RetrievalObjective& objective(const std::vector<RetrievalObjective>& all,
                                    const std::string& id) {
  const auto it =
      std::find_if(all.begin(), all.end(), [&](const auto& o) { return o.id == id; });
  REQUIRE(it != all.end());
  return *it;
}

TraceCache random_cache(int n, std::uint64_t seed = 11) {
  Rng rng(seed);
  return sim::seed_cache(sim::EnvConfig::sim_default(),
                         sim::ParamRegion::uniform(0.5, 1.5), n, rng);
}

}  // namespace

TEST_CASE("O1 ranks by landing x descending") {
  TraceCache cache;
  cache.append(landing_only(-0.3, 0.5, true));
  cache.append(landing_only(0.2, 0.5, true));
  cache.append(landing_only(0.5, 0.5, true));
  const auto all = standard_objectives();
  CHECK(oracle_rank(objective(all, "O1"), cache) == std::vector<int>{3, 2, 1});
  CHECK(oracle_rank(objective(all, "O2"), cache) == std::vector<int>{1, 2, 3});
}

TEST_CASE("O7 puts an exact hit first") {
  TraceCache cache;
  cache.append(landing_only(0.5, 0.3, true));
  cache.append(landing_only(0.2, 0.8, true));
  cache.append(landing_only(-0.1, 1.0, true));
  const auto all = standard_objectives();
  CHECK(oracle_rank(objective(all, "O7"), cache).front() == 2);
}

TEST_CASE("off-table traces rank last, peak objectives respect on-table") {
  TraceCache cache;
  cache.append(landing_only(0.1, 0.5, true, 0.4));
  cache.append(landing_only(0.0, 0.6, false, 2.0));  // huge peak but off table
  cache.append(landing_only(-0.2, 0.7, true, 0.9));
  const auto all = standard_objectives();
  const auto o9 = oracle_rank(objective(all, "O9"), cache);
  CHECK(o9 == std::vector<int>{3, 1, 2});
  const auto o10 = oracle_rank(objective(all, "O10"), cache);
  CHECK(o10 == std::vector<int>{1, 3, 2});
  // off-table also ranks last for a plain directional objective
  const auto o1 = oracle_rank(objective(all, "O1"), cache);
  CHECK(o1.back() == 2);
}

TEST_CASE("ties break toward the lower id") {
  TraceCache cache;
  cache.append(landing_only(0.4, 0.5, true));
  cache.append(landing_only(0.4, 0.5, true));
  cache.append(landing_only(0.4, 0.5, true));
  const auto all = standard_objectives();
  CHECK(oracle_rank(objective(all, "O1"), cache) == std::vector<int>{1, 2, 3});
}

TEST_CASE("objective texts carry the documented wording") {
  const auto all = standard_objectives();
  REQUIRE(all.size() == 10);
  CHECK(objective(all, "O1").text == "Play as far right as possible");
  CHECK(objective(all, "O5").text == "Target the back-left corner of the opponent's court");
  CHECK(objective(all, "O10").text == "Play as shallow a ball as possible");
}

TEST_CASE("oracle-backed scripted agent scores perfect top-k") {
  const auto cache = random_cache(30);
  const auto all = standard_objectives();
  const AgentFactory factory = [](const RetrievalObjective& obj, int) {
    return std::make_unique<sas::ScriptedImprover>(obj.score);
  };
  const auto results = evaluate_retrieval(factory, all, cache, 3);
  REQUIRE(results.size() == 10);
  for (const auto& r : results) {
    CHECK(r.top1 == 1.0);
    CHECK(r.top5 == 1.0);
    CHECK(r.top10 == 1.0);
    CHECK(r.parse_failures == 0);
  }
}

TEST_CASE("an agent answering a fixed wrong id scores zero") {
  const auto cache = random_cache(20);
  const auto all = standard_objectives();
  struct WrongAgent : agent::AgentInterface {
    int wrong_id;
    explicit WrongAgent(int id) : wrong_id(id) {}
    std::string send(const agent::AgentTranscript&) override {
      return "BEST: " + std::to_string(wrong_id) + "\n";
    }
  };
  // pick something never oracle-best: rank everything, use the worst
  const auto worst_of = [&](const RetrievalObjective& o) {
    return oracle_rank(o, cache).back();
  };
  for (const auto& o : {objective(all, "O1"), objective(all, "O9")}) {
    const int wrong = worst_of(o);
    const AgentFactory factory = [wrong](const RetrievalObjective&, int) {
      return std::make_unique<WrongAgent>(wrong);
    };
    const auto results = evaluate_retrieval(factory, {o}, cache, 4);
    CHECK(results[0].top1 == 0.0);
    CHECK(results[0].top5 == 0.0);
    CHECK(results[0].top10 == 0.0);
  }
}

TEST_CASE("uniform random ids land near the binomial expectation") {
  const auto cache = random_cache(100);
  const auto all = standard_objectives();
  const AgentFactory factory = [](const RetrievalObjective& obj, int trial) {
    return std::make_unique<sas::RandomIdAgent>(derive_seed(
        4242, {static_cast<std::uint64_t>(obj.id.size()),
               static_cast<std::uint64_t>(obj.id.back()),
               static_cast<std::uint64_t>(trial)}));
  };
  const std::vector<RetrievalObjective> two = {objective(all, "O1"),
                                               objective(all, "O6")};
  const auto results = evaluate_retrieval(factory, two, cache, 300, {}, 2);
  for (const auto& r : results) {
    CHECK(r.top1 <= r.top5);
    CHECK(r.top5 <= r.top10);
    CHECK(r.top10 >= 0.04);
    CHECK(r.top10 <= 0.16);  // 10/100 +- 3 sigma at 300 trials
    CHECK(r.parse_failures == 0);
  }
}

TEST_CASE("results are independent of worker count") {
  const auto cache = random_cache(40);
  const auto all = standard_objectives();
  const AgentFactory factory = [](const RetrievalObjective& obj, int trial) {
    return std::make_unique<sas::RandomIdAgent>(derive_seed(
        7, {static_cast<std::uint64_t>(obj.id.back()),
            static_cast<std::uint64_t>(trial)}));
  };
  const std::vector<RetrievalObjective> two = {objective(all, "O2"),
                                               objective(all, "O8")};
  const auto serial = evaluate_retrieval(factory, two, cache, 40, {}, 1);
  const auto parallel = evaluate_retrieval(factory, two, cache, 40, {}, 4);
  CHECK(topk_to_csv(serial) == topk_to_csv(parallel));
}

TEST_CASE("parse failures count as misses and are reported") {
  const auto cache = random_cache(10);
  const auto all = standard_objectives();
  struct GarbageAgent : agent::AgentInterface {
    std::string send(const agent::AgentTranscript&) override { return "shrug"; }
  };
  const AgentFactory factory = [](const RetrievalObjective&, int) {
    return std::make_unique<GarbageAgent>();
  };
  const auto results =
      evaluate_retrieval(factory, {objective(all, "O3")}, cache, 5);
  CHECK(results[0].parse_failures == 5);
  CHECK(results[0].top10 == 0.0);
}

TEST_CASE("csv output shape") {
  std::vector<TopKResult> results = {{"O1", 100, 0.25, 0.5, 0.75, 2}};
  const auto csv = topk_to_csv(results);
  CHECK(csv ==
        "objective,trials,top1,top5,top10,parse_failures\nO1,100,0.2500,0.5000,0.7500,2\n");
}
