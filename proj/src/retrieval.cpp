#include "agentopt/retrieval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "agentopt/errors.hpp"
#include "agentopt/numfmt.hpp"

namespace agentopt::retrieval {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double planar_distance(const ExecutionTrace& t, double x, double y) {
  return std::hypot(t.landing.x - x, t.landing.y - y);
}

}  // namespace

std::vector<RetrievalObjective> standard_objectives(const sim::EnvConfig& env) {
  const double hw = env.table_half_width;
  const double depth = env.table_depth;
  const auto on_table_only = [](auto score) {
    return [score](const ExecutionTrace& t) {
      return t.landing.on_table ? score(t) : kInf;
    };
  };
  std::vector<RetrievalObjective> out;
  out.push_back({"O1", "Play as far right as possible",
                 on_table_only([](const ExecutionTrace& t) { return -t.landing.x; })});
  out.push_back({"O2", "Aim the ball at the leftmost edge of the table",
                 on_table_only([](const ExecutionTrace& t) { return t.landing.x; })});
  out.push_back({"O3", "Play the ball close to the net",
                 on_table_only([](const ExecutionTrace& t) { return t.landing.y; })});
  out.push_back({"O4", "Land the ball in the middle of the opponent's side of the table",
                 on_table_only([depth](const ExecutionTrace& t) {
                   return planar_distance(t, 0.0, depth / 2.0);
                 })});
  out.push_back({"O5", "Target the back-left corner of the opponent's court",
                 on_table_only([hw, depth](const ExecutionTrace& t) {
                   return planar_distance(t, -hw, depth);
                 })});
  out.push_back({"O6",
                 "Aim the ball as close as possible to the back edge of the "
                 "opponent's court",
                 on_table_only([depth](const ExecutionTrace& t) {
                   return std::fabs(depth - t.landing.y);
                 })});
  out.push_back({"O7",
                 "Make sure to land the ball as close as possible to coordinate "
                 "[0.2, 0.8, 0.0]",
                 on_table_only([](const ExecutionTrace& t) {
                   return planar_distance(t, 0.2, 0.8);
                 })});
  out.push_back({"O8",
                 "Hit the ball as close as possible to coordinate [-0.2, 0.8, 0.0]",
                 on_table_only([](const ExecutionTrace& t) {
                   return planar_distance(t, -0.2, 0.8);
                 })});
  out.push_back({"O9",
                 "Play the balls so it achieves the maximum peak height while still "
                 "landing it on the table",
                 on_table_only(
                     [](const ExecutionTrace& t) { return -t.landing.peak_height; })});
  out.push_back({"O10", "Play as shallow a ball as possible",
                 on_table_only(
                     [](const ExecutionTrace& t) { return t.landing.peak_height; })});
  return out;
}

std::vector<int> oracle_rank(const RetrievalObjective& objective,
                             const TraceCache& cache) {
  if (cache.empty()) throw ArgumentError("cache must not be empty");
  const auto& traces = cache.traces();
  std::vector<int> order(traces.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> scores(traces.size());
  for (size_t i = 0; i < traces.size(); ++i) scores[i] = objective.score(traces[i]);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] < scores[b];
    return traces[a].id < traces[b].id;
  });
  std::vector<int> ids(order.size());
  for (size_t i = 0; i < order.size(); ++i) ids[i] = traces[order[i]].id;
  return ids;
}

namespace {

void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(jobs, n);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

std::vector<TopKResult> evaluate_retrieval(const AgentFactory& factory,
                                           const std::vector<RetrievalObjective>& objectives,
                                           const TraceCache& cache, int trials,
                                           const AgentLoopOptions& opts, int jobs,
                                           const TrialSink& sink) {
  if (trials < 1) throw ArgumentError("trials must be >= 1");
  if (cache.empty()) throw ArgumentError("cache must not be empty");

  std::vector<TopKResult> results;
  const auto cache_ids = cache.ids();
  for (const auto& objective : objectives) {
    sas::SasPromptConfig cfg;
    cfg.objective_text = objective.text;
    cfg.mode = sas::Mode::RetrieveOnly;
    const std::string prompt = build_sas_prompt(cfg, cache);
    const int oracle_best = oracle_rank(objective, cache).front();

    std::vector<std::vector<int>> answered(trials);
    std::vector<int> hit1(trials, 0), hit5(trials, 0), hit10(trials, 0), failed(trials, 0);
    parallel_for(trials, jobs, [&](int trial) {
      const auto agent_impl = factory(objective, trial);
      try {
        const auto resp = sas::exchange_sas(*agent_impl, prompt, sas::Mode::RetrieveOnly,
                                            cache_ids, cfg.bounds, opts);
        const auto& ids = resp.best_ids;
        const auto within = [&](size_t k) {
          const auto end = ids.begin() + static_cast<long>(std::min(ids.size(), k));
          return std::find(ids.begin(), end, oracle_best) != end;
        };
        hit1[trial] = within(1);
        hit5[trial] = within(5);
        hit10[trial] = within(10);
        answered[trial] = ids;
      } catch (const ParseError&) {
        failed[trial] = 1;  // a miss, reported separately
      }
    });

    TopKResult r;
    r.objective_id = objective.id;
    r.trials = trials;
    r.top1 = std::accumulate(hit1.begin(), hit1.end(), 0.0) / trials;
    r.top5 = std::accumulate(hit5.begin(), hit5.end(), 0.0) / trials;
    r.top10 = std::accumulate(hit10.begin(), hit10.end(), 0.0) / trials;
    r.parse_failures = std::accumulate(failed.begin(), failed.end(), 0);
    results.push_back(std::move(r));
    if (sink)
      for (int t = 0; t < trials; ++t)
        sink(objective.id, t, answered[t], failed[t] != 0);
  }
  return results;
}

std::string topk_to_csv(const std::vector<TopKResult>& results) {
  std::string out = "objective,trials,top1,top5,top10,parse_failures\n";
  for (const auto& r : results)
    out += r.objective_id + "," + std::to_string(r.trials) + "," +
           format_fixed(r.top1, 4) + "," + format_fixed(r.top5, 4) + "," +
           format_fixed(r.top10, 4) + "," + std::to_string(r.parse_failures) + "\n";
  return out;
}

}  // namespace agentopt::retrieval
