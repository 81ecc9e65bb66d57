#include "agentopt/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include "agentopt/errors.hpp"
#include "agentopt/http_agent.hpp"
#include "agentopt/mock_agent.hpp"
#include "agentopt/numfmt.hpp"
#include "agentopt/replay_agent.hpp"
#include "agentopt/retrieval.hpp"
#include "agentopt/sas_agents.hpp"
#include "agentopt/svg.hpp"

#include "json.hpp"

namespace agentopt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------- artifact plumbing ----------

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("missing file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string now_iso() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string hash_raw_files(const fs::path& dir, const std::vector<std::string>& names) {
  std::string blob;
  for (const auto& name : names) {
    blob += name;
    blob += '\0';
    blob += read_file(dir / name);
    blob += '\0';
  }
  return agent::sha256_hex(blob);
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const std::vector<std::string>& raw_files) {
  json m;
  m["version"] = 1;
  m["command"] = command;
  m["raw_files"] = raw_files;
  m["content_hash"] = hash_raw_files(dir, raw_files);
  m["created_at"] = now_iso();
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

// ---------- agent construction ----------

/// Non-owning view so one stateful agent (replay, http) can serve a factory
/// interface that hands out a "new" agent per trial.
class SharedAgentRef : public agent::AgentInterface {
 public:
  explicit SharedAgentRef(agent::AgentInterface* inner) : inner_(inner) {}
  std::string send(const agent::AgentTranscript& t) override { return inner_->send(t); }

 private:
  agent::AgentInterface* inner_;
};

/// Owns a live agent and a recorder around it; used when a session should
/// be captured into a replay fixture.
class OwningRecordingAgent : public agent::AgentInterface {
 public:
  OwningRecordingAgent(std::shared_ptr<agent::AgentInterface> inner, std::string path)
      : inner_(std::move(inner)), recorder_(*inner_, std::move(path)) {}
  std::string send(const agent::AgentTranscript& t) override {
    return recorder_.send(t);
  }

 private:
  std::shared_ptr<agent::AgentInterface> inner_;
  agent::RecordingAgent recorder_;
};

std::shared_ptr<agent::AgentInterface> make_shared_agent(const AgentConfig& cfg) {
  if (cfg.kind == "http") {
    std::shared_ptr<agent::AgentInterface> http =
        std::make_shared<protocol::HttpAgent>(cfg.endpoint);
    if (const char* record = std::getenv("AGENTOPT_RECORD_FIXTURE"))
      return std::make_shared<OwningRecordingAgent>(http, record);
    return http;
  }
  if (cfg.kind == "replay")
    return std::make_shared<protocol::ReplayAgent>(
        cfg.fixture, cfg.fixture_mode == "strict"
                         ? protocol::ReplayAgent::Mode::Strict
                         : protocol::ReplayAgent::Mode::Lenient);
  return nullptr;  // mock/scripted are constructed per use
}

int effective_jobs(const RunConfig& cfg) {
  if (cfg.jobs > 1 && (cfg.agent.kind == "replay" || cfg.agent.kind == "http")) {
    // a session agent answers strictly in sequence
    std::cerr << "note: agent kind '" << cfg.agent.kind
              << "' is sequential; running with jobs=1\n";
    return 1;
  }
  return cfg.jobs;
}

// embeds external inputs (fixture, cache) so the artifact re-runs on its own
RunConfig snapshot_config(const RunConfig& cfg, const fs::path& out_dir) {
  RunConfig snap = cfg;
  if (!snap.agent.fixture.empty()) {
    write_file(out_dir / "fixture.jsonl", read_file(snap.agent.fixture));
    snap.agent.fixture = "fixture.jsonl";
  }
  return snap;
}

// ---------- shared math ----------

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

sim::ParamRegion region_by_name(const std::string& name, const sim::EnvConfig& env) {
  if (name == "full") return sim::ParamRegion::uniform(env.bounds.lo, env.bounds.hi);
  if (name == "left") return sim::left_biased_region();
  if (name == "lower") return sim::lower_biased_region();
  throw ArgumentError("unknown region " + name);
}

trace::TraceCache generate_cache(const CacheGenConfig& gen) {
  sim::EnvConfig env = sim::EnvConfig::sim_default();
  env.noise_sigma = gen.noise_sigma;
  Rng rng(gen.seed);
  return sim::seed_cache(env, region_by_name(gen.region, env), gen.n, rng);
}

}  // namespace

// ---------- bench ----------

namespace {

optimizers::MatrixOptimizer make_agent_column(
    const RunConfig& cfg, int steps, int agent_seeds,
    std::shared_ptr<agent::AgentInterface> shared) {
  const AgentConfig agent_cfg = cfg.agent;
  return {"Agent",
          [agent_cfg, steps, agent_seeds, shared](
              const benchfns::BenchmarkFunction& fn, const std::vector<double>& x0,
              std::uint64_t seed) {
            std::vector<benchfns::EvalPoint> seeds;
            seeds.push_back({x0, benchfns::evaluate(fn, x0)});
            for (int i = 1; i < agent_seeds; ++i) {
              Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i), 0x5EED}));
              auto x = benchfns::sample_initial(fn, rng);
              const double f = benchfns::evaluate(fn, x);
              seeds.push_back({std::move(x), f});
            }
            std::unique_ptr<agent::AgentInterface> owned;
            agent::AgentInterface* impl = shared.get();
            if (impl == nullptr) {
              owned = std::make_unique<protocol::MockAgent>(
                  fn.domain_lo, fn.domain_hi, fn.dims, steps,
                  derive_seed(seed, {0xA6E7}));
              impl = owned.get();
            }
            protocol::AgentLoopOptions opts;
            opts.max_retries = agent_cfg.endpoint.max_retries;
            opts.fallback_seed = derive_seed(seed, {0xFB});
            return protocol::optimize_with_agent(*impl, fn, seeds, steps, opts).history;
          }};
}

}  // namespace

int cmd_bench(const RunConfig& config, const fs::path& out_dir) {
  if (!config.bench) throw ArgumentError("config has no bench section");
  const BenchConfig& bench = *config.bench;
  if (config.agent.kind == "scripted")
    throw ArgumentError("the scripted agent only applies to retrieve/self-improve");
  fs::create_directories(out_dir);

  std::vector<benchfns::BenchmarkFunction> functions;
  for (size_t i = 0; i < bench.functions.size(); ++i) {
    const auto& f = bench.functions[i];
    const auto shift_seed =
        f.shift_seed ? *f.shift_seed
                     : derive_seed(config.seed, {static_cast<std::uint64_t>(i), 0x5417});
    functions.push_back(benchfns::make_benchmark(f.kind, f.dims, shift_seed, 2.0,
                                                 f.domain_lo, f.domain_hi));
  }

  const auto shared = make_shared_agent(config.agent);
  std::vector<optimizers::MatrixOptimizer> opts;
  const auto baselines = optimizers::baseline_matrix_optimizers(bench.steps);
  for (const auto& name : bench.optimizers) {
    if (name == "gd") opts.push_back(baselines[0]);
    else if (name == "adam") opts.push_back(baselines[1]);
    else if (name == "nelder-mead") opts.push_back(baselines[2]);
    else if (name == "random-search") opts.push_back(baselines[3]);
    else if (name == "agent")
      opts.push_back(make_agent_column(config, bench.steps, bench.agent_seeds, shared));
    else
      throw ArgumentError("unknown optimizer " + name);
  }

  std::ofstream histories(out_dir / "histories.jsonl", std::ios::binary);
  if (!histories) throw IoError("cannot write histories.jsonl");
  const auto sink = [&](const std::string& fn_name, const std::string& opt_name,
                        int trial, const optimizers::RunHistory& h) {
    json row;
    row["function"] = fn_name;
    row["optimizer"] = opt_name;
    row["trial"] = trial;
    row["failed"] = h.failed;
    if (!h.diagnostic.empty()) row["diagnostic"] = h.diagnostic;
    row["gradient_calls"] = h.gradient_calls;
    json f = json::array();
    for (const auto& r : h.records) f.push_back(r.f);
    row["f"] = std::move(f);
    if (!h.records.empty()) {
      row["best_f"] = h.best().f;
      row["best_x"] = h.best().x;
    }
    histories << row.dump() << "\n";
  };

  const auto table = optimizers::run_benchmark_matrix(
      functions, opts, bench.trials, bench.steps, config.seed,
      effective_jobs(config), sink);
  histories.close();

  const RunConfig snap = snapshot_config(config, out_dir);
  write_file(out_dir / "config.json", snap.to_json());
  write_file(out_dir / "results.csv", table.to_csv());
  write_file(out_dir / "results.txt", table.to_text());
  write_manifest(out_dir, "bench", {"config.json", "histories.jsonl"});

  bool dead_cell = false;
  for (size_t r = 1; r < table.optimizer_names.size(); ++r)
    for (size_t c = 0; c < table.function_names.size(); ++c)
      if (table.cells[r][c].failures >= bench.trials) dead_cell = true;
  if (dead_cell) std::cerr << "error: at least one cell failed every trial\n";
  return dead_cell ? 1 : 0;
}

// ---------- retrieve ----------

namespace {

int objective_index(const std::string& id) {
  return static_cast<int>(parse_real(std::string_view(id).substr(1)));
}

retrieval::AgentFactory make_retrieval_factory(
    const RunConfig& cfg, std::shared_ptr<agent::AgentInterface> shared) {
  const std::uint64_t seed = cfg.seed;
  const std::string kind = cfg.agent.kind;
  return [seed, kind, shared](const retrieval::RetrievalObjective& objective,
                              int trial) -> std::unique_ptr<agent::AgentInterface> {
    if (shared) return std::make_unique<SharedAgentRef>(shared.get());
    if (kind == "scripted")
      return std::make_unique<sas::ScriptedImprover>(objective.score);
    return std::make_unique<sas::RandomIdAgent>(
        derive_seed(seed, {static_cast<std::uint64_t>(objective_index(objective.id)),
                           static_cast<std::uint64_t>(trial), 0x27E7}));
  };
}

std::vector<retrieval::RetrievalObjective> select_objectives(
    const std::vector<std::string>& wanted) {
  auto all = retrieval::standard_objectives();
  if (wanted.empty()) return all;
  std::vector<retrieval::RetrievalObjective> out;
  for (const auto& id : wanted) {
    const auto it = std::find_if(all.begin(), all.end(),
                                 [&](const auto& o) { return o.id == id; });
    if (it == all.end()) throw ArgumentError("unknown objective " + id);
    out.push_back(*it);
  }
  return out;
}

}  // namespace

int cmd_retrieve(const RunConfig& config, const fs::path& out_dir) {
  if (!config.retrieve) throw ArgumentError("config has no retrieve section");
  const RetrieveConfig& rc = *config.retrieve;
  fs::create_directories(out_dir);

  trace::TraceCache cache = rc.cache_gen ? generate_cache(*rc.cache_gen)
                                         : trace::cache_load(rc.cache_path);
  trace::cache_save(cache, out_dir / "cache.jsonl");

  const auto objectives = select_objectives(rc.objectives);
  const auto shared = make_shared_agent(config.agent);

  std::ofstream trials_out(out_dir / "trials.jsonl", std::ios::binary);
  if (!trials_out) throw IoError("cannot write trials.jsonl");
  const auto sink = [&](const std::string& id, int trial, const std::vector<int>& ids,
                        bool parse_failed) {
    json row;
    row["objective"] = id;
    row["trial"] = trial;
    row["best_ids"] = ids;
    row["parse_failed"] = parse_failed;
    trials_out << row.dump() << "\n";
  };

  const auto results = retrieval::evaluate_retrieval(
      make_retrieval_factory(config, shared), objectives, cache, rc.trials, {},
      effective_jobs(config), sink);
  trials_out.close();

  RunConfig snap = snapshot_config(config, out_dir);
  snap.retrieve->cache_path = "cache.jsonl";  // the cache is now materialized
  snap.retrieve->cache_gen.reset();
  write_file(out_dir / "config.json", snap.to_json());
  write_file(out_dir / "results.csv", retrieval::topk_to_csv(results));
  write_file(out_dir / "topk.svg",
             svg::topk_bars(results, "Retrieval accuracy by objective"));
  write_manifest(out_dir, "retrieve", {"config.json", "cache.jsonl", "trials.jsonl"});

  bool too_many_failures = false;
  for (const auto& r : results)
    if (r.parse_failures * 2 > r.trials) too_many_failures = true;
  if (too_many_failures)
    std::cerr << "error: an objective exceeded 50% parse failures\n";
  return too_many_failures ? 1 : 0;
}

// ---------- self-improve ----------

int cmd_self_improve(const RunConfig& config, const fs::path& out_dir) {
  if (!config.self_improve) throw ArgumentError("config has no self_improve section");
  const SelfImproveConfig& sc = *config.self_improve;
  fs::create_directories(out_dir);

  sim::EnvConfig env = sim::EnvConfig::sim_default();
  env.noise_sigma = sc.noise_sigma;

  const auto shared = make_shared_agent(config.agent);
  json repeats_json = json::array();
  std::vector<double> init_means, final_bests, final10_x, final10_y;
  std::vector<svg::LandingPoint> points;
  bool any_failed = false;

  std::string report_csv =
      "repeat,iteration,distance,landing_x,landing_y,peak_height,on_table,clamped,"
      "fallback";
  for (int i = 0; i < 8; ++i) report_csv += std::string(",") + trace::ParamVector::name(i);
  report_csv += "\n";

  for (int rep = 0; rep < sc.repeats; ++rep) {
    CacheGenConfig gen = sc.cache_gen;
    gen.seed = derive_seed(sc.cache_gen.seed, {static_cast<std::uint64_t>(rep)});
    trace::TraceCache cache = generate_cache(gen);

    std::unique_ptr<agent::AgentInterface> owned;
    agent::AgentInterface* impl = shared.get();
    if (impl == nullptr) {
      if (config.agent.kind == "scripted")
        owned = std::make_unique<sas::ScriptedImprover>(sc.goal, env.bounds);
      else
        owned = std::make_unique<sas::RandomIdAgent>(
            derive_seed(config.seed, {static_cast<std::uint64_t>(rep), 0x4A14}), env.bounds);
      impl = owned.get();
    }

    json seeds_json = json::array();
    for (const auto& t : cache.traces()) {
      seeds_json.push_back({t.landing.x, t.landing.y});
      points.push_back({t.landing.x, t.landing.y, 0});
    }

    const auto report = sas::self_improve(
        *impl, env, sc.goal, sc.objective_text, cache, sc.iterations,
        protocol::AgentLoopOptions{config.agent.endpoint.max_retries,
                                   derive_seed(config.seed, {static_cast<std::uint64_t>(rep), 0xFA11})},
        nullptr, derive_seed(config.seed, {static_cast<std::uint64_t>(rep), 0x4011}));

    any_failed |= report.failed;
    init_means.push_back(report.initial_mean_distance);
    if (!report.steps.empty()) final_bests.push_back(report.final_best_distance());
    const size_t tail =
        report.steps.size() > 10 ? report.steps.size() - 10 : size_t{0};
    for (size_t s = tail; s < report.steps.size(); ++s) {
      final10_x.push_back(report.steps[s].landing.x);
      final10_y.push_back(report.steps[s].landing.y);
    }
    for (const auto& s : report.steps)
      points.push_back({s.landing.x, s.landing.y, s.iteration});

    for (const auto& s : report.steps) {
      report_csv += std::to_string(rep) + "," + std::to_string(s.iteration) + "," +
                    format_fixed(s.distance, 6) + "," + format_fixed(s.landing.x, 6) +
                    "," + format_fixed(s.landing.y, 6) + "," +
                    format_fixed(s.landing.peak_height, 6) + "," +
                    (s.landing.on_table ? "1" : "0") + "," + (s.clamped ? "1" : "0") +
                    "," + (s.fallback ? "1" : "0");
      for (int i = 0; i < 8; ++i) report_csv += "," + format_fixed(s.proposal[i], 6);
      report_csv += "\n";
    }

    json rep_json = json::parse(report.to_json());
    rep_json["repeat"] = rep;
    rep_json["seed_landings"] = std::move(seeds_json);
    repeats_json.push_back(std::move(rep_json));
  }

  json report_json;
  report_json["aggregate"] = {
      {"mean_initial_distance",
       std::accumulate(init_means.begin(), init_means.end(), 0.0) / init_means.size()},
      {"mean_final_best_distance",
       final_bests.empty()
           ? json()
           : json(std::accumulate(final_bests.begin(), final_bests.end(), 0.0) /
                  final_bests.size())},
      {"median_final10_x", median(final10_x)},
      {"median_final10_y", median(final10_y)},
      {"final10_count", final10_x.size()}};
  report_json["repeats"] = std::move(repeats_json);

  const RunConfig snap = snapshot_config(config, out_dir);
  write_file(out_dir / "config.json", snap.to_json());
  write_file(out_dir / "report.json", report_json.dump(2) + "\n");
  write_file(out_dir / "report.csv", report_csv);
  write_file(out_dir / "landings.svg",
             svg::landing_scatter(points, env.table_half_width, env.table_depth,
                                  "Landing positions: " + sc.objective_text));
  write_manifest(out_dir, "self_improve", {"config.json", "report.json"});

  if (any_failed) std::cerr << "error: a repeat aborted on agent transport failure\n";
  return any_failed ? 1 : 0;
}

// ---------- report ----------

namespace {

void regenerate_bench(const fs::path& dir) {
  const RunConfig cfg = RunConfig::load(dir / "config.json");
  if (!cfg.bench) throw IoError("config.json in artifact has no bench section");

  std::vector<std::string> fn_names, opt_names;
  std::map<std::string, std::map<std::string, std::vector<json>>> rows;  // fn -> opt -> runs
  std::ifstream in(dir / "histories.jsonl");
  if (!in) throw IoError("missing file " + (dir / "histories.jsonl").string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto row = json::parse(line);
    const std::string fn = row.at("function"), opt = row.at("optimizer");
    if (std::find(fn_names.begin(), fn_names.end(), fn) == fn_names.end())
      fn_names.push_back(fn);
    if (std::find(opt_names.begin(), opt_names.end(), opt) == opt_names.end())
      opt_names.push_back(opt);
    rows[fn][opt].push_back(row);
  }

  optimizers::StatsTable table;
  table.function_names = fn_names;
  table.optimizer_names.push_back("Init f(x)");
  for (const auto& o : opt_names) table.optimizer_names.push_back(o);
  table.cells.assign(table.optimizer_names.size(),
                     std::vector<optimizers::StatsCell>(fn_names.size()));

  const auto stats_of = [](const std::vector<double>& vals) {
    optimizers::StatsCell c;
    c.trials = static_cast<int>(vals.size());
    if (vals.empty()) return c;
    c.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
    double sq = 0.0;
    for (double v : vals) sq += (v - c.mean) * (v - c.mean);
    c.stddev = std::sqrt(sq / vals.size());
    return c;
  };

  for (size_t fi = 0; fi < fn_names.size(); ++fi) {
    std::vector<double> init_vals;
    for (const auto& run : rows[fn_names[fi]][opt_names[0]])
      if (!run.at("f").empty()) init_vals.push_back(run.at("f")[0].get<double>());
    table.cells[0][fi] = stats_of(init_vals);
    for (size_t oi = 0; oi < opt_names.size(); ++oi) {
      std::vector<double> best;
      int failures = 0;
      for (const auto& run : rows[fn_names[fi]][opt_names[oi]]) {
        if (run.at("failed").get<bool>() || !run.contains("best_f")) {
          ++failures;
          continue;
        }
        best.push_back(run.at("best_f").get<double>());
      }
      auto cell = stats_of(best);
      cell.failures = failures;
      table.cells[oi + 1][fi] = cell;
    }
  }
  write_file(dir / "results.csv", table.to_csv());
  write_file(dir / "results.txt", table.to_text());
}

void regenerate_retrieve(const fs::path& dir) {
  std::ifstream in(dir / "trials.jsonl");
  if (!in) throw IoError("missing file " + (dir / "trials.jsonl").string());
  const auto cache = trace::cache_load(dir / "cache.jsonl");
  const auto all = retrieval::standard_objectives();

  std::map<std::string, std::vector<std::pair<std::vector<int>, bool>>> per_obj;
  std::vector<std::string> order;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto row = json::parse(line);
    const std::string id = row.at("objective");
    if (per_obj.find(id) == per_obj.end()) order.push_back(id);
    per_obj[id].emplace_back(row.at("best_ids").get<std::vector<int>>(),
                             row.at("parse_failed").get<bool>());
  }

  std::vector<retrieval::TopKResult> results;
  for (const auto& id : order) {
    const auto it = std::find_if(all.begin(), all.end(),
                                 [&](const auto& o) { return o.id == id; });
    if (it == all.end()) throw IoError("unknown objective in trials.jsonl: " + id);
    const int oracle_best = retrieval::oracle_rank(*it, cache).front();
    retrieval::TopKResult r;
    r.objective_id = id;
    for (const auto& [ids, failed] : per_obj[id]) {
      ++r.trials;
      if (failed) {
        ++r.parse_failures;
        continue;
      }
      const auto within = [&](size_t k) {
        const auto end = ids.begin() + static_cast<long>(std::min(ids.size(), k));
        return std::find(ids.begin(), end, oracle_best) != end;
      };
      r.top1 += within(1);
      r.top5 += within(5);
      r.top10 += within(10);
    }
    if (r.trials > 0) {
      r.top1 /= r.trials;
      r.top5 /= r.trials;
      r.top10 /= r.trials;
    }
    results.push_back(std::move(r));
  }
  write_file(dir / "results.csv", retrieval::topk_to_csv(results));
  write_file(dir / "topk.svg",
             svg::topk_bars(results, "Retrieval accuracy by objective"));
}

void regenerate_self_improve(const fs::path& dir) {
  const RunConfig cfg = RunConfig::load(dir / "config.json");
  if (!cfg.self_improve) throw IoError("config.json in artifact has no self_improve section");
  const auto report = json::parse(read_file(dir / "report.json"));

  std::string csv =
      "repeat,iteration,distance,landing_x,landing_y,peak_height,on_table,clamped,"
      "fallback";
  for (int i = 0; i < 8; ++i) csv += std::string(",") + trace::ParamVector::name(i);
  csv += "\n";
  std::vector<svg::LandingPoint> points;
  for (const auto& rep : report.at("repeats")) {
    const int rep_idx = rep.at("repeat").get<int>();
    for (const auto& s : rep.at("seed_landings"))
      points.push_back({s[0].get<double>(), s[1].get<double>(), 0});
    for (const auto& s : rep.at("steps")) {
      const auto& landing = s.at("landing");
      csv += std::to_string(rep_idx) + "," + std::to_string(s.at("iteration").get<int>()) +
             "," + format_fixed(s.at("distance").get<double>(), 6) + "," +
             format_fixed(landing.at("x").get<double>(), 6) + "," +
             format_fixed(landing.at("y").get<double>(), 6) + "," +
             format_fixed(landing.at("peak_height").get<double>(), 6) + "," +
             (landing.at("on_table").get<bool>() ? "1" : "0") + "," +
             (s.at("clamped").get<bool>() ? "1" : "0") + "," +
             (s.at("fallback").get<bool>() ? "1" : "0");
      for (const auto& p : s.at("params")) csv += "," + format_fixed(p.get<double>(), 6);
      csv += "\n";
      points.push_back({landing.at("x").get<double>(), landing.at("y").get<double>(),
                        s.at("iteration").get<int>()});
    }
  }
  write_file(dir / "report.csv", csv);
  const auto env = sim::EnvConfig::sim_default();
  write_file(dir / "landings.svg",
             svg::landing_scatter(points, env.table_half_width, env.table_depth,
                                  "Landing positions: " +
                                      cfg.self_improve->objective_text));
}

}  // namespace

int cmd_report(const fs::path& artifact_dir) {
  const auto manifest_path = artifact_dir / "manifest.json";
  const auto manifest = json::parse(read_file(manifest_path));
  const std::string command = manifest.at("command").get<std::string>();

  const auto raw_files = manifest.at("raw_files").get<std::vector<std::string>>();
  const std::string expected = manifest.at("content_hash").get<std::string>();
  const std::string actual = hash_raw_files(artifact_dir, raw_files);
  if (expected != actual)
    std::cerr << "warning: content hash mismatch between config and results; "
                 "rendering anyway\n";

  if (command == "bench") {
    regenerate_bench(artifact_dir);
  } else if (command == "retrieve") {
    regenerate_retrieve(artifact_dir);
  } else if (command == "self_improve") {
    regenerate_self_improve(artifact_dir);
  } else {
    throw IoError("manifest has unknown command " + command);
  }
  return 0;
}

}  // namespace agentopt::cli
