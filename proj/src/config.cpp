#include "agentopt/config.hpp"

#include <fstream>

#include "agentopt/errors.hpp"

#include "json.hpp"

namespace agentopt::cli {

namespace {

using nlohmann::json;

std::string resolve_path(const std::string& p, const std::filesystem::path& base) {
  if (p.empty()) return p;
  std::filesystem::path fp(p);
  if (fp.is_absolute()) return fp.string();
  return (base / fp).lexically_normal().string();
}

AgentConfig parse_agent(const json& j, const std::filesystem::path& base) {
  AgentConfig a;
  a.kind = j.value("kind", a.kind);
  if (a.kind != "mock" && a.kind != "http" && a.kind != "replay" && a.kind != "scripted")
    throw ArgumentError("agent.kind must be one of mock, http, replay, scripted");
  a.fixture = resolve_path(j.value("fixture", ""), base);
  a.fixture_mode = j.value("fixture_mode", a.fixture_mode);
  if (a.fixture_mode != "strict" && a.fixture_mode != "lenient")
    throw ArgumentError("agent.fixture_mode must be strict or lenient");
  if (j.contains("endpoint")) {
    const auto& e = j.at("endpoint");
    a.endpoint.base_url = e.value("base_url", "");
    a.endpoint.model_id = e.value("model_id", "");
    a.endpoint.api_key_env_var = e.value("api_key_env_var", a.endpoint.api_key_env_var);
    a.endpoint.completions_path =
        e.value("completions_path", a.endpoint.completions_path);
    a.endpoint.timeout = std::chrono::milliseconds(e.value("timeout_ms", 30000));
    a.endpoint.max_retries = e.value("max_retries", a.endpoint.max_retries);
    a.endpoint.temperature = e.value("temperature", a.endpoint.temperature);
    a.endpoint.requests_per_minute =
        e.value("requests_per_minute", a.endpoint.requests_per_minute);
  }
  if (a.kind == "replay" && a.fixture.empty())
    throw ArgumentError("replay agent needs agent.fixture");
  if (a.kind == "http" && a.endpoint.base_url.empty())
    throw ArgumentError("http agent needs agent.endpoint.base_url");
  return a;
}

CacheGenConfig parse_cache_gen(const json& j) {
  CacheGenConfig c;
  c.region = j.value("region", c.region);
  if (c.region != "full" && c.region != "left" && c.region != "lower")
    throw ArgumentError("cache_gen.region must be full, left or lower");
  c.n = j.value("n", c.n);
  if (c.n < 1) throw ArgumentError("cache_gen.n must be >= 1");
  c.seed = j.value("seed", c.seed);
  c.noise_sigma = j.value("noise_sigma", c.noise_sigma);
  return c;
}

}  // namespace

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json_text(text, path.parent_path());
}

RunConfig RunConfig::from_json_text(const std::string& text,
                                    const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig cfg;
  cfg.version = j.value("version", 1);
  if (cfg.version != 1)
    throw ArgumentError("unsupported config version " + std::to_string(cfg.version));
  cfg.seed = j.value("seed", cfg.seed);
  cfg.jobs = j.value("jobs", cfg.jobs);
  if (cfg.jobs < 1) throw ArgumentError("jobs must be >= 1");
  if (j.contains("agent")) cfg.agent = parse_agent(j.at("agent"), base_dir);

  int sections = 0;
  if (j.contains("bench")) {
    ++sections;
    const auto& b = j.at("bench");
    BenchConfig bc;
    if (b.contains("functions")) {
      for (const auto& f : b.at("functions")) {
        BenchConfig::Function fn;
        fn.kind = benchfns::kind_from_name(f.at("kind").get<std::string>());
        fn.dims = f.at("dims").get<int>();
        if (f.contains("shift_seed"))
          fn.shift_seed = f.at("shift_seed").get<std::uint64_t>();
        fn.domain_lo = f.value("domain_lo", fn.domain_lo);
        fn.domain_hi = f.value("domain_hi", fn.domain_hi);
        bc.functions.push_back(fn);
      }
    } else {
      bc.functions = {{benchfns::FnKind::Ackley, 2},
                      {benchfns::FnKind::Rastrigin, 2},
                      {benchfns::FnKind::Ackley, 8},
                      {benchfns::FnKind::Rastrigin, 8}};
    }
    bc.optimizers = b.value("optimizers",
                            std::vector<std::string>{"gd", "adam", "nelder-mead",
                                                     "random-search", "agent"});
    bc.trials = b.value("trials", bc.trials);
    bc.steps = b.value("steps", bc.steps);
    bc.agent_seeds = b.value("agent_seeds", bc.agent_seeds);
    if (bc.trials < 1 || bc.steps < 1) throw ArgumentError("bench trials/steps must be >= 1");
    if (bc.agent_seeds < 1) throw ArgumentError("bench.agent_seeds must be >= 1");
    cfg.bench = std::move(bc);
  }
  if (j.contains("retrieve")) {
    ++sections;
    const auto& r = j.at("retrieve");
    RetrieveConfig rc;
    rc.objectives = r.value("objectives", std::vector<std::string>{});
    rc.cache_path = resolve_path(r.value("cache_path", ""), base_dir);
    if (r.contains("cache_gen")) rc.cache_gen = parse_cache_gen(r.at("cache_gen"));
    rc.trials = r.value("trials", rc.trials);
    if (rc.trials < 1) throw ArgumentError("retrieve.trials must be >= 1");
    if (rc.cache_path.empty() == !rc.cache_gen.has_value())
      throw ArgumentError("retrieve needs exactly one of cache_path or cache_gen");
    cfg.retrieve = std::move(rc);
  }
  if (j.contains("self_improve")) {
    ++sections;
    const auto& s = j.at("self_improve");
    SelfImproveConfig sc;
    const auto& g = s.at("goal");
    sc.goal.kind = sim::goal_kind_from_name(g.at("kind").get<std::string>());
    if (sc.goal.kind == sim::GoalKind::Point) {
      const auto& t = g.at("target");
      sc.goal.target = {t.at(0).get<double>(), t.at(1).get<double>()};
    } else if (g.contains("target")) {
      throw ArgumentError("goal.target is only valid for point goals");
    }
    sc.objective_text = s.at("objective_text").get<std::string>();
    if (sc.objective_text.empty()) throw ArgumentError("objective_text must not be empty");
    sc.cache_gen = parse_cache_gen(s.at("cache_gen"));
    sc.iterations = s.value("iterations", sc.iterations);
    if (sc.iterations < 1) throw ArgumentError("self_improve.iterations must be >= 1");
    sc.repeats = s.value("repeats", sc.repeats);
    if (sc.repeats < 1) throw ArgumentError("self_improve.repeats must be >= 1");
    sc.env_profile = s.value("env_profile", sc.env_profile);
    if (sc.env_profile != "sim-default")
      throw ArgumentError("unknown env_profile " + sc.env_profile);
    sc.noise_sigma = s.value("noise_sigma", sc.noise_sigma);
    cfg.self_improve = std::move(sc);
  }
  if (sections != 1)
    throw ArgumentError("config must contain exactly one of bench, retrieve, "
                        "self_improve; found " +
                        std::to_string(sections));
  return cfg;
}

std::string RunConfig::to_json() const {
  json j;
  j["version"] = version;
  j["seed"] = seed;
  j["jobs"] = jobs;
  json a;
  a["kind"] = agent.kind;
  if (!agent.fixture.empty()) {
    a["fixture"] = agent.fixture;
    a["fixture_mode"] = agent.fixture_mode;
  }
  if (agent.kind == "http") {
    a["endpoint"] = {{"base_url", agent.endpoint.base_url},
                     {"model_id", agent.endpoint.model_id},
                     {"api_key_env_var", agent.endpoint.api_key_env_var},
                     {"completions_path", agent.endpoint.completions_path},
                     {"timeout_ms", agent.endpoint.timeout.count()},
                     {"max_retries", agent.endpoint.max_retries},
                     {"temperature", agent.endpoint.temperature},
                     {"requests_per_minute", agent.endpoint.requests_per_minute}};
  }
  j["agent"] = std::move(a);

  if (bench) {
    json b;
    b["functions"] = json::array();
    for (const auto& f : bench->functions) {
      json fj = {{"kind", benchfns::kind_name(f.kind)}, {"dims", f.dims}};
      if (f.shift_seed) fj["shift_seed"] = *f.shift_seed;
      fj["domain_lo"] = f.domain_lo;
      fj["domain_hi"] = f.domain_hi;
      b["functions"].push_back(std::move(fj));
    }
    b["optimizers"] = bench->optimizers;
    b["trials"] = bench->trials;
    b["steps"] = bench->steps;
    b["agent_seeds"] = bench->agent_seeds;
    j["bench"] = std::move(b);
  }
  if (retrieve) {
    json r;
    if (!retrieve->objectives.empty()) r["objectives"] = retrieve->objectives;
    if (!retrieve->cache_path.empty()) r["cache_path"] = retrieve->cache_path;
    if (retrieve->cache_gen) {
      const auto& c = *retrieve->cache_gen;
      r["cache_gen"] = {{"region", c.region},
                        {"n", c.n},
                        {"seed", c.seed},
                        {"noise_sigma", c.noise_sigma}};
    }
    r["trials"] = retrieve->trials;
    j["retrieve"] = std::move(r);
  }
  if (self_improve) {
    json s;
    json g;
    g["kind"] = sim::goal_kind_name(self_improve->goal.kind);
    if (self_improve->goal.kind == sim::GoalKind::Point)
      g["target"] = {self_improve->goal.target[0], self_improve->goal.target[1]};
    s["goal"] = std::move(g);
    s["objective_text"] = self_improve->objective_text;
    s["cache_gen"] = {{"region", self_improve->cache_gen.region},
                      {"n", self_improve->cache_gen.n},
                      {"seed", self_improve->cache_gen.seed},
                      {"noise_sigma", self_improve->cache_gen.noise_sigma}};
    s["iterations"] = self_improve->iterations;
    s["repeats"] = self_improve->repeats;
    s["env_profile"] = self_improve->env_profile;
    s["noise_sigma"] = self_improve->noise_sigma;
    j["self_improve"] = std::move(s);
  }
  return j.dump(2) + "\n";
}

}  // namespace agentopt::cli
