// Acceptance suite: every criterion prints one PASS/FAIL line. Run with no
// arguments for the full suite or with a criterion number (1..8) for one.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "agentopt/commands.hpp"
#include "agentopt/errors.hpp"
#include "agentopt/mock_agent.hpp"
#include "agentopt/numopt_protocol.hpp"
#include "agentopt/retrieval.hpp"
#include "agentopt/sas_agents.hpp"
#include "agentopt/trace.hpp"
#include "oracles.hpp"

using namespace agentopt;
namespace fs = std::filesystem;

namespace {

struct Check {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  template <typename T>
  void expect_le(T value, T limit, const std::string& what) {
    if (!(value <= limit)) {
      std::ostringstream ss;
      ss << what << " (got " << value << ", limit " << limit << ")";
      failures.push_back(ss.str());
    }
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("missing file " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("agentopt_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------- criterion 1

void criterion_benchfns(Check& c) {
  using namespace benchfns;
  for (const auto kind : {FnKind::Ackley, FnKind::Rastrigin, FnKind::Sphere})
    for (const int dims : {2, 8}) {
      const auto fn = make_benchmark(kind, dims, 1000 + dims);
      c.expect(std::fabs(evaluate(fn, fn.shift)) <= 1e-12,
               fn.name() + ": evaluate(shift) != 0");
      const auto f = [&](std::span<const double> x) { return evaluate(fn, x); };
      Rng rng(17);
      for (int t = 0; t < 100; ++t) {
        std::vector<double> x(dims);
        for (double& xi : x) xi = rng.uniform(fn.domain_lo, fn.domain_hi);
        const auto err =
            oracles::rel_gradient_error(gradient(fn, x), oracles::fd_gradient(f, x));
        if (err > 1e-6) {
          c.expect(false, fn.name() + ": gradient mismatch vs finite differences");
          break;
        }
      }
    }
}

// ---------------------------------------------------------------- criterion 2

void criterion_baseline_convergence(Check& c) {
  using namespace benchfns;
  using namespace optimizers;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto fn = make_benchmark(FnKind::Sphere, 2, derive_seed(seed, {1}));
    Rng rng(derive_seed(seed, {2}));
    const auto x0 = sample_initial(fn, rng);

    auto gd_cfg = OptimizerConfig::defaults(OptKind::Gd, 100);
    gd_cfg.hyperparams["lr"] = 0.1;
    c.expect(run_gd(fn, x0, gd_cfg).best().f < 1e-2,
             "GD (lr=0.1) missed 1e-2 on shifted 2D sphere");

    c.expect(run_adam(fn, x0, OptimizerConfig::defaults(OptKind::Adam, 100)).best().f <
                 1e-2,
             "Adam (defaults) missed 1e-2 on shifted 2D sphere");

    c.expect(run_nelder_mead(fn, x0, OptimizerConfig::defaults(OptKind::NelderMead, 100))
                     .best()
                     .f < 1e-4,
             "Nelder-Mead missed 1e-4 within 100 evaluations");
  }
}

// ---------------------------------------------------------------- criterion 3

void criterion_table_design(Check& c) {
  using namespace benchfns;
  using namespace optimizers;

  const int steps = 100, trials = 50;
  std::vector<BenchmarkFunction> fns = {
      make_benchmark(FnKind::Ackley, 2, 11), make_benchmark(FnKind::Rastrigin, 2, 12),
      make_benchmark(FnKind::Ackley, 8, 13), make_benchmark(FnKind::Rastrigin, 8, 14)};

  auto opts = baseline_matrix_optimizers(steps);
  opts.push_back(
      {"Agent", [steps](const BenchmarkFunction& fn, const std::vector<double>& x0,
                        std::uint64_t seed) {
         std::vector<EvalPoint> seeds = {{x0, evaluate(fn, x0)}};
         for (int i = 1; i < 3; ++i) {
           Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i), 0x5EED}));
           auto x = sample_initial(fn, rng);
           const double f = evaluate(fn, x);
           seeds.push_back({std::move(x), f});
         }
         protocol::MockAgent mock(fn.domain_lo, fn.domain_hi, fn.dims, steps,
                                  derive_seed(seed, {0xA6E7}));
         protocol::AgentLoopOptions loop;
         loop.fallback_seed = derive_seed(seed, {0xFB});
         return optimize_with_agent(mock, fn, seeds, steps, loop).history;
       }});

  const auto table = run_benchmark_matrix(fns, opts, trials, steps, 20260810, 2);

  c.expect(table.optimizer_names.size() == 6 && table.function_names.size() == 4,
           "table is not the full 6-row x 4-column layout");

  const auto row_index = [&](const std::string& name) {
    for (size_t r = 0; r < table.optimizer_names.size(); ++r)
      if (table.optimizer_names[r] == name) return r;
    throw ArgumentError("row missing: " + name);
  };

  // (a) every optimizer improves on the initial value in the mean
  for (size_t r = 1; r < table.optimizer_names.size(); ++r)
    for (size_t col = 0; col < table.function_names.size(); ++col)
      c.expect(table.cells[r][col].mean <= table.cells[0][col].mean + 1e-12,
               table.optimizer_names[r] + " mean exceeds Init on " +
                   table.function_names[col]);

  // (b) random search barely improves on 8D Rastrigin: within 10% of Init
  {
    const size_t col = 3;  // 8D Rastrigin
    const double init = table.cells[0][col].mean;
    const double rand = table.cells[row_index("Random-Search")][col].mean;
    c.expect(rand >= 0.9 * init,
             "random search improved more than 10% over Init on 8D Rastrigin (init " +
                 std::to_string(init) + ", random " + std::to_string(rand) +
                 "); uniform sampling over the +-5.12 harness domain cannot stay "
                 "within 10%");
  }

  // (c) the agent beats random search on every cell with shared starts
  for (size_t col = 0; col < table.function_names.size(); ++col) {
    const double agent = table.cells[row_index("Agent")][col].mean;
    const double rand = table.cells[row_index("Random-Search")][col].mean;
    c.expect(agent < rand, "agent does not beat random search on " +
                               table.function_names[col]);
  }
}

// ---------------------------------------------------------------- criterion 4

void criterion_protocol_golden(Check& c) {
  const fs::path golden_dir = fs::path(AGENTOPT_TEST_DATA_DIR) / "golden";
  c.expect(slurp(golden_dir / "numopt_system_prompt_100.txt") ==
               protocol::build_numopt_system_prompt(100),
           "system prompt drifted from its golden file");
  {
    sas::SasPromptConfig cfg;
    cfg.objective_text = "Hit to the top edge of the table";
    cfg.mode = sas::Mode::RetrieveOnly;
    Rng rng(3);
    const auto cache = sim::seed_cache(sim::EnvConfig::sim_default(),
                                       sim::left_biased_region(), 3, rng);
    c.expect(slurp(golden_dir / "sas_prompt_retrieve.txt") ==
                 sas::build_sas_prompt(cfg, cache),
             "retrieval prompt drifted from its golden file");
  }

  const auto proposal = protocol::parse_proposal(
      "Step: 0, x: -4.5\nExplanation: We observe a decreasing trend in f(x) as x "
      "increases.",
      1);
  c.expect(proposal.x == std::vector<double>{-4.5}, "specimen proposal x");
  c.expect(proposal.explanation.rfind("We observe", 0) == 0,
           "specimen proposal explanation");

  const std::string specimen =
      "Example 5:\n"
      "a:1.1 b:1.2 c:0.7 d:1.1 e:1.1 f:1.1 g:1.1 h:1.5 \n\n"
      "Landing Position:\n"
      "  x       y    z      On Table\n"
      "0.3207 0.7890 0.0143   True\n\n"
      "      paddle x  paddle y  paddle z  ball x  ball y ball z\n"
      "time                                                      \n"
      "1      0.2478   -1.1859    0.4236  0.2415  0.0619  0.2745\n"
      "2      0.2993   -1.2453    0.4059  0.2346 -0.1359  0.2134\n"
      "3      0.3417   -1.2889    0.3722  0.2184 -0.3311  0.1418\n"
      "4      0.3483   -1.3131    0.3347  0.2093 -0.5129  0.0451\n"
      "5      0.3317   -1.3254    0.3018  0.1884 -0.6759  ...\n";
  const auto t = trace::parse_trace(specimen);
  const std::array<double, 8> expect = {1.1, 1.2, 0.7, 1.1, 1.1, 1.1, 1.1, 1.5};
  for (int i = 0; i < 8; ++i)
    c.expect(std::fabs(t.params[i] - expect[i]) < 1e-12, "specimen trace params");
  c.expect(std::fabs(t.landing.x - 0.3207) < 1e-12 &&
               std::fabs(t.landing.y - 0.7890) < 1e-12 &&
               std::fabs(t.landing.z - 0.0143) < 1e-12 && t.landing.on_table,
           "specimen trace landing");
}

// ---------------------------------------------------------------- criterion 5

void criterion_retrieval_oracle(Check& c) {
  Rng rng(5);
  const auto cache = sim::seed_cache(sim::EnvConfig::sim_default(),
                                     sim::ParamRegion::uniform(0.5, 1.5), 100, rng);
  const auto objectives = retrieval::standard_objectives();

  {
    const retrieval::AgentFactory oracle_factory =
        [](const retrieval::RetrievalObjective& obj, int) {
          return std::make_unique<sas::ScriptedImprover>(obj.score);
        };
    const auto results =
        retrieval::evaluate_retrieval(oracle_factory, objectives, cache, 10, {}, 2);
    for (const auto& r : results)
      c.expect(r.top1 == 1.0 && r.top5 == 1.0 && r.top10 == 1.0,
               r.objective_id + ": oracle-backed agent must score 1.0 everywhere");
  }
  {
    const retrieval::AgentFactory random_factory =
        [](const retrieval::RetrievalObjective& obj, int trial) {
          return std::make_unique<sas::RandomIdAgent>(
              derive_seed(97, {static_cast<std::uint64_t>(obj.id.size()),
                               static_cast<std::uint64_t>(obj.id.back()),
                               static_cast<std::uint64_t>(trial)}));
        };
    const auto results =
        retrieval::evaluate_retrieval(random_factory, objectives, cache, 1000, {}, 2);
    for (const auto& r : results) {
      c.expect(r.top10 >= 0.07 && r.top10 <= 0.13,
               r.objective_id + ": random-id top10 " + std::to_string(r.top10) +
                   " outside [0.07, 0.13]");
      c.expect(r.top1 <= r.top5 && r.top5 <= r.top10,
               r.objective_id + ": top-k ordering violated");
    }
  }
}

// ---------------------------------------------------------------- criterion 6

void criterion_self_improvement(Check& c) {
  struct Profile {
    const char* name;
    sim::GoalSpec goal;
    sim::ParamRegion region;
    const char* objective;
    std::function<bool(double, double)> median_ok;
  };
  const std::vector<Profile> profiles = {
      {"S1", sim::GoalSpec::direction(sim::GoalKind::MaxX), sim::left_biased_region(),
       "Hit the ball as far right as possible!",
       [](double x, double) { return x > 0.3; }},
      {"S2", sim::GoalSpec::direction(sim::GoalKind::MaxY), sim::lower_biased_region(),
       "Hit the ball to the top edge!",
       [](double, double y) { return y > 1.0; }},
      {"S3", sim::GoalSpec::point(-0.7625, 1.37), sim::lower_biased_region(),
       "Hit the ball to the left corner!",
       [](double x, double y) { return x < -0.3 && y > 1.0; }},
  };

  const auto env = sim::EnvConfig::sim_default();
  for (const auto& profile : profiles) {
    std::vector<double> init_means, final_bests, tail_x, tail_y;
    for (int rep = 0; rep < 20; ++rep) {
      Rng cache_rng(derive_seed(31337, {static_cast<std::uint64_t>(rep),
                                        static_cast<std::uint64_t>(profile.name[1])}));
      auto cache = sim::seed_cache(env, profile.region, 24, cache_rng);
      sas::ScriptedImprover agent(profile.goal);
      const auto report = sas::self_improve(agent, env, profile.goal,
                                            profile.objective, cache, 30);
      init_means.push_back(report.initial_mean_distance);
      final_bests.push_back(report.final_best_distance());
      for (size_t s = report.steps.size() - 10; s < report.steps.size(); ++s) {
        tail_x.push_back(report.steps[s].landing.x);
        tail_y.push_back(report.steps[s].landing.y);
      }
    }
    const double init = mean_of(init_means), fin = mean_of(final_bests);
    c.expect(fin < 0.5 * init,
             std::string(profile.name) + ": mean final best " + std::to_string(fin) +
                 " not below half of mean initial " + std::to_string(init));
    const double mx = median_of(tail_x), my = median_of(tail_y);
    c.expect(profile.median_ok(mx, my),
             std::string(profile.name) + ": pooled median final-10 landing (" +
                 std::to_string(mx) + ", " + std::to_string(my) +
                 ") misses the directional target");
  }
}

// ---------------------------------------------------------------- criterion 7

void criterion_replay_fidelity(Check& c) {
  const fs::path fixture_dir(AGENTOPT_FIXTURE_DIR);
  {
    const auto out = fresh_dir("replay_retrieve");
    const auto cfg = cli::RunConfig::load(fixture_dir / "retrieve_replay.json");
    const int rc = cli::cmd_retrieve(cfg, out);
    c.expect(rc == 0, "cmd_retrieve over the fixture exited " + std::to_string(rc));
    c.expect(slurp(out / "results.csv") ==
                 slurp(fixture_dir / "retrieve_results_pinned.csv"),
             "replayed retrieval CSV differs from the pinned recording");
  }
  {
    const auto out = fresh_dir("replay_improve");
    const auto cfg = cli::RunConfig::load(fixture_dir / "self_improve_replay.json");
    const int rc = cli::cmd_self_improve(cfg, out);
    c.expect(rc == 0, "cmd_self_improve over the fixture exited " + std::to_string(rc));
    c.expect(slurp(out / "report.csv") ==
                 slurp(fixture_dir / "self_improve_report_pinned.csv"),
             "replayed self-improvement CSV differs from the pinned recording");
  }
}

// ---------------------------------------------------------------- criterion 8

void criterion_determinism(Check& c) {
  const auto compare_dirs = [&](const fs::path& a, const fs::path& b,
                                const std::string& what) {
    for (const auto& entry : fs::directory_iterator(a)) {
      const auto name = entry.path().filename().string();
      std::string lhs = slurp(a / name), rhs = slurp(b / name);
      if (name == "manifest.json") {
        const auto strip = [](std::string text) {
          const auto pos = text.find("\"created_at\"");
          if (pos == std::string::npos) return text;
          return text.substr(0, pos) + text.substr(text.find('\n', pos) + 1);
        };
        lhs = strip(lhs);
        rhs = strip(rhs);
      }
      c.expect(lhs == rhs, what + ": " + name + " differs between identical runs");
    }
  };

  {
    const auto cfg = cli::RunConfig::from_json_text(
        R"({"version":1,"seed":9,"agent":{"kind":"mock"},
            "bench":{"trials":2,"steps":10}})",
        ".");
    const auto a = fresh_dir("det_bench_a"), b = fresh_dir("det_bench_b");
    c.expect(cli::cmd_bench(cfg, a) == 0, "bench run failed");
    c.expect(cli::cmd_bench(cfg, b) == 0, "bench rerun failed");
    compare_dirs(a, b, "bench");
  }
  {
    const auto cfg = cli::RunConfig::from_json_text(
        R"({"version":1,"seed":9,"agent":{"kind":"mock"},
            "retrieve":{"cache_gen":{"region":"full","n":20,"seed":4},"trials":5}})",
        ".");
    const auto a = fresh_dir("det_retr_a"), b = fresh_dir("det_retr_b");
    c.expect(cli::cmd_retrieve(cfg, a) == 0, "retrieve run failed");
    c.expect(cli::cmd_retrieve(cfg, b) == 0, "retrieve rerun failed");
    compare_dirs(a, b, "retrieve");
  }
  {
    const auto cfg = cli::RunConfig::from_json_text(
        R"({"version":1,"seed":9,"agent":{"kind":"scripted"},
            "self_improve":{"goal":{"kind":"max_x"},
                            "objective_text":"Hit the ball as far right as possible!",
                            "cache_gen":{"region":"left","n":24,"seed":4},
                            "iterations":5,"repeats":2}})",
        ".");
    const auto a = fresh_dir("det_improve_a"), b = fresh_dir("det_improve_b");
    c.expect(cli::cmd_self_improve(cfg, a) == 0, "self-improve run failed");
    c.expect(cli::cmd_self_improve(cfg, b) == 0, "self-improve rerun failed");
    compare_dirs(a, b, "self-improve");
  }
}

// -----------------------------------------------------------------------------

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<void(Check&)> run;
};

const std::vector<Criterion> kCriteria = {
    {1, "benchmark-function correctness", 1.0, criterion_benchfns},
    {2, "baseline convergence oracle", 5.0, criterion_baseline_convergence},
    {3, "comparison-table design reproduction", 120.0, criterion_table_design},
    {4, "protocol golden files and specimens", 1.0, criterion_protocol_golden},
    {5, "retrieval oracle equivalence", 30.0, criterion_retrieval_oracle},
    {6, "self-improvement property suite", 60.0, criterion_self_improvement},
    {7, "replay fidelity", 10.0, criterion_replay_fidelity},
    {8, "artifact determinism", 120.0, criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failed = 0;
  for (const auto& criterion : kCriteria) {
    if (only != 0 && criterion.id != only) continue;
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > criterion.budget_seconds)
      check.failures.push_back("runtime " + std::to_string(elapsed) +
                               "s exceeds budget " +
                               std::to_string(criterion.budget_seconds) + "s");

    const bool ok = check.failures.empty();
    failed += ok ? 0 : 1;
    std::printf("[%d/8] %s %s (%.2f s)\n", criterion.id, ok ? "PASS" : "FAIL",
                criterion.name, elapsed);
    for (const auto& f : check.failures) std::printf("      - %s\n", f.c_str());
  }
  return failed == 0 ? 0 : 1;
}
