#include <exception>
#include <iostream>
#include <string>

#include "agentopt/commands.hpp"
#include "agentopt/errors.hpp"

#include "CLI11.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  int jobs = 0;             // 0 = keep config value
  long long seed = -1;      // <0 = keep config value
  std::string agent_kind;   // empty = keep config value
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path, "run-config JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args->out_dir, "artifact output directory")->required();
  cmd->add_option("--jobs", args->jobs, "worker parallelism (overrides config)");
  cmd->add_option("--seed", args->seed, "master seed (overrides config)");
  cmd->add_option("--agent", args->agent_kind, "agent kind (overrides config)")
      ->check(CLI::IsMember({"http", "mock", "replay", "scripted"}));
}

agentopt::cli::RunConfig load_with_overrides(const CommonArgs& args) {
  auto cfg = agentopt::cli::RunConfig::load(args.config_path);
  if (args.jobs > 0) cfg.jobs = args.jobs;
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  if (!args.agent_kind.empty()) cfg.agent.kind = args.agent_kind;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-driven optimization and self-improvement harness"};
  app.require_subcommand(1);

  CommonArgs bench_args, retrieve_args, improve_args;
  std::string report_dir;

  auto* bench = app.add_subcommand(
      "bench", "compare baseline optimizers and the agent on benchmark functions");
  add_common(bench, &bench_args);
  auto* retrieve = app.add_subcommand(
      "retrieve", "score the agent's in-context retrieval against the oracle");
  add_common(retrieve, &retrieve_args);
  auto* improve = app.add_subcommand(
      "self-improve", "run the iterative parameter-synthesis loop");
  add_common(improve, &improve_args);
  auto* report = app.add_subcommand(
      "report", "regenerate tables and plots from a stored artifact");
  report->add_option("artifact", report_dir, "artifact directory")
      ->required()
      ->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench->parsed())
      return agentopt::cli::cmd_bench(load_with_overrides(bench_args),
                                      bench_args.out_dir);
    if (retrieve->parsed())
      return agentopt::cli::cmd_retrieve(load_with_overrides(retrieve_args),
                                         retrieve_args.out_dir);
    if (improve->parsed())
      return agentopt::cli::cmd_self_improve(load_with_overrides(improve_args),
                                             improve_args.out_dir);
    if (report->parsed()) return agentopt::cli::cmd_report(report_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
