#pragma once

#include <filesystem>

#include "agentopt/config.hpp"

namespace agentopt::cli {

// Each command runs one experiment and writes a self-contained artifact
// directory: the resolved config snapshot, the raw per-run data, the derived
// tables/plots and a manifest with a content hash. Re-running a command from
// its own config snapshot with a non-http agent reproduces the result files
// byte for byte; `report` re-derives tables and plots from the stored raw
// data without running anything.

int cmd_bench(const RunConfig& config, const std::filesystem::path& out_dir);
int cmd_retrieve(const RunConfig& config, const std::filesystem::path& out_dir);
int cmd_self_improve(const RunConfig& config, const std::filesystem::path& out_dir);
int cmd_report(const std::filesystem::path& artifact_dir);

}  // namespace agentopt::cli
