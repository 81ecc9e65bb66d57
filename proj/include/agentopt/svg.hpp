#pragma once

#include <string>
#include <vector>

#include "agentopt/retrieval.hpp"
#include "agentopt/trace.hpp"

namespace agentopt::svg {

/// One landing dot: seed points render translucent grey, improvement points
/// ramp from blue (early) to red (late).
struct LandingPoint {
  double x = 0, y = 0;
  int iteration = 0;  // 0 = seed example
};

/// Top-down view of the opponent's half with the landing points; byte-exact
/// deterministic output.
std::string landing_scatter(const std::vector<LandingPoint>& points,
                            double table_half_width, double table_depth,
                            const std::string& title);

/// Grouped per-objective bars for top-1/5/10 accuracy.
std::string topk_bars(const std::vector<retrieval::TopKResult>& results,
                      const std::string& title);

}  // namespace agentopt::svg
