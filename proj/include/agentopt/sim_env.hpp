#pragma once

#include <array>
#include <optional>
#include <string>

#include "agentopt/rng.hpp"
#include "agentopt/trace.hpp"

namespace agentopt::sim {

using trace::ExecutionTrace;
using trace::LandingRecord;
using trace::ParamBounds;
using trace::ParamVector;
using trace::TraceCache;

/// Closed-form ballistic stand-in for the physical robot: the parameter
/// vector shifts the launch velocity through a fixed coupling matrix and the
/// ball then flies drag-free until it crosses the table plane.
///
/// Coordinate frame: origin at the net center on the table surface, +y
/// toward the opponent's side (far edge at y = table_depth), +x to the
/// robot's right, +z up.
struct EnvConfig {
  double table_half_width = 0.7625;
  double table_depth = 1.37;
  std::array<double, 3> launch_pos{0.0, -1.3, 0.25};
  std::array<double, 3> base_velocity{0.0, 4.0, 2.2};
  // rows: vx, vy, vz; columns: parameters a..h, applied to (theta - 1)
  std::array<std::array<double, 8>, 3> coupling{{
      {0.0, 0.0, 0.1, 0.0, 0.0, 0.0, 1.2, 0.4},
      {0.3, 0.0, 0.0, 1.0, 0.6, 0.0, 0.0, 0.0},
      {0.0, 0.8, 0.0, 0.0, 0.0, 0.5, 0.0, 0.2},
  }};
  double noise_sigma = 0.0;  // m/s, added to the launch velocity
  double gravity = 9.81;
  double dt = 0.02;
  ParamBounds bounds{0.5, 1.5};

  /// The pinned default profile used by tests and shipped experiment
  /// configs.
  static EnvConfig sim_default() { return EnvConfig{}; }
};

enum class GoalKind { Point, MaxX, MinX, MaxY, MaxPeak, MinPeak };

std::string goal_kind_name(GoalKind kind);
GoalKind goal_kind_from_name(const std::string& name);

/// What "better" means for a landing. Point goals carry a target; the other
/// kinds are open-ended directions scored so that lower is always better.
struct GoalSpec {
  GoalKind kind = GoalKind::MaxX;
  std::array<double, 2> target{0.0, 0.0};  // used iff kind == Point

  static GoalSpec point(double x, double y) {
    return {GoalKind::Point, {x, y}};
  }
  static GoalSpec direction(GoalKind kind) { return {kind, {0.0, 0.0}}; }
};

/// Rolls the ball out under the given parameters. Pure in (cfg, params, rng
/// state); with noise_sigma == 0 the rng is never consulted. Throws
/// ArgumentError when params violate cfg.bounds. The returned trace has
/// id == 0 until a cache assigns one.
ExecutionTrace rollout(const EnvConfig& cfg, const ParamVector& params, Rng& rng);

/// Lower-is-better score of a landing. Point: planar distance to target;
/// MaxX/MinX/MaxY: signed coordinate (negated where larger is better);
/// MaxPeak/MinPeak: signed peak height with an infinite penalty off table.
double distance_to_goal(const LandingRecord& landing, const GoalSpec& goal);

/// An axis-aligned box in parameter space.
struct ParamRegion {
  std::array<std::pair<double, double>, 8> range;

  static ParamRegion uniform(double lo, double hi);
  ParamVector sample(Rng& rng) const;
  bool inside(const ParamBounds& bounds) const;
};

/// n rollouts with parameters drawn uniformly from the region, appended to a
/// fresh cache in draw order.
TraceCache seed_cache(const EnvConfig& cfg, const ParamRegion& region, int n, Rng& rng);

// The biased seed regions used by the shipped self-improvement profiles:
// `left_biased_region` keeps the lateral parameter g low so every landing
// falls left of center; `lower_biased_region` keeps d and e low so landings
// stay in the lower half of the opponent's side.
ParamRegion left_biased_region();
ParamRegion lower_biased_region();

/// Reporting target for the "hit far right" profile; chosen so the mean
/// seed-cache landing of left_biased_region sits ~0.68 m away from it.
GoalSpec far_right_goal();

}  // namespace agentopt::sim
