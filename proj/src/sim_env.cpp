#include "agentopt/sim_env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "agentopt/errors.hpp"

namespace agentopt::sim {

std::string goal_kind_name(GoalKind kind) {
  switch (kind) {
    case GoalKind::Point: return "point";
    case GoalKind::MaxX: return "max_x";
    case GoalKind::MinX: return "min_x";
    case GoalKind::MaxY: return "max_y";
    case GoalKind::MaxPeak: return "max_peak";
    case GoalKind::MinPeak: return "min_peak";
  }
  return "?";
}

GoalKind goal_kind_from_name(const std::string& name) {
  if (name == "point") return GoalKind::Point;
  if (name == "max_x") return GoalKind::MaxX;
  if (name == "min_x") return GoalKind::MinX;
  if (name == "max_y") return GoalKind::MaxY;
  if (name == "max_peak") return GoalKind::MaxPeak;
  if (name == "min_peak") return GoalKind::MinPeak;
  throw ArgumentError("unknown goal kind: " + name);
}

namespace {

// The paddle columns are prompt texture only: a short canned forehand
// stroke, held at its final pose for longer flights.
constexpr double kStroke[5][3] = {{0.2478, -1.1859, 0.4236},
                                  {0.2993, -1.2453, 0.4059},
                                  {0.3417, -1.2889, 0.3722},
                                  {0.3483, -1.3131, 0.3347},
                                  {0.3317, -1.3254, 0.3018}};

}  // namespace

ExecutionTrace rollout(const EnvConfig& cfg, const ParamVector& params, Rng& rng) {
  if (!cfg.bounds.contains(params))
    throw ArgumentError("parameters outside bounds [" + std::to_string(cfg.bounds.lo) +
                        ", " + std::to_string(cfg.bounds.hi) + "]");
  if (cfg.dt <= 0.0) throw ArgumentError("dt must be > 0");
  if (cfg.noise_sigma < 0.0) throw ArgumentError("noise_sigma must be >= 0");

  std::array<double, 3> v = cfg.base_velocity;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 8; ++c) v[r] += cfg.coupling[r][c] * (params[c] - 1.0);
  if (cfg.noise_sigma > 0.0)
    for (double& vi : v) vi += rng.gaussian(0.0, cfg.noise_sigma);

  const double g = cfg.gravity;
  const auto [x0, y0, z0] = cfg.launch_pos;
  // z(t) = z0 + vz t - g t^2 / 2; landing at the positive root
  const double t_land = (v[2] + std::sqrt(v[2] * v[2] + 2.0 * g * z0)) / g;
  const double t_apex = v[2] > 0.0 ? v[2] / g : 0.0;

  ExecutionTrace t;
  t.params = params;

  const auto ball_at = [&](double s) {
    return std::array<double, 3>{x0 + v[0] * s, y0 + v[1] * s,
                                 z0 + v[2] * s - 0.5 * g * s * s};
  };

  // sample times: the dt grid up to landing, plus the apex so the row
  // maximum reproduces the closed-form peak exactly
  std::vector<double> times;
  for (double s = cfg.dt; s <= t_land + 1e-12; s += cfg.dt) times.push_back(s);
  if (t_apex > 0.0 && t_apex < t_land) {
    bool on_grid = false;
    for (double s : times) on_grid |= std::fabs(s - t_apex) < 1e-12;
    if (!on_grid) times.push_back(t_apex);
  }
  std::sort(times.begin(), times.end());
  if (times.empty()) times.push_back(t_land);

  for (size_t i = 0; i < times.size(); ++i) {
    const auto b = ball_at(times[i]);
    const auto& stroke = kStroke[std::min(i, size_t{4})];
    t.rows.push_back({static_cast<int>(i) + 1, stroke[0], stroke[1], stroke[2], b[0],
                      b[1], b[2]});
  }

  const auto land = ball_at(t_land);
  t.landing.x = land[0];
  t.landing.y = land[1];
  t.landing.z = 0.0;
  t.landing.on_table = std::fabs(land[0]) <= cfg.table_half_width && land[1] >= 0.0 &&
                       land[1] <= cfg.table_depth;
  t.landing.peak_height = v[2] > 0.0 ? z0 + v[2] * v[2] / (2.0 * g) : z0;
  return t;
}

double distance_to_goal(const LandingRecord& landing, const GoalSpec& goal) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (goal.kind) {
    case GoalKind::Point:
      return std::hypot(landing.x - goal.target[0], landing.y - goal.target[1]);
    case GoalKind::MaxX: return -landing.x;
    case GoalKind::MinX: return landing.x;
    case GoalKind::MaxY: return -landing.y;
    case GoalKind::MaxPeak: return landing.on_table ? -landing.peak_height : inf;
    case GoalKind::MinPeak: return landing.on_table ? landing.peak_height : inf;
  }
  throw ArgumentError("unreachable goal kind");
}

ParamRegion ParamRegion::uniform(double lo, double hi) {
  ParamRegion r;
  for (auto& range : r.range) range = {lo, hi};
  return r;
}

ParamVector ParamRegion::sample(Rng& rng) const {
  ParamVector p;
  for (int i = 0; i < 8; ++i) p[i] = rng.uniform(range[i].first, range[i].second);
  return p;
}

bool ParamRegion::inside(const ParamBounds& bounds) const {
  for (const auto& [lo, hi] : range)
    if (lo > hi || lo < bounds.lo || hi > bounds.hi) return false;
  return true;
}

TraceCache seed_cache(const EnvConfig& cfg, const ParamRegion& region, int n, Rng& rng) {
  if (n < 1) throw ArgumentError("n must be >= 1");
  if (!region.inside(cfg.bounds)) throw ArgumentError("region outside parameter bounds");
  TraceCache cache;
  for (int i = 0; i < n; ++i) cache.append(rollout(cfg, region.sample(rng), rng));
  return cache;
}

ParamRegion left_biased_region() {
  auto r = ParamRegion::uniform(0.9, 1.1);
  r.range[trace::ParamVector::index('g')] = {0.5, 0.8};
  return r;
}

ParamRegion lower_biased_region() {
  auto r = ParamRegion::uniform(0.9, 1.1);
  r.range[trace::ParamVector::index('d')] = {0.5, 0.75};
  r.range[trace::ParamVector::index('e')] = {0.8, 1.0};
  return r;
}

GoalSpec far_right_goal() { return GoalSpec::point(0.45, 0.87); }

}  // namespace agentopt::sim
