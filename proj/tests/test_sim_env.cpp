#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "agentopt/errors.hpp"
#include "agentopt/sim_env.hpp"

using namespace agentopt;
using namespace agentopt::sim;
using trace::ParamVector;

namespace {

ParamVector ones() { return ParamVector{}; }

ExecutionTrace roll(const EnvConfig& env, const ParamVector& p, std::uint64_t seed = 0) {
  Rng rng(seed);
  return rollout(env, p, rng);
}

}  // namespace

TEST_CASE("neutral parameters follow the closed-form flight") {
  const EnvConfig env = EnvConfig::sim_default();
  const auto t = roll(env, ones());

  const double vz = 2.2, vy = 4.0, g = 9.81, z0 = 0.25;
  const double t_land = (vz + std::sqrt(vz * vz + 2.0 * g * z0)) / g;
  CHECK(t.landing.x == 0.0);
  CHECK(t.landing.y == doctest::Approx(-1.3 + vy * t_land).epsilon(1e-12));
  CHECK(t.landing.z == 0.0);
  CHECK(t.landing.on_table);

  // kinematic identities
  CHECK(t.landing.peak_height == doctest::Approx(z0 + vz * vz / (2 * g)).epsilon(1e-12));
  double max_z = 0.0;
  for (const auto& r : t.rows) max_z = std::max(max_z, r.ball_z);
  CHECK(std::fabs(max_z - t.landing.peak_height) <= 1e-9);

  // row times are a strictly increasing 1-based index
  for (size_t i = 0; i < t.rows.size(); ++i)
    CHECK(t.rows[i].time == static_cast<int>(i) + 1);
}

TEST_CASE("raising the g parameter pushes the landing right") {
  const EnvConfig env = EnvConfig::sim_default();
  const double base_x = roll(env, ones()).landing.x;
  ParamVector p = ones();
  p[ParamVector::index('g')] += 0.5;
  CHECK(roll(env, p).landing.x > base_x);
}

TEST_CASE("landing x is strictly increasing in g over the whole range") {
  const EnvConfig env = EnvConfig::sim_default();
  double prev = -1e9;
  for (int k = 0; k <= 20; ++k) {
    ParamVector p = ones();
    p[ParamVector::index('g')] = std::min(1.5, 0.5 + 0.05 * k);
    const double x = roll(env, p).landing.x;
    CHECK(x > prev);
    prev = x;
  }
}

TEST_CASE("noise-free rollouts are identical; seeded noise is reproducible") {
  EnvConfig env = EnvConfig::sim_default();
  const auto a = roll(env, ones(), 1);
  const auto b = roll(env, ones(), 2);
  CHECK(a.landing.x == b.landing.x);
  CHECK(a.landing.y == b.landing.y);

  env.noise_sigma = 0.05;
  const auto n1 = roll(env, ones(), 7);
  const auto n2 = roll(env, ones(), 7);
  const auto n3 = roll(env, ones(), 8);
  CHECK(n1.landing.x == n2.landing.x);
  CHECK(n1.landing.y != n3.landing.y);
}

TEST_CASE("parameters outside bounds are rejected") {
  const EnvConfig env = EnvConfig::sim_default();
  ParamVector p = ones();
  p[0] = 0.2;
  Rng rng(0);
  CHECK_THROWS_AS((void)rollout(env, p, rng), ArgumentError);
}

TEST_CASE("distance_to_goal covers every goal kind") {
  LandingRecord landing{0.511, 0.790, 0.0, true, 0.6};
  CHECK(distance_to_goal(landing, GoalSpec::point(0.511, 0.790)) == doctest::Approx(0.0));
  CHECK(distance_to_goal(landing, GoalSpec::direction(GoalKind::MaxX)) ==
        doctest::Approx(-0.511));
  CHECK(distance_to_goal(landing, GoalSpec::direction(GoalKind::MinX)) ==
        doctest::Approx(0.511));
  CHECK(distance_to_goal(landing, GoalSpec::direction(GoalKind::MaxY)) ==
        doctest::Approx(-0.790));
  CHECK(distance_to_goal(landing, GoalSpec::direction(GoalKind::MaxPeak)) ==
        doctest::Approx(-0.6));
  CHECK(distance_to_goal(landing, GoalSpec::direction(GoalKind::MinPeak)) ==
        doctest::Approx(0.6));

  landing.on_table = false;
  CHECK(std::isinf(distance_to_goal(landing, GoalSpec::direction(GoalKind::MaxPeak))));
  CHECK(std::isinf(distance_to_goal(landing, GoalSpec::direction(GoalKind::MinPeak))));
}

TEST_CASE("the far-right goal sits ~0.677 m from the left-region center landing") {
  const EnvConfig env = EnvConfig::sim_default();
  ParamVector center = ones();
  center[ParamVector::index('g')] = 0.65;  // midpoint of the biased g range
  const auto t = roll(env, center);
  const double d = distance_to_goal(t.landing, far_right_goal());
  CHECK(std::fabs(d - 0.677) <= 0.01);
}

TEST_CASE("seed_cache: size, degenerate region, left bias") {
  const EnvConfig env = EnvConfig::sim_default();
  {
    Rng rng(3);
    const auto cache = seed_cache(env, left_biased_region(), 24, rng);
    CHECK(cache.size() == 24);
    for (const auto& t : cache.traces()) CHECK(t.landing.x < 0.0);
  }
  {
    ParamRegion point = ParamRegion::uniform(1.0, 1.0);
    Rng rng(4);
    const auto cache = seed_cache(env, point, 5, rng);
    for (const auto& t : cache.traces()) {
      CHECK(t.landing.x == cache.traces()[0].landing.x);
      CHECK(t.landing.y == cache.traces()[0].landing.y);
    }
  }
  {
    Rng rng(5);
    const auto cache = seed_cache(env, lower_biased_region(), 100, rng);
    double mean_y = 0.0;
    for (const auto& t : cache.traces()) mean_y += t.landing.y;
    mean_y /= 100.0;
    CHECK(mean_y < env.table_depth / 2.0);  // biased toward the lower half
  }
}

TEST_CASE("on-table landings stay inside the table rectangle") {
  const EnvConfig env = EnvConfig::sim_default();
  Rng rng(11);
  const auto region = ParamRegion::uniform(0.5, 1.5);
  for (int i = 0; i < 200; ++i) {
    const auto t = roll(env, region.sample(rng), i);
    if (!t.landing.on_table) continue;
    CHECK(std::fabs(t.landing.x) <= env.table_half_width);
    CHECK(t.landing.y >= 0.0);
    CHECK(t.landing.y <= env.table_depth);
  }
}

TEST_CASE("region validation") {
  const EnvConfig env = EnvConfig::sim_default();
  ParamRegion bad = ParamRegion::uniform(0.0, 2.0);
  Rng rng(0);
  CHECK_THROWS_AS((void)seed_cache(env, bad, 5, rng), ArgumentError);
  CHECK_THROWS_AS((void)seed_cache(env, left_biased_region(), 0, rng), ArgumentError);
}
