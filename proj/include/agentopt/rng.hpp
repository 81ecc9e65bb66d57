#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace agentopt {

/// Seeded random source with portable output.
///
/// mt19937_64 is bit-exact across platforms, but the standard distributions
/// are not, so the uniform/gaussian mappings are done here by hand. Every
/// random decision in the project flows through this class so that a run is
/// fully determined by its seeds.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] (inclusive), rejection-free modulo bias is
  /// negligible for the small ranges used here.
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(gen_() % span);
  }

  /// Standard Box-Muller with a cached spare.
  double gaussian(double mean = 0.0, double sigma = 1.0) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + sigma * spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(two_pi * u2);
    has_spare_ = true;
    return mean + sigma * r * std::cos(two_pi * u2);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finalizer; used to derive independent child seeds.
inline std::uint64_t mix_u64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Deterministic child seed for a (master seed, path) pair. Workers for
/// trial t of cell c use derive_seed(master, {c, t}); no two paths collide
/// in practice and no shared generator state is needed.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix_u64(master);
  for (std::uint64_t p : path) h = mix_u64(h ^ (p + 0x9e3779b97f4a7c15ull));
  return h;
}

}  // namespace agentopt
