#pragma once

#include <span>
#include <string>
#include <vector>

#include "agentopt/rng.hpp"

namespace agentopt::benchfns {

enum class FnKind { Ackley, Rastrigin, Sphere };

std::string kind_name(FnKind kind);
FnKind kind_from_name(const std::string& name);

/// A shifted benchmark objective. All three functions have their global
/// minimum value 0 at x == shift:
///
///   Ackley     f(z) = -20 exp(-0.2 sqrt(mean z_i^2)) - exp(mean cos 2*pi*z_i) + 20 + e
///   Rastrigin  f(z) = 10 d + sum(z_i^2 - 10 cos 2*pi*z_i)
///   Sphere     f(z) = sum z_i^2
///
/// with z = x - shift. The shift defeats optimizers that guess the origin.
struct BenchmarkFunction {
  FnKind kind = FnKind::Sphere;
  int dims = 1;
  std::vector<double> shift;      // length == dims
  double domain_lo = -5.12;      // per-coordinate sampling bounds
  double domain_hi = 5.12;

  std::string name() const;  // e.g. "2D Ackley"
};

/// Builds a function whose shift is drawn uniformly from +-shift_range per
/// coordinate using the given seed.
BenchmarkFunction make_benchmark(FnKind kind, int dims, std::uint64_t shift_seed,
                                 double shift_range = 2.0, double domain_lo = -5.12,
                                 double domain_hi = 5.12);

/// f(x - shift). Throws ArgumentError on dimension mismatch.
double evaluate(const BenchmarkFunction& fn, std::span<const double> x);

/// Analytic gradient of evaluate at x.
std::vector<double> gradient(const BenchmarkFunction& fn, std::span<const double> x);

/// Uniform per-coordinate sample in [domain_lo, domain_hi].
std::vector<double> sample_initial(const BenchmarkFunction& fn, Rng& rng);

/// One observed point, as shown to an optimizer agent.
struct EvalPoint {
  std::vector<double> x;
  double f = 0.0;
};

}  // namespace agentopt::benchfns
