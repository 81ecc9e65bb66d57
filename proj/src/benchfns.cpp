#include "agentopt/benchfns.hpp"

#include <cmath>
#include <numbers>

#include "agentopt/errors.hpp"

namespace agentopt::benchfns {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_dims(const BenchmarkFunction& fn, std::span<const double> x) {
  if (static_cast<int>(x.size()) != fn.dims)
    throw ArgumentError("dimension mismatch: function has " + std::to_string(fn.dims) +
                        " dims, point has " + std::to_string(x.size()));
}

}  // namespace

std::string kind_name(FnKind kind) {
  switch (kind) {
    case FnKind::Ackley: return "Ackley";
    case FnKind::Rastrigin: return "Rastrigin";
    case FnKind::Sphere: return "Sphere";
  }
  return "?";
}

FnKind kind_from_name(const std::string& name) {
  if (name == "Ackley" || name == "ackley") return FnKind::Ackley;
  if (name == "Rastrigin" || name == "rastrigin") return FnKind::Rastrigin;
  if (name == "Sphere" || name == "sphere") return FnKind::Sphere;
  throw ArgumentError("unknown benchmark function: " + name);
}

std::string BenchmarkFunction::name() const {
  return std::to_string(dims) + "D " + kind_name(kind);
}

BenchmarkFunction make_benchmark(FnKind kind, int dims, std::uint64_t shift_seed,
                                 double shift_range, double domain_lo, double domain_hi) {
  if (dims < 1) throw ArgumentError("dims must be >= 1");
  if (!(domain_lo < domain_hi)) throw ArgumentError("domain_lo must be < domain_hi");
  BenchmarkFunction fn;
  fn.kind = kind;
  fn.dims = dims;
  fn.domain_lo = domain_lo;
  fn.domain_hi = domain_hi;
  Rng rng(shift_seed);
  fn.shift.resize(dims);
  for (double& s : fn.shift) s = rng.uniform(-shift_range, shift_range);
  return fn;
}

double evaluate(const BenchmarkFunction& fn, std::span<const double> x) {
  check_dims(fn, x);
  const int d = fn.dims;
  switch (fn.kind) {
    case FnKind::Sphere: {
      double sum = 0.0;
      for (int i = 0; i < d; ++i) {
        const double z = x[i] - fn.shift[i];
        sum += z * z;
      }
      return sum;
    }
    case FnKind::Rastrigin: {
      double sum = 10.0 * d;
      for (int i = 0; i < d; ++i) {
        const double z = x[i] - fn.shift[i];
        sum += z * z - 10.0 * std::cos(kTwoPi * z);
      }
      return sum;
    }
    case FnKind::Ackley: {
      double sq = 0.0, cs = 0.0;
      for (int i = 0; i < d; ++i) {
        const double z = x[i] - fn.shift[i];
        sq += z * z;
        cs += std::cos(kTwoPi * z);
      }
      return -20.0 * std::exp(-0.2 * std::sqrt(sq / d)) - std::exp(cs / d) + 20.0 +
             std::numbers::e;
    }
  }
  throw ArgumentError("unreachable function kind");
}

std::vector<double> gradient(const BenchmarkFunction& fn, std::span<const double> x) {
  check_dims(fn, x);
  const int d = fn.dims;
  std::vector<double> g(d, 0.0);
  switch (fn.kind) {
    case FnKind::Sphere:
      for (int i = 0; i < d; ++i) g[i] = 2.0 * (x[i] - fn.shift[i]);
      break;
    case FnKind::Rastrigin:
      for (int i = 0; i < d; ++i) {
        const double z = x[i] - fn.shift[i];
        g[i] = 2.0 * z + 10.0 * kTwoPi * std::sin(kTwoPi * z);
      }
      break;
    case FnKind::Ackley: {
      double sq = 0.0, cs = 0.0;
      for (int i = 0; i < d; ++i) {
        const double z = x[i] - fn.shift[i];
        sq += z * z;
        cs += std::cos(kTwoPi * z);
      }
      const double r = std::sqrt(sq / d);
      const double ecs = std::exp(cs / d);
      for (int i = 0; i < d; ++i) {
        const double z = x[i] - fn.shift[i];
        // r == 0 only at the minimum, where the gradient is zero anyway.
        const double envelope = r > 0.0 ? 4.0 * std::exp(-0.2 * r) * z / (d * r) : 0.0;
        g[i] = envelope + ecs * kTwoPi * std::sin(kTwoPi * z) / d;
      }
      break;
    }
  }
  return g;
}

std::vector<double> sample_initial(const BenchmarkFunction& fn, Rng& rng) {
  std::vector<double> x(fn.dims);
  for (double& xi : x) xi = rng.uniform(fn.domain_lo, fn.domain_hi);
  return x;
}

}  // namespace agentopt::benchfns
