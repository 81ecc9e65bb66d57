#include "agentopt/mock_agent.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "agentopt/errors.hpp"
#include "agentopt/numfmt.hpp"
#include "agentopt/numopt_protocol.hpp"
#include "agentopt/rng.hpp"

namespace agentopt::protocol {

using agent::AgentTranscript;
using agent::Role;

MockAgent::MockAgent(double domain_lo, double domain_hi, int dims, int budget,
                     std::uint64_t seed)
    : lo_(domain_lo), hi_(domain_hi), dims_(dims), budget_(budget), seed_(seed) {
  if (!(lo_ < hi_)) throw ArgumentError("domain_lo must be < domain_hi");
  if (dims_ < 1 || budget_ < 1) throw ArgumentError("dims and budget must be >= 1");
}

namespace {

// "x: v1, v2, ..., f(x): fv" seed line -> (x, f)
bool parse_seed_line(std::string_view line, int dims, std::vector<double>* x,
                     double* f) {
  const auto fpos = line.find(", f(x):");
  if (fpos == std::string_view::npos || !line.starts_with("x:")) return false;
  std::string_view xs = line.substr(2, fpos - 2);
  std::vector<double> vals;
  size_t start = 0;
  while (start < xs.size()) {
    size_t comma = xs.find(',', start);
    if (comma == std::string_view::npos) comma = xs.size();
    vals.push_back(parse_real(trim(xs.substr(start, comma - start))));
    start = comma + 1;
  }
  if (static_cast<int>(vals.size()) != dims) return false;
  *x = std::move(vals);
  *f = parse_real(trim(line.substr(fpos + 7)));
  return true;
}

}  // namespace

std::string MockAgent::send(const AgentTranscript& transcript) {
  int n_seeds = 0;
  std::vector<double> best_x(dims_, 0.0);
  double best_f = std::numeric_limits<double>::infinity();
  int improvements = 0;
  int completed = 0;  // proposals with f feedback received

  const auto observe = [&](const std::vector<double>& x, double f) {
    if (f < best_f) {
      if (std::isfinite(best_f)) ++improvements;
      best_f = f;
      best_x = x;
    }
  };

  std::vector<double> pending_x;
  for (const auto& m : transcript.messages()) {
    if (m.role == Role::Agent) {
      try {
        pending_x = parse_proposal(m.text, dims_).x;
      } catch (const ParseError&) {
        pending_x.clear();
      }
      continue;
    }
    if (m.role != Role::Harness) continue;
    if (m.text.starts_with("MAX_STEPS:")) {
      // seed block
      size_t start = 0;
      while (start < m.text.size()) {
        size_t nl = m.text.find('\n', start);
        if (nl == std::string::npos) nl = m.text.size();
        std::vector<double> x;
        double f = 0.0;
        if (parse_seed_line(trim(std::string_view(m.text).substr(start, nl - start)),
                            dims_, &x, &f)) {
          ++n_seeds;
          if (f < best_f) {  // seeds set the baseline without counting as improvements
            best_f = f;
            best_x = x;
          }
        }
        start = nl + 1;
      }
    } else if (m.text.starts_with("f(x):") && !pending_x.empty()) {
      size_t nl = m.text.find('\n');
      const double f =
          parse_real(trim(std::string_view(m.text).substr(5, nl - 5)));
      observe(pending_x, f);
      ++completed;
    }
    // format reminders and anything else carry no new information
  }

  const int proposals_total = std::max(1, budget_ - std::max(n_seeds, 1));
  const int t = completed;
  const double frac =
      proposals_total > 1 ? static_cast<double>(t) / (proposals_total - 1) : 1.0;
  const double p_explore = 0.5 + (0.05 - 0.5) * std::min(1.0, frac);

  Rng rng(derive_seed(seed_, {static_cast<std::uint64_t>(t), 0x30C4}));
  std::vector<double> x(dims_);
  std::string mode;
  if (!std::isfinite(best_f) || rng.uniform() < p_explore) {
    for (double& xi : x) xi = rng.uniform(lo_, hi_);
    mode = "Exploring the input space broadly to cover unseen regions";
  } else {
    const double sigma = 0.2 * (hi_ - lo_) / dims_ * std::pow(0.95, improvements);
    for (int i = 0; i < dims_; ++i) x[i] = best_x[i] + rng.gaussian(0.0, sigma);
    mode = "Exploiting the best point found so far with a small perturbation";
  }

  std::string reply = "x: ";
  for (int i = 0; i < dims_; ++i) {
    if (i > 0) reply += ", ";
    reply += format_fixed(x[i], 4);
  }
  reply += "\nExplanation: " + mode + " (iteration " + std::to_string(t + 1) + " of " +
           std::to_string(proposals_total) + ").";
  return reply;
}

}  // namespace agentopt::protocol
