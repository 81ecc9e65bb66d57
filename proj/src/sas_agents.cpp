#include "agentopt/sas_agents.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "agentopt/errors.hpp"
#include "agentopt/numfmt.hpp"
#include "agentopt/rng.hpp"

namespace agentopt::sas {

namespace {

// the prompt to answer is the most recent harness message that actually
// carries examples (format reminders do not)
const std::string& latest_prompt(const agent::AgentTranscript& transcript) {
  const auto& messages = transcript.messages();
  for (auto it = messages.rbegin(); it != messages.rend(); ++it)
    if (it->role == agent::Role::Harness &&
        it->text.find("Example ") != std::string::npos)
      return it->text;
  throw ArgumentError("transcript holds no prompt with examples");
}

bool is_example_header(std::string_view line) {
  line = trim(line);
  if (!line.starts_with("Example ")) return false;
  return !line.empty() && line.back() == ':';
}

}  // namespace

std::vector<ExecutionTrace> extract_prompt_examples(const std::string& prompt) {
  std::vector<size_t> starts;
  size_t pos = 0;
  std::string_view sv(prompt);
  while (pos <= sv.size()) {
    size_t nl = sv.find('\n', pos);
    if (nl == std::string_view::npos) nl = sv.size();
    if (is_example_header(sv.substr(pos, nl - pos))) starts.push_back(pos);
    if (nl == sv.size()) break;
    pos = nl + 1;
  }
  std::vector<ExecutionTrace> out;
  for (size_t i = 0; i < starts.size(); ++i) {
    const size_t end = i + 1 < starts.size() ? starts[i + 1] : prompt.size();
    out.push_back(trace::parse_trace(prompt.substr(starts[i], end - starts[i])));
  }
  return out;
}

bool prompt_wants_params(const std::string& prompt) {
  return prompt.find("'PARAMS:") != std::string::npos;
}

ScriptedImprover::ScriptedImprover(GoalSpec goal, ParamBounds bounds)
    : scorer_([goal](const ExecutionTrace& t) {
        return sim::distance_to_goal(t.landing, goal);
      }),
      bounds_(bounds) {}

ScriptedImprover::ScriptedImprover(Scorer scorer, ParamBounds bounds)
    : scorer_(std::move(scorer)), bounds_(bounds) {}

std::string ScriptedImprover::send(const agent::AgentTranscript& transcript) {
  const auto examples = extract_prompt_examples(latest_prompt(transcript));
  if (examples.empty()) throw ArgumentError("prompt has no examples");
  const bool synthesize = prompt_wants_params(latest_prompt(transcript));
  const int n = static_cast<int>(examples.size());

  std::vector<double> scores(n);
  for (int i = 0; i < n; ++i) scores[i] = scorer_(examples[i]);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] < scores[b];
    return examples[a].id < examples[b].id;
  });

  std::string reply = "```\n";
  reply += "id | landing x | landing y | on table | peak height\n";
  for (const auto& t : examples) {
    reply += std::to_string(t.id) + " | " + format_fixed(t.landing.x, 4) + " | " +
             format_fixed(t.landing.y, 4) + " | " +
             (t.landing.on_table ? "True" : "False") + " | " +
             format_fixed(t.landing.peak_height, 4) + "\n";
  }
  reply += "```\n";

  reply += "BEST: ";
  const int top = std::min(10, n);
  for (int i = 0; i < top; ++i) {
    if (i > 0) reply += ", ";
    reply += std::to_string(examples[order[i]].id);
  }
  reply += "\n";

  if (!synthesize) return reply;

  // Pearson correlation of each parameter against the score
  std::array<double, 8> corr{};
  {
    // infinite scores (off-table penalties) are capped for a usable signal
    std::vector<double> s(scores);
    double worst_finite = 0.0;
    for (double v : s)
      if (std::isfinite(v)) worst_finite = std::max(worst_finite, std::fabs(v));
    for (double& v : s)
      if (!std::isfinite(v)) v = worst_finite * 2.0 + 1.0;
    const double mean_s = std::accumulate(s.begin(), s.end(), 0.0) / n;
    for (int p = 0; p < 8; ++p) {
      double mean_p = 0.0;
      for (const auto& t : examples) mean_p += t.params[p];
      mean_p /= n;
      double cov = 0.0, var_p = 0.0, var_s = 0.0;
      for (int i = 0; i < n; ++i) {
        const double dp = examples[i].params[p] - mean_p;
        const double ds = s[i] - mean_s;
        cov += dp * ds;
        var_p += dp * dp;
        var_s += ds * ds;
      }
      corr[p] = (var_p > 1e-18 && var_s > 1e-18) ? cov / std::sqrt(var_p * var_s) : 0.0;
    }
  }

  std::array<int, 8> by_strength{};
  std::iota(by_strength.begin(), by_strength.end(), 0);
  std::sort(by_strength.begin(), by_strength.end(), [&](int a, int b) {
    if (std::fabs(corr[a]) != std::fabs(corr[b]))
      return std::fabs(corr[a]) > std::fabs(corr[b]);
    return a < b;
  });

  reply += "ANALYSIS:\n";
  for (int p : by_strength) {
    reply += std::string(1, trace::ParamVector::name(p)) + ": correlation " +
             format_fixed(corr[p], 3) + " with the objective score; " +
             (corr[p] < 0 ? "larger values move the outcome toward the objective"
                          : "smaller values move the outcome toward the objective") +
             ".\n";
  }

  const ParamVector& best = examples[order[0]].params;
  const auto already_tried = [&](const ParamVector& cand) {
    for (const auto& t : examples) {
      bool same = true;
      for (int i = 0; i < 8 && same; ++i)
        same = std::fabs(t.params[i] - cand[i]) < 1e-9;
      if (same) return true;
    }
    return false;
  };

  ParamVector proposal = best;
  int chosen = by_strength[0];
  double step = corr[chosen] < 0 ? 0.1 : -0.1;
  bool found = false;
  for (int pass = 0; pass < 2 && !found; ++pass) {
    for (int p : by_strength) {
      const double dir = (corr[p] < 0 ? 0.1 : -0.1) * (pass == 0 ? 1.0 : -1.0);
      ParamVector cand = best;
      cand[p] = std::min(bounds_.hi, std::max(bounds_.lo, cand[p] + dir));
      if (!already_tried(cand)) {
        proposal = cand;
        chosen = p;
        step = dir;
        found = true;
        break;
      }
    }
  }
  if (!found) {
    proposal = best;
    proposal[chosen] =
        std::min(bounds_.hi, std::max(bounds_.lo, proposal[chosen] + 0.1));
  }

  reply += "PARAMS:";
  for (int i = 0; i < 8; ++i)
    reply += std::string(" ") + trace::ParamVector::name(i) + ":" +
             format_fixed(proposal[i], 4);
  reply += "\nJUSTIFICATION:\n";
  reply += std::string("Starting from example ") +
           std::to_string(examples[order[0]].id) +
           ", the strongest remaining lever is parameter " +
           std::string(1, trace::ParamVector::name(chosen)) + "; stepping it by " +
           format_fixed(step, 1) +
           " should move the landing further toward the objective than any example "
           "so far.\n";
  return reply;
}

RandomIdAgent::RandomIdAgent(std::uint64_t seed, ParamBounds bounds)
    : seed_(seed), bounds_(bounds) {}

std::string RandomIdAgent::send(const agent::AgentTranscript& transcript) {
  const std::string& prompt = latest_prompt(transcript);
  // only the ids are needed; scan the headers instead of parsing full traces
  std::vector<int> ids;
  std::string_view sv(prompt);
  size_t pos = 0;
  while (pos <= sv.size()) {
    size_t nl = sv.find('\n', pos);
    if (nl == std::string_view::npos) nl = sv.size();
    const auto line = trim(sv.substr(pos, nl - pos));
    if (is_example_header(line))
      ids.push_back(static_cast<int>(parse_real(trim(line.substr(8, line.size() - 9)))));
    if (nl == sv.size()) break;
    pos = nl + 1;
  }
  if (ids.empty()) throw ArgumentError("prompt has no examples");

  Rng rng(derive_seed(seed_, {calls_++}));
  // partial Fisher-Yates: first k entries become a uniform sample without
  // replacement
  const int k = std::min<int>(10, static_cast<int>(ids.size()));
  for (int i = 0; i < k; ++i) {
    const int j = rng.uniform_int(i, static_cast<int>(ids.size()) - 1);
    std::swap(ids[i], ids[j]);
  }

  std::string reply = "BEST: ";
  for (int i = 0; i < k; ++i) {
    if (i > 0) reply += ", ";
    reply += std::to_string(ids[i]);
  }
  reply += "\n";
  if (prompt_wants_params(prompt)) {
    reply += "ANALYSIS:\nNo clear pattern stands out.\nPARAMS:";
    for (int i = 0; i < 8; ++i)
      reply += std::string(" ") + trace::ParamVector::name(i) + ":" +
               format_fixed(rng.uniform(bounds_.lo, bounds_.hi), 4);
    reply += "\nJUSTIFICATION:\nTrying a fresh draw across the parameter range.\n";
  }
  return reply;
}

}  // namespace agentopt::sas
