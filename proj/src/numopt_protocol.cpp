#include "agentopt/numopt_protocol.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "agentopt/errors.hpp"
#include "agentopt/numfmt.hpp"

namespace agentopt::protocol {

namespace {

constexpr std::string_view kSystemPromptTemplate =
    "You are an expert optimization assistant, helping me find the global minimum of a "
    "mathematical function. I will give you the function evaluation f(x) and the current "
    "iteration number at each step. Your goal is to propose input values 'x' that "
    "efficiently lead us to the global minimum within a limited number of iterations "
    "(MAX_STEPS).\n"
    "\n"
    "Here's how we'll interact:\n"
    "1. I will first provide MAX_STEPS along with a few training examples of the form "
    "'x, f(x)'.\n"
    "2. You will provide your response in the following exact format:\n"
    "    * Line 1: a new input 'x: ', aiming to minimize the function's value f(x,y).\n"
    "    * Line 2: a brief explanation of why you chose that input in one sentence, "
    "considering the current iteration.\n"
    "3. I will then provide the function's value f(x) at your suggested point, and the "
    "current iteration.\n"
    "4. We will repeat steps 2-3 until we reach the maximum number of iterations.\n"
    "\n"
    "Remember:\n"
    "* **Assume no prior knowledge about the function's specific form.**\n"
    "* **Balance Exploitation and Exploration:** Early on, explore the input space "
    "broadly. As iterations increase, focus more on promising regions based on observed "
    "f(x) values.\n"
    "* **Be adaptable:** Your approach might need to change based on the function's "
    "behavior and the remaining iterations. If you suspect a local minimum or slow "
    "progress for too long, try more exploratory values and then exploit any promising "
    "findings based on your understanding of the function.\n";

std::string render_vector(std::span<const double> x, int decimals = 4) {
  std::string out;
  for (size_t i = 0; i < x.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_fixed(x[i], decimals);
  }
  return out;
}

}  // namespace

std::string build_numopt_system_prompt(int max_steps) {
  if (max_steps < 1) throw ArgumentError("max_steps must be >= 1");
  std::string prompt(kSystemPromptTemplate);
  const std::string steps = std::to_string(max_steps);
  size_t pos = 0;
  while ((pos = prompt.find("MAX_STEPS", pos)) != std::string::npos) {
    prompt.replace(pos, 9, steps);
    pos += steps.size();
  }
  return prompt;
}

std::string build_step_message(const RunHistory& history, int iteration,
                               std::span<const EvalPoint> seeds, int max_steps) {
  if (iteration < 0) throw ArgumentError("iteration must be >= 0");
  if (iteration == 0) {
    std::string msg = "MAX_STEPS: " + std::to_string(max_steps) + "\n";
    msg += "Here are a few training examples of the form 'x, f(x)':\n";
    for (const auto& s : seeds)
      msg += "x: " + render_vector(s.x) + ", f(x): " + format_fixed(s.f, 4) + "\n";
    return msg;
  }
  if (history.records.empty())
    throw ArgumentError("step message for iteration >= 1 needs a history");
  const auto& last = history.records.back();
  return "f(x): " + format_fixed(last.f, 4) + "\niteration: " + std::to_string(iteration) +
         "\n";
}

namespace {

bool is_number_start(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
}

// Pulls leading real-number tokens out of `rest`; stops at the first token
// that is not a number. Tolerates separating commas and trailing periods.
std::vector<double> leading_reals(std::string_view rest) {
  std::vector<double> vals;
  size_t i = 0;
  while (i < rest.size()) {
    while (i < rest.size() && (rest[i] == ' ' || rest[i] == '\t' || rest[i] == ','))
      ++i;
    if (i >= rest.size() || !is_number_start(rest[i])) break;
    size_t j = i;
    while (j < rest.size() && rest[j] != ' ' && rest[j] != '\t' && rest[j] != ',') ++j;
    std::string_view tok = rest.substr(i, j - i);
    while (!tok.empty() && (tok.back() == '.' || tok.back() == ';')) tok.remove_suffix(1);
    vals.push_back(parse_real(tok));  // throws on junk / non-finite
    i = j;
  }
  return vals;
}

// Locates "x:" (or "X:") used as a label, i.e. preceded by start-of-line,
// whitespace, ',' or ';'. Returns npos when absent.
size_t find_x_label(std::string_view line) {
  for (size_t i = 0; i + 1 < line.size(); ++i) {
    if ((line[i] == 'x' || line[i] == 'X')) {
      size_t k = i + 1;
      while (k < line.size() && (line[k] == ' ' || line[k] == '\t')) ++k;
      if (k < line.size() && line[k] == ':') {
        if (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t' || line[i - 1] == ',' ||
            line[i - 1] == ';' || line[i - 1] == '*')
          return k + 1;  // position just after the colon
      }
    }
  }
  return std::string_view::npos;
}

bool starts_with_icase(std::string_view line, std::string_view prefix) {
  if (line.size() < prefix.size()) return false;
  for (size_t i = 0; i < prefix.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(line[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i])))
      return false;
  return true;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= text.size()) {
    const size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

}  // namespace

Proposal parse_proposal(const std::string& text, int dims) {
  if (dims < 1) throw ArgumentError("dims must be >= 1");
  const auto lines = split_lines(text);

  Proposal p;
  bool have_x = false;
  size_t x_line_idx = 0;
  for (size_t li = 0; li < lines.size() && !have_x; ++li) {
    const std::string_view line = trim(lines[li]);
    if (starts_with_icase(line, "explanation:")) break;  // x must come before it
    const size_t after = find_x_label(line);
    std::vector<double> vals;
    if (after != std::string_view::npos) {
      vals = leading_reals(line.substr(after));
    } else if (dims == 1 && !line.empty() && is_number_start(line[0])) {
      // 1-D replies are allowed to be a bare number
      try {
        vals.push_back(parse_real(line));
      } catch (const ParseError&) {
        continue;
      }
    } else {
      continue;
    }
    if (vals.empty()) continue;
    if (static_cast<int>(vals.size()) != dims)
      throw ArityError("expected " + std::to_string(dims) + " values, got " +
                           std::to_string(vals.size()),
                       text);
    p.x = std::move(vals);
    have_x = true;
    x_line_idx = li;
  }
  if (!have_x) throw ParseError("no 'x:' line in agent reply", text);

  for (size_t li = x_line_idx; li < lines.size(); ++li) {
    const std::string_view line = trim(lines[li]);
    if (starts_with_icase(line, "explanation:")) {
      std::string expl(trim(line.substr(std::string_view("explanation:").size())));
      for (size_t k = li + 1; k < lines.size(); ++k) {
        expl += '\n';
        expl += lines[k];
      }
      while (!expl.empty() && (expl.back() == '\n' || expl.back() == ' ')) expl.pop_back();
      p.explanation = std::move(expl);
      break;
    }
  }
  return p;
}

namespace {

std::string format_reminder(int dims) {
  return "Format reminder: reply with exactly two lines. Line 1: 'x: ' followed by " +
         std::to_string(dims) +
         " comma-separated numbers. Line 2: 'Explanation: ' followed by one sentence.";
}

}  // namespace

AgentRunResult optimize_with_agent(AgentInterface& agent, const BenchmarkFunction& fn,
                                   std::span<const EvalPoint> seeds, int steps,
                                   const AgentLoopOptions& opts) {
  if (steps < 1) throw ArgumentError("steps must be >= 1");
  if (seeds.empty()) throw ArgumentError("at least one seed point is required");

  AgentRunResult out;
  RunHistory& h = out.history;
  for (const auto& s : seeds) {
    if (static_cast<int>(h.records.size()) >= steps) break;
    h.records.push_back(
        {static_cast<int>(h.records.size()), s.x, s.f, "seed", false});
  }
  out.transcript.begin_system(build_numopt_system_prompt(steps));

  Rng fallback_rng(derive_seed(opts.fallback_seed, {0xFA11}));
  const double span = fn.domain_hi - fn.domain_lo;

  const auto send_with_retries = [&](std::string* reply) {
    for (int attempt = 0;; ++attempt) {
      try {
        *reply = agent.send(out.transcript);
        return true;
      } catch (const ReplayError& e) {
        // a desynced fixture never recovers; abort immediately
        h.failed = true;
        h.diagnostic = std::string("replay failure: ") + e.what();
        return false;
      } catch (const TransportError& e) {
        if (attempt >= opts.max_retries) {
          h.failed = true;
          h.diagnostic = std::string("agent transport failure: ") + e.what();
          return false;
        }
      }
    }
  };

  int iteration = 0;
  while (static_cast<int>(h.records.size()) < steps) {
    out.transcript.add_harness(build_step_message(h, iteration, seeds, steps));
    std::string reply;
    if (!send_with_retries(&reply)) return out;
    out.transcript.add_agent(reply);

    Proposal proposal;
    bool parsed = false;
    bool fallback = false;
    for (int attempt = 0; !parsed; ++attempt) {
      try {
        proposal = parse_proposal(reply, fn.dims);
        parsed = true;
      } catch (const ParseError&) {
        ++out.parse_failures;
        if (attempt >= opts.max_retries) {
          fallback = true;
          break;
        }
        out.transcript.add_harness(format_reminder(fn.dims));
        if (!send_with_retries(&reply)) return out;
        out.transcript.add_agent(reply);
      }
    }
    if (fallback) {
      const auto& best = h.best().x;
      proposal.x.assign(best.begin(), best.end());
      for (double& xi : proposal.x) xi += fallback_rng.gaussian(0.0, 0.1 * span);
      proposal.explanation = "fallback: perturbed best-known point";
      ++out.fallbacks;
    }
    const double f = benchfns::evaluate(fn, proposal.x);
    h.records.push_back({static_cast<int>(h.records.size()), std::move(proposal.x), f,
                         std::move(proposal.explanation), fallback});
    ++iteration;
  }
  return out;
}

}  // namespace agentopt::protocol
