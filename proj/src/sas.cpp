#include "agentopt/sas.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>

#include "agentopt/errors.hpp"
#include "agentopt/numfmt.hpp"

#include "json.hpp"

namespace agentopt::sas {

namespace {

constexpr std::string_view kSasSystemPrompt =
    "You are an expert assistant for analyzing and improving robot table tennis "
    "behavior. Follow the requested output format exactly.";

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

// strips markdown emphasis and list bullets before marker matching
std::string_view strip_decoration(std::string_view line) {
  line = trim(line);
  while (!line.empty() && (line.front() == '*' || line.front() == '#' ||
                           line.front() == '-' || line.front() == '>'))
    line.remove_prefix(1);
  return trim(line);
}

}  // namespace

std::string default_domain_description(const EnvConfig& cfg) {
  const std::string hw = format_trimmed(cfg.table_half_width, 4);
  const std::string depth = format_trimmed(cfg.table_depth, 4);
  std::string out;
  out += "Domain: robot table tennis. A ball launcher fires the ball at a robot arm; "
         "the arm returns it with a stroke controlled by eight attenuation parameters "
         "named a to h, each a multiplier in [" +
         format_trimmed(cfg.bounds.lo, 2) + ", " + format_trimmed(cfg.bounds.hi, 2) +
         "] applied to the low-level controller's actuator velocities.\n";
  out += "Coordinate frame: the origin is at the center of the net on the table "
         "surface. +y points toward the opponent's side, +x to the robot's right, +z "
         "up. All positions are in meters. The opponent's half of the table spans x in "
         "[-" + hw + ", " + hw + "] and y in [0, " + depth +
         "]; the far edge of the table is at y = " + depth +
         ". A return is 'On Table' when it lands inside that area.\n";
  out += "Each in-context example lists the parameters used, the landing position of "
         "the returned ball, and a time series of paddle and ball positions.";
  return out;
}

std::string build_sas_prompt(const SasPromptConfig& cfg, const TraceCache& cache) {
  if (cache.empty()) throw ArgumentError("cache must not be empty");
  if (cfg.max_examples < 1) throw ArgumentError("max_examples must be >= 1");
  if (cfg.objective_text.empty()) throw ArgumentError("objective_text must not be empty");

  std::string out = cfg.domain_description.empty()
                        ? default_domain_description(EnvConfig::sim_default())
                        : cfg.domain_description;
  out += "\n\nUser objective: " + cfg.objective_text + "\n\n";
  out += "Follow these steps and use the exact reply markers described below.\n";

  out += "Step 1: Summarize all in-context examples into a table";
  if (cfg.summary_columns.empty()) {
    out += "; choose the columns you find most informative";
  } else {
    out += " with columns: ";
    for (size_t i = 0; i < cfg.summary_columns.size(); ++i) {
      if (i > 0) out += ", ";
      out += cfg.summary_columns[i];
    }
  }
  out += ". Enclose the table in a fenced block delimited by ``` lines.\n";

  out += "Step 2: Identify the example or examples that best fulfil the user "
         "objective. Reply with one line of the form 'BEST: <up to 10 example ids, "
         "best first, comma-separated>'.\n";

  if (cfg.mode == Mode::Synthesize) {
    out += "Step 3: Analyze the impact of each variable a-h on the execution trace "
           "and the landing position, identifying correlations and dependencies. "
           "Write this analysis after a line reading 'ANALYSIS:'.\n";
    out += "Step 4: Propose a new parameter set that fulfils the user objective "
           "better than every example so far. Reply with one line of the form "
           "'PARAMS: a:<v> b:<v> c:<v> d:<v> e:<v> f:<v> g:<v> h:<v>', every value "
           "within [" +
           format_trimmed(cfg.bounds.lo, 2) + ", " + format_trimmed(cfg.bounds.hi, 2) +
           "], and justify your choice after a line reading 'JUSTIFICATION:'.\n";
  }

  out += "\nIn-context examples:\n\n";
  const size_t n = cache.size();
  const size_t first =
      n > static_cast<size_t>(cfg.max_examples) ? n - cfg.max_examples : 0;
  for (size_t i = first; i < n; ++i) {
    out += trace::render_trace(cache.traces()[i], cfg.render_precision);
    out += "\n";
  }
  return out;
}

namespace {

std::vector<int> parse_id_list(std::string_view rest) {
  std::vector<int> ids;
  std::string tok;
  const auto flush = [&] {
    if (tok.empty()) return;
    try {
      const double v = parse_real(tok);
      if (v == std::floor(v)) ids.push_back(static_cast<int>(v));
    } catch (const ParseError&) {
      // non-numeric fragments ("and", "Example") are skipped
    }
    tok.clear();
  };
  for (char c : rest) {
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      tok += c;
    } else {
      flush();
    }
  }
  flush();
  return ids;
}

}  // namespace

SasResponse parse_sas_response(const std::string& text, Mode mode,
                               const std::vector<int>& cache_ids,
                               const ParamBounds& bounds) {
  SasResponse out;
  const auto lines = split_lines(text);

  // fenced summary table
  {
    size_t fence_open = lines.size();
    for (size_t i = 0; i < lines.size(); ++i) {
      if (trim(lines[i]).starts_with("```")) {
        fence_open = i;
        break;
      }
    }
    if (fence_open < lines.size()) {
      std::vector<std::string> header;
      for (size_t i = fence_open + 1; i < lines.size(); ++i) {
        const auto raw = trim(lines[i]);
        if (raw.starts_with("```")) break;
        if (raw.empty()) continue;
        // cells: split on '|' when present, otherwise on whitespace
        std::vector<std::string> cells;
        if (raw.find('|') != std::string_view::npos) {
          size_t start = 0;
          while (start <= raw.size()) {
            size_t bar = raw.find('|', start);
            if (bar == std::string_view::npos) bar = raw.size();
            const auto cell = trim(raw.substr(start, bar - start));
            if (!cell.empty()) cells.emplace_back(cell);
            start = bar + 1;
          }
        } else {
          size_t start = 0;
          while (start < raw.size()) {
            while (start < raw.size() && std::isspace(static_cast<unsigned char>(raw[start])))
              ++start;
            size_t end = start;
            while (end < raw.size() && !std::isspace(static_cast<unsigned char>(raw[end])))
              ++end;
            if (end > start) cells.emplace_back(raw.substr(start, end - start));
            start = end;
          }
        }
        if (cells.empty()) continue;
        const bool separator = std::all_of(cells.begin(), cells.end(), [](const auto& c) {
          return c.find_first_not_of("-:=") == std::string::npos;
        });
        if (separator) continue;
        int id = 0;
        bool has_id = false;
        try {
          const double v = parse_real(cells[0]);
          if (v == std::floor(v)) {
            id = static_cast<int>(v);
            has_id = true;
          }
        } catch (const ParseError&) {
        }
        if (!has_id) {
          if (header.empty()) header = cells;  // column names
          continue;
        }
        std::map<std::string, std::string> features;
        for (size_t c = 1; c < cells.size(); ++c) {
          const std::string key =
              c < header.size() ? header[c] : "col" + std::to_string(c);
          features[key] = cells[c];
        }
        out.summary_rows.emplace_back(id, std::move(features));
      }
    }
  }

  bool saw_best = false;
  bool saw_params = false;
  enum class Section { None, Analysis, Justification };
  Section section = Section::None;
  std::string analysis, justification;

  for (const auto& raw_line : lines) {
    const auto line = strip_decoration(raw_line);
    if (starts_with_icase(line, "BEST:")) {
      saw_best = true;
      section = Section::None;
      auto ids = parse_id_list(line.substr(5));
      std::set<int> known(cache_ids.begin(), cache_ids.end());
      std::set<int> used;
      for (int id : ids) {
        if (known.count(id) == 0) {
          out.warnings.push_back("BEST id " + std::to_string(id) +
                                 " is not a cached example; dropped");
          continue;
        }
        if (!used.insert(id).second) continue;
        if (out.best_ids.size() >= 10) {
          out.warnings.push_back("BEST list truncated to 10 ids");
          break;
        }
        out.best_ids.push_back(id);
      }
      continue;
    }
    if (starts_with_icase(line, "ANALYSIS:")) {
      section = Section::Analysis;
      const auto rest = trim(line.substr(9));
      if (!rest.empty()) analysis += std::string(rest) + "\n";
      continue;
    }
    if (starts_with_icase(line, "JUSTIFICATION:")) {
      section = Section::Justification;
      const auto rest = trim(line.substr(14));
      if (!rest.empty()) justification += std::string(rest) + "\n";
      continue;
    }
    if (starts_with_icase(line, "PARAMS:")) {
      section = Section::None;
      saw_params = true;
      if (mode == Mode::RetrieveOnly) {
        out.warnings.push_back("PARAMS line ignored in retrieve-only mode");
        continue;
      }
      ParamVector p;
      bool seen[8] = {};
      const auto rest = line.substr(7);
      size_t i = 0;
      while (i < rest.size()) {
        while (i < rest.size() && (rest[i] == ' ' || rest[i] == ',')) ++i;
        size_t j = i;
        while (j < rest.size() && rest[j] != ' ' && rest[j] != ',') ++j;
        if (j > i) {
          const auto tok = rest.substr(i, j - i);
          const size_t colon = tok.find(':');
          if (colon == 1 && tok[0] >= 'a' && tok[0] <= 'h') {
            const int idx = trace::ParamVector::index(tok[0]);
            p[idx] = parse_real(tok.substr(2));
            seen[idx] = true;
          }
        }
        i = j;
      }
      for (int k = 0; k < 8; ++k)
        if (!seen[k])
          throw ParseError(std::string("PARAMS line is missing parameter ") +
                               trace::ParamVector::name(k),
                           text);
      bool clamped = false;
      p = bounds.clamp(p, &clamped);
      if (clamped)
        out.warnings.push_back("proposal clamped into bounds");
      out.proposal = p;
      out.proposal_clamped = clamped;
      continue;
    }
    if (section == Section::Analysis) {
      analysis += std::string(trim(raw_line)) + "\n";
    } else if (section == Section::Justification) {
      justification += std::string(trim(raw_line)) + "\n";
    }
  }

  while (!analysis.empty() && analysis.back() == '\n') analysis.pop_back();
  while (!justification.empty() && justification.back() == '\n') justification.pop_back();
  out.analysis = std::move(analysis);
  out.justification = std::move(justification);

  if (mode == Mode::RetrieveOnly && !saw_best)
    throw ParseError("reply has no BEST line", text);
  if (mode == Mode::Synthesize && (!saw_params || !out.proposal.has_value()))
    throw ParseError("reply has no PARAMS line", text);
  return out;
}

namespace {

std::string format_reminder(Mode mode) {
  std::string msg =
      "Format reminder: include a line 'BEST: <example ids, best first>'";
  if (mode == Mode::Synthesize)
    msg += ", a line 'PARAMS: a:<v> b:<v> c:<v> d:<v> e:<v> f:<v> g:<v> h:<v>' and a "
           "'JUSTIFICATION:' section";
  msg += ".";
  return msg;
}

}  // namespace

SasResponse exchange_sas(AgentInterface& agent, const std::string& prompt, Mode mode,
                         const std::vector<int>& cache_ids, const ParamBounds& bounds,
                         const AgentLoopOptions& opts, int* parse_failures) {
  agent::AgentTranscript transcript;
  transcript.begin_system(std::string(kSasSystemPrompt));
  transcript.add_harness(prompt);

  const auto send_once = [&]() -> std::string {
    for (int attempt = 0;; ++attempt) {
      try {
        return agent.send(transcript);
      } catch (const ReplayError& e) {
        throw TransportError(std::string("replay failure: ") + e.what());
      } catch (const TransportError&) {
        if (attempt >= opts.max_retries) throw;
      }
    }
  };

  std::string reply = send_once();
  transcript.add_agent(reply);
  for (int attempt = 0;; ++attempt) {
    try {
      return parse_sas_response(reply, mode, cache_ids, bounds);
    } catch (const ParseError&) {
      if (parse_failures != nullptr) ++(*parse_failures);
      if (attempt >= opts.max_retries) throw;
      transcript.add_harness(format_reminder(mode));
      reply = send_once();
      transcript.add_agent(reply);
    }
  }
}

SasResponse retrieve(AgentInterface& agent, const std::string& objective_text,
                     const TraceCache& cache, const AgentLoopOptions& opts,
                     const SasPromptConfig* base) {
  if (cache.empty()) throw ArgumentError("cache must not be empty");
  SasPromptConfig cfg = base != nullptr ? *base : SasPromptConfig{};
  cfg.objective_text = objective_text;
  cfg.mode = Mode::RetrieveOnly;
  const std::string prompt = build_sas_prompt(cfg, cache);
  return exchange_sas(agent, prompt, cfg.mode, cache.ids(), cfg.bounds, opts);
}

double ImprovementReport::final_best_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : steps) best = std::min(best, s.distance);
  return best;
}

std::vector<double> ImprovementReport::best_so_far() const {
  std::vector<double> out;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : steps) {
    best = std::min(best, s.distance);
    out.push_back(best);
  }
  return out;
}

std::string ImprovementReport::to_json() const {
  nlohmann::json j;
  j["initial_mean_distance"] = initial_mean_distance;
  j["failed"] = failed;
  if (!diagnostic.empty()) j["diagnostic"] = diagnostic;
  auto& steps_json = j["steps"] = nlohmann::json::array();
  for (const auto& s : steps) {
    steps_json.push_back({{"iteration", s.iteration},
                          {"params", s.proposal.v},
                          {"clamped", s.clamped},
                          {"fallback", s.fallback},
                          {"landing",
                           {{"x", s.landing.x},
                            {"y", s.landing.y},
                            {"z", s.landing.z},
                            {"on_table", s.landing.on_table},
                            {"peak_height", s.landing.peak_height}}},
                          {"distance", s.distance},
                          {"analysis", s.analysis},
                          {"justification", s.justification},
                          {"trace_id", s.trace_id}});
  }
  return j.dump(2);
}

std::string ImprovementReport::to_csv() const {
  std::string out =
      "iteration,distance,landing_x,landing_y,peak_height,on_table,clamped,fallback";
  for (int i = 0; i < 8; ++i) out += std::string(",") + trace::ParamVector::name(i);
  out += "\n";
  for (const auto& s : steps) {
    out += std::to_string(s.iteration) + "," + format_fixed(s.distance, 6) + "," +
           format_fixed(s.landing.x, 6) + "," + format_fixed(s.landing.y, 6) + "," +
           format_fixed(s.landing.peak_height, 6) + "," +
           (s.landing.on_table ? "1" : "0") + "," + (s.clamped ? "1" : "0") + "," +
           (s.fallback ? "1" : "0");
    for (int i = 0; i < 8; ++i) out += "," + format_fixed(s.proposal[i], 6);
    out += "\n";
  }
  return out;
}

ImprovementReport self_improve(AgentInterface& agent, const EnvConfig& env,
                               const GoalSpec& goal, const std::string& objective_text,
                               TraceCache& cache, int iterations,
                               const AgentLoopOptions& opts, const SasPromptConfig* base,
                               std::uint64_t rollout_seed) {
  if (iterations < 1) throw ArgumentError("iterations must be >= 1");
  if (cache.empty()) throw ArgumentError("cache must not be empty");

  SasPromptConfig cfg = base != nullptr ? *base : SasPromptConfig{};
  cfg.objective_text = objective_text;
  cfg.mode = Mode::Synthesize;
  if (cfg.domain_description.empty()) cfg.domain_description = default_domain_description(env);
  cfg.bounds = env.bounds;

  ImprovementReport report;
  {
    double sum = 0.0;
    for (const auto& t : cache.traces()) sum += distance_to_goal(t.landing, goal);
    report.initial_mean_distance = sum / static_cast<double>(cache.size());
  }

  for (int it = 1; it <= iterations; ++it) {
    const std::string prompt = build_sas_prompt(cfg, cache);
    ImprovementStep step;
    step.iteration = it;
    try {
      const SasResponse resp =
          exchange_sas(agent, prompt, cfg.mode, cache.ids(), cfg.bounds, opts);
      step.proposal = *resp.proposal;
      step.clamped = resp.proposal_clamped;
      step.analysis = resp.analysis;
      step.justification = resp.justification;
    } catch (const ParseError&) {
      // fallback: perturb the goal-best cached parameters
      const ExecutionTrace* best = &cache.traces().front();
      for (const auto& t : cache.traces())
        if (distance_to_goal(t.landing, goal) < distance_to_goal(best->landing, goal))
          best = &t;
      Rng rng(derive_seed(rollout_seed, {static_cast<std::uint64_t>(it), 0xFB}));
      ParamVector p = best->params;
      const double sigma = 0.1 * (cfg.bounds.hi - cfg.bounds.lo);
      for (int i = 0; i < 8; ++i) p[i] += rng.gaussian(0.0, sigma);
      p = cfg.bounds.clamp(p, &step.clamped);
      step.proposal = p;
      step.fallback = true;
    } catch (const TransportError& e) {
      report.failed = true;
      report.diagnostic = std::string("agent transport failure at iteration ") +
                          std::to_string(it) + ": " + e.what();
      return report;
    }

    Rng roll_rng(derive_seed(rollout_seed, {static_cast<std::uint64_t>(it), 0x5011}));
    ExecutionTrace t = rollout(env, step.proposal, roll_rng);
    step.trace_id = cache.append(std::move(t));
    const auto& stored = *cache.find(step.trace_id);
    step.landing = stored.landing;
    step.distance = distance_to_goal(stored.landing, goal);
    report.steps.push_back(std::move(step));
  }
  return report;
}

}  // namespace agentopt::sas
