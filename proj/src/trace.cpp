#include "agentopt/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "agentopt/errors.hpp"
#include "agentopt/numfmt.hpp"

#include "json.hpp"

namespace agentopt::trace {

int ParamVector::index(char name) {
  if (name < 'a' || name > 'h') throw ArgumentError(std::string("unknown parameter ") + name);
  return name - 'a';
}

bool ParamBounds::contains(const ParamVector& p) const {
  return std::all_of(p.v.begin(), p.v.end(),
                     [&](double x) { return std::isfinite(x) && x >= lo && x <= hi; });
}

ParamVector ParamBounds::clamp(const ParamVector& p, bool* clamped) const {
  ParamVector out = p;
  bool moved = false;
  for (double& x : out.v) {
    const double c = std::min(hi, std::max(lo, x));
    if (c != x) moved = true;
    x = c;
  }
  if (clamped != nullptr) *clamped = moved;
  return out;
}

namespace {

void validate_trace(const ExecutionTrace& t) {
  if (t.rows.empty()) throw ArgumentError("trace has no rows");
  int prev = 0;
  for (const auto& r : t.rows) {
    if (r.time <= prev)
      throw ArgumentError("row times must be strictly increasing from 1");
    prev = r.time;
    for (double v : {r.paddle_x, r.paddle_y, r.paddle_z, r.ball_x, r.ball_y, r.ball_z})
      if (!std::isfinite(v)) throw ArgumentError("non-finite value in trace row");
  }
  for (double v : t.params.v)
    if (!std::isfinite(v)) throw ArgumentError("non-finite parameter");
  if (t.landing.peak_height < t.landing.z - 1e-9)
    throw ArgumentError("peak height below landing height");
}

}  // namespace

int TraceCache::append(ExecutionTrace t) {
  validate_trace(t);
  t.id = static_cast<int>(traces_.size()) + 1;
  traces_.push_back(std::move(t));
  return traces_.back().id;
}

const ExecutionTrace* TraceCache::find(int id) const {
  if (id < 1 || id > static_cast<int>(traces_.size())) return nullptr;
  return &traces_[static_cast<size_t>(id) - 1];
}

std::vector<int> TraceCache::ids() const {
  std::vector<int> out(traces_.size());
  for (size_t i = 0; i < traces_.size(); ++i) out[i] = traces_[i].id;
  return out;
}

namespace {

std::string pad_left(const std::string& s, size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

constexpr const char* kSeriesColumns[6] = {"paddle x", "paddle y", "paddle z",
                                           "ball x",   "ball y",   "ball z"};

}  // namespace

std::string render_trace(const ExecutionTrace& t, int precision) {
  if (precision < 1 || precision > 6)
    throw ArgumentError("precision must lie in [1, 6]");

  std::string out = "Example " + std::to_string(t.id) + ":\n";
  for (int i = 0; i < ParamVector::size(); ++i) {
    if (i > 0) out += ' ';
    out += ParamVector::name(i);
    out += ':';
    out += format_trimmed(t.params[i], precision);
  }
  out += "\n\nLanding Position:\n";
  out += "  x      y      z      On Table\n";
  out += format_fixed(t.landing.x, precision) + " " + format_fixed(t.landing.y, precision) +
         " " + format_fixed(t.landing.z, precision) + "   " +
         (t.landing.on_table ? "True" : "False") + "\n";

  out += "\n";
  out += pad_right("", 4);
  for (const char* col : kSeriesColumns) out += " " + pad_left(col, 9);
  out += "\ntime\n";
  for (const auto& r : t.rows) {
    out += pad_right(std::to_string(r.time), 4);
    for (double v : {r.paddle_x, r.paddle_y, r.paddle_z, r.ball_x, r.ball_y, r.ball_z})
      out += " " + pad_left(format_fixed(v, precision), 9);
    out += "\n";
  }
  return out;
}

namespace {

std::vector<std::string_view> whitespace_tokens(std::string_view line) {
  std::vector<std::string_view> toks;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    toks.push_back(line.substr(i, j - i));
    i = j;
  }
  return toks;
}

[[noreturn]] void fail(int line, const std::string& what, std::string_view raw = {}) {
  throw ParseError("trace line " + std::to_string(line) + ": " + what, std::string(raw),
                   line);
}

}  // namespace

ExecutionTrace parse_trace(const std::string& text) {
  std::vector<std::string_view> lines;
  {
    size_t start = 0;
    std::string_view sv(text);
    while (start <= sv.size()) {
      size_t nl = sv.find('\n', start);
      if (nl == std::string_view::npos) {
        lines.push_back(sv.substr(start));
        break;
      }
      lines.push_back(sv.substr(start, nl - start));
      start = nl + 1;
    }
  }

  ExecutionTrace t;
  size_t li = 0;
  const auto next_nonblank = [&]() -> std::string_view {
    while (li < lines.size() && trim(lines[li]).empty()) ++li;
    if (li >= lines.size()) fail(static_cast<int>(lines.size()), "unexpected end of trace");
    return trim(lines[li]);
  };

  // header: Example <id>:
  {
    const auto line = next_nonblank();
    if (!line.starts_with("Example ") || line.back() != ':')
      fail(static_cast<int>(li + 1), "expected 'Example <id>:'", line);
    const auto idtok = trim(line.substr(8, line.size() - 9));
    try {
      t.id = static_cast<int>(parse_real(idtok));
    } catch (const ParseError&) {
      fail(static_cast<int>(li + 1), "bad example id", idtok);
    }
    ++li;
  }

  // parameter line: a:<v> ... h:<v>
  {
    const auto line = next_nonblank();
    const auto toks = whitespace_tokens(line);
    if (toks.size() != 8) fail(static_cast<int>(li + 1), "expected 8 parameters", line);
    bool seen[8] = {};
    for (const auto& tok : toks) {
      const size_t colon = tok.find(':');
      if (colon != 1) fail(static_cast<int>(li + 1), "bad parameter token", tok);
      const int idx = ParamVector::index(tok[0]);
      t.params[idx] = parse_real(tok.substr(2));
      seen[idx] = true;
    }
    for (int i = 0; i < 8; ++i)
      if (!seen[i])
        fail(static_cast<int>(li + 1), std::string("missing parameter ") +
                                           ParamVector::name(i));
    ++li;
  }

  // landing block
  {
    const auto line = next_nonblank();
    if (!line.starts_with("Landing Position"))
      fail(static_cast<int>(li + 1), "expected 'Landing Position:'", line);
    ++li;
    for (;;) {
      const auto row = next_nonblank();
      if (row.find("On Table") != std::string_view::npos) {  // column header
        ++li;
        continue;
      }
      const auto toks = whitespace_tokens(row);
      if (toks.size() != 4)
        fail(static_cast<int>(li + 1), "landing row needs x y z and On Table", row);
      t.landing.x = parse_real(toks[0]);
      t.landing.y = parse_real(toks[1]);
      t.landing.z = parse_real(toks[2]);
      if (toks[3] == "True" || toks[3] == "true")
        t.landing.on_table = true;
      else if (toks[3] == "False" || toks[3] == "false")
        t.landing.on_table = false;
      else
        fail(static_cast<int>(li + 1), "bad On Table flag", toks[3]);
      ++li;
      break;
    }
  }

  // time series
  double peak = t.landing.z;
  int prev_time = 0;
  for (; li < lines.size(); ++li) {
    const auto line = trim(lines[li]);
    if (line.empty()) continue;
    if (line.find("paddle") != std::string_view::npos || line == "time") continue;
    if (line.find("...") != std::string_view::npos) continue;  // truncated tail row
    const auto toks = whitespace_tokens(line);
    if (toks.size() != 7)
      fail(static_cast<int>(li + 1),
           "time-series row needs a time index and 6 columns, got " +
               std::to_string(toks.size()),
           line);
    TraceRow r;
    r.time = static_cast<int>(parse_real(toks[0]));
    if (r.time <= prev_time)
      fail(static_cast<int>(li + 1), "row times must be strictly increasing", line);
    prev_time = r.time;
    r.paddle_x = parse_real(toks[1]);
    r.paddle_y = parse_real(toks[2]);
    r.paddle_z = parse_real(toks[3]);
    r.ball_x = parse_real(toks[4]);
    r.ball_y = parse_real(toks[5]);
    r.ball_z = parse_real(toks[6]);
    peak = std::max(peak, r.ball_z);
    t.rows.push_back(r);
  }
  if (t.rows.empty()) fail(static_cast<int>(lines.size()), "trace has no rows");
  t.landing.peak_height = peak;
  return t;
}

void cache_save(const TraceCache& cache, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << nlohmann::json({{"version", 1}, {"frame", "sim"}}).dump() << "\n";
  for (const auto& t : cache.traces()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows)
      rows.push_back({r.time, r.paddle_x, r.paddle_y, r.paddle_z, r.ball_x, r.ball_y,
                      r.ball_z});
    const nlohmann::json row = {
        {"id", t.id},
        {"params", t.params.v},
        {"rows", rows},
        {"landing",
         {{"x", t.landing.x},
          {"y", t.landing.y},
          {"z", t.landing.z},
          {"on_table", t.landing.on_table},
          {"peak_height", t.landing.peak_height}}}};
    out << row.dump() << "\n";
  }
  if (!out) throw IoError("write failed for " + path.string());
}

TraceCache cache_load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty cache file " + path.string());

  try {
    const auto header = nlohmann::json::parse(line);
    if (header.at("version").get<int>() != 1)
      throw IoError("unsupported cache version in " + path.string());
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad cache header in " + path.string() + ": " + e.what());
  }

  TraceCache cache;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto row = nlohmann::json::parse(line);
      ExecutionTrace t;
      t.id = row.at("id").get<int>();
      const auto params = row.at("params");
      if (params.size() != 8) throw IoError("expected 8 params");
      for (int i = 0; i < 8; ++i) t.params[i] = params[i].get<double>();
      for (const auto& r : row.at("rows")) {
        if (r.size() != 7) throw IoError("expected 7 row fields");
        t.rows.push_back({r[0].get<int>(), r[1].get<double>(), r[2].get<double>(),
                          r[3].get<double>(), r[4].get<double>(), r[5].get<double>(),
                          r[6].get<double>()});
      }
      const auto& landing = row.at("landing");
      t.landing = {landing.at("x").get<double>(), landing.at("y").get<double>(),
                   landing.at("z").get<double>(), landing.at("on_table").get<bool>(),
                   landing.at("peak_height").get<double>()};
      if (t.id != static_cast<int>(cache.size()) + 1)
        throw IoError("trace ids must be sequential from 1; line " +
                      std::to_string(lineno) + " has id " + std::to_string(t.id));
      cache.append(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw IoError("bad trace on line " + std::to_string(lineno) + " of " +
                    path.string() + ": " + e.what());
    }
  }
  return cache;
}

}  // namespace agentopt::trace
