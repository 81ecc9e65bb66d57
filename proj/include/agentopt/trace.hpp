#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace agentopt::trace {

/// The eight attenuation factors a..h applied to the low-level controller's
/// actuator velocities.
struct ParamVector {
  std::array<double, 8> v{1, 1, 1, 1, 1, 1, 1, 1};

  static constexpr int size() { return 8; }
  static char name(int i) { return static_cast<char>('a' + i); }
  static int index(char name);  // throws on unknown name

  double& operator[](int i) { return v[static_cast<size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<size_t>(i)]; }
  bool operator==(const ParamVector&) const = default;
};

struct ParamBounds {
  double lo = 0.5;
  double hi = 1.5;

  bool contains(const ParamVector& p) const;
  /// Clamps into [lo, hi]; reports whether anything moved.
  ParamVector clamp(const ParamVector& p, bool* clamped = nullptr) const;
};

struct TraceRow {
  int time = 0;  // 1-based step index, strictly increasing
  double paddle_x = 0, paddle_y = 0, paddle_z = 0;
  double ball_x = 0, ball_y = 0, ball_z = 0;
};

struct LandingRecord {
  double x = 0, y = 0, z = 0;
  bool on_table = false;
  double peak_height = 0;  // highest ball z over the flight
};

/// One rollout: the parameters used, the observed time series and where the
/// ball came down.
struct ExecutionTrace {
  int id = 0;  // assigned by the cache
  ParamVector params;
  std::vector<TraceRow> rows;
  LandingRecord landing;
};

/// Append-only store of traces; ids are 1-based insertion order. This is the
/// in-context memory the agent sees, so earlier entries are never mutated.
class TraceCache {
 public:
  /// Validates and stores the trace; returns the assigned id.
  int append(ExecutionTrace t);

  const std::vector<ExecutionTrace>& traces() const { return traces_; }
  size_t size() const { return traces_.size(); }
  bool empty() const { return traces_.empty(); }
  const ExecutionTrace* find(int id) const;
  std::vector<int> ids() const;

 private:
  std::vector<ExecutionTrace> traces_;
};

/// Renders the exact example block used inside prompts:
///
///   Example 5:
///   a:1.1 b:1.2 c:0.7 d:1.1 e:1.1 f:1.1 g:1.1 h:1.5
///
///   Landing Position:
///     x      y      z      On Table
///   0.3207 0.7890 0.0143   True
///
///         paddle x  paddle y  paddle z    ball x    ball y    ball z
///   time
///   1       0.2478   -1.1859    0.4236    0.2415    0.0619    0.2745
///   ...
///
/// Landing and time-series values carry exactly `precision` decimals; the
/// parameter line drops trailing zeros (matching how operators write them).
/// Byte-for-byte deterministic. precision must lie in [1, 6].
std::string render_trace(const ExecutionTrace& t, int precision = 4);

/// Inverse of render_trace, tolerant of extra whitespace between columns and
/// of a trailing truncated row marked with "...". peak_height is recovered
/// as the highest ball z of the parsed rows. Throws ParseError with a line
/// number on malformed input.
ExecutionTrace parse_trace(const std::string& text);

// Versioned JSON-lines cache files: a header line {"version":1,"frame":"sim"}
// followed by one trace object per line.
void cache_save(const TraceCache& cache, const std::filesystem::path& path);
TraceCache cache_load(const std::filesystem::path& path);

}  // namespace agentopt::trace
