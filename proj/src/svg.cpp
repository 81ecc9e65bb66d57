#include "agentopt/svg.hpp"

#include <algorithm>
#include <cmath>

#include "agentopt/numfmt.hpp"

namespace agentopt::svg {

namespace {

std::string num(double v) { return format_fixed(v, 2); }

std::string rgb(int r, int g, int b) {
  return "rgb(" + std::to_string(r) + "," + std::to_string(g) + "," +
         std::to_string(b) + ")";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string landing_scatter(const std::vector<LandingPoint>& points,
                            double table_half_width, double table_depth,
                            const std::string& title) {
  // drawing area: table plus a margin so out-of-table landings stay visible
  const double margin = 0.45;
  const double x_lo = -table_half_width - margin, x_hi = table_half_width + margin;
  const double y_lo = -margin, y_hi = table_depth + margin;
  const double scale = 240.0;
  const double w = (x_hi - x_lo) * scale;
  const double h = (y_hi - y_lo) * scale + 40.0;

  // svg y grows downward; world y (toward the opponent) points up
  const auto px = [&](double x) { return (x - x_lo) * scale; };
  const auto py = [&](double y) { return (y_hi - y) * scale + 30.0; };

  int max_iter = 1;
  for (const auto& p : points) max_iter = std::max(max_iter, p.iteration);

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) +
         "\" height=\"" + num(h) + "\" viewBox=\"0 0 " + num(w) + " " + num(h) +
         "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"10\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" +
         escape(title) + "</text>\n";
  // opponent half of the table and the net line at y = 0
  out += "<rect x=\"" + num(px(-table_half_width)) + "\" y=\"" + num(py(table_depth)) +
         "\" width=\"" + num(2 * table_half_width * scale) + "\" height=\"" +
         num(table_depth * scale) + "\" fill=\"" + rgb(226, 240, 226) +
         "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  out += "<line x1=\"" + num(px(-table_half_width - 0.1)) + "\" y1=\"" + num(py(0)) +
         "\" x2=\"" + num(px(table_half_width + 0.1)) + "\" y2=\"" + num(py(0)) +
         "\" stroke=\"" + rgb(90, 90, 90) + "\" stroke-dasharray=\"6,3\"/>\n";

  for (const auto& p : points) {
    std::string fill, opacity = "1.0";
    if (p.iteration <= 0) {
      fill = rgb(128, 128, 128);
      opacity = "0.35";
    } else {
      const double f = max_iter > 1 ? double(p.iteration - 1) / (max_iter - 1) : 1.0;
      fill = rgb(static_cast<int>(40 + 200 * f), 60,
                 static_cast<int>(220 - 180 * f));
    }
    out += "<circle cx=\"" + num(px(p.x)) + "\" cy=\"" + num(py(p.y)) +
           "\" r=\"5\" fill=\"" + fill + "\" fill-opacity=\"" + opacity +
           "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string topk_bars(const std::vector<retrieval::TopKResult>& results,
                      const std::string& title) {
  const double bar_w = 16.0, gap = 6.0, group_gap = 24.0;
  const double group_w = 3 * bar_w + 2 * gap;
  const double plot_h = 240.0, base_y = 290.0, left = 50.0;
  const double w = left + results.size() * (group_w + group_gap) + 30.0;
  const double h = base_y + 40.0;

  const char* colors[3] = {"rgb(66,110,180)", "rgb(240,165,60)", "rgb(90,170,90)"};
  const char* labels[3] = {"top-1", "top-5", "top-10"};

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) +
         "\" height=\"" + num(h) + "\" viewBox=\"0 0 " + num(w) + " " + num(h) +
         "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"10\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" +
         escape(title) + "</text>\n";
  for (int g = 0; g <= 4; ++g) {
    const double frac = g / 4.0;
    const double y = base_y - frac * plot_h;
    out += "<line x1=\"" + num(left - 6) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(w - 20) + "\" y2=\"" + num(y) + "\" stroke=\"" + rgb(210, 210, 210) +
           "\"/>\n";
    out += "<text x=\"10\" y=\"" + num(y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + format_fixed(frac, 2) +
           "</text>\n";
  }
  for (size_t i = 0; i < results.size(); ++i) {
    const double gx = left + i * (group_w + group_gap);
    const double vals[3] = {results[i].top1, results[i].top5, results[i].top10};
    for (int k = 0; k < 3; ++k) {
      const double bh = std::clamp(vals[k], 0.0, 1.0) * plot_h;
      out += "<rect x=\"" + num(gx + k * (bar_w + gap)) + "\" y=\"" +
             num(base_y - bh) + "\" width=\"" + num(bar_w) + "\" height=\"" + num(bh) +
             "\" fill=\"" + colors[k] + "\"/>\n";
    }
    out += "<text x=\"" + num(gx + group_w / 2 - 10) + "\" y=\"" + num(base_y + 16) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" +
           escape(results[i].objective_id) + "</text>\n";
  }
  for (int k = 0; k < 3; ++k) {
    const double lx = left + k * 80.0;
    out += "<rect x=\"" + num(lx) + "\" y=\"" + num(base_y + 24) + "\" width=\"12\" "
           "height=\"12\" fill=\"" + std::string(colors[k]) + "\"/>\n";
    out += "<text x=\"" + num(lx + 16) + "\" y=\"" + num(base_y + 34) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + labels[k] + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace agentopt::svg
