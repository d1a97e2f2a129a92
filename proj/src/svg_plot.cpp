#include "arsq/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace arsq {

namespace {

const char* kPalette[4] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  static Range of(const std::vector<const std::vector<double>*>& series) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto* s : series)
      for (double v : *s) {
        if (first) {
          lo = hi = v;
          first = false;
        } else {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
    if (first) return {0.0, 1.0};
    if (hi - lo < 1e-12) {  // flat series still need a visible band
      lo -= 1.0;
      hi += 1.0;
    }
    return {lo, hi};
  }

  double frac(double v) const { return (v - lo) / (hi - lo); }
};

struct Panel {
  double x0, y0, w, h;
  Range xr, yr;

  double map_x(double v) const { return x0 + xr.frac(v) * w; }
  double map_y(double v) const { return y0 + h - yr.frac(v) * h; }
};

void append_text(std::string& svg, double x, double y, const std::string& s,
                 const char* anchor = "start", int size = 11) {
  svg += "<text x=\"" + px(x) + "\" y=\"" + px(y) + "\" font-family=\"sans-serif\" font-size=\"" +
         std::to_string(size) + "\" text-anchor=\"" + anchor + "\">" + s + "</text>\n";
}

void append_line(std::string& svg, double x1, double y1, double x2, double y2,
                 const char* stroke = "#444444", const char* width = "1") {
  svg += "<line x1=\"" + px(x1) + "\" y1=\"" + px(y1) + "\" x2=\"" + px(x2) +
         "\" y2=\"" + px(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
         width + "\"/>\n";
}

void append_polyline(std::string& svg, const Panel& p,
                     const std::vector<double>& xs,
                     const std::vector<double>& ys, const char* color) {
  std::string pts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) pts += ' ';
    pts += px(p.map_x(xs[i])) + "," + px(p.map_y(ys[i]));
  }
  svg += "<polyline fill=\"none\" stroke=\"";
  svg += color;
  svg += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
}

void append_axes(std::string& svg, const Panel& p, const std::string& title) {
  append_line(svg, p.x0, p.y0 + p.h, p.x0 + p.w, p.y0 + p.h);
  append_line(svg, p.x0, p.y0, p.x0, p.y0 + p.h);
  const int nticks = 4;
  for (int i = 0; i <= nticks; ++i) {
    const double f = static_cast<double>(i) / nticks;
    const double xv = p.xr.lo + f * (p.xr.hi - p.xr.lo);
    const double yv = p.yr.lo + f * (p.yr.hi - p.yr.lo);
    const double xp = p.x0 + f * p.w;
    const double yp = p.y0 + p.h - f * p.h;
    append_line(svg, xp, p.y0 + p.h, xp, p.y0 + p.h + 4);
    append_text(svg, xp, p.y0 + p.h + 16, tick_label(xv), "middle", 10);
    append_line(svg, p.x0 - 4, yp, p.x0, yp);
    append_text(svg, p.x0 - 6, yp + 3, tick_label(yv), "end", 10);
  }
  append_text(svg, p.x0 + p.w / 2.0, p.y0 - 6, title, "middle", 12);
}

void append_legend(std::string& svg, const Panel& p,
                   const std::vector<std::string>& names) {
  double y = p.y0 + 14;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double x = p.x0 + p.w - 130;
    append_line(svg, x, y - 4, x + 18, y - 4, kPalette[i % 4], "2");
    append_text(svg, x + 24, y, names[i], "start", 10);
    y += 14;
  }
}

std::string svg_open(int width, int height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" viewBox=\"0 0 " + std::to_string(width) + " " +
         std::to_string(height) + "\">\n";
}

std::vector<double> column_values(const CsvTable& t, const std::string& name) {
  const int c = t.column(name);
  std::vector<double> v;
  v.reserve(t.rows.size());
  for (const auto& row : t.rows) v.push_back(row[c]);
  return v;
}

void require_rows(const CsvTable& t, const std::string& what) {
  if (t.rows.empty()) throw SchemaError(what + ": no data rows");
}

// A panel plotting the named trace columns over one shared x column.
void trace_panel(std::string& svg, const CsvTable& t, const std::string& xcol,
                 const std::vector<std::string>& ycols,
                 const std::string& title, double x0, double y0, double w,
                 double h) {
  const std::vector<double> xs = column_values(t, xcol);
  std::vector<std::vector<double>> ys;
  for (const auto& c : ycols) ys.push_back(column_values(t, c));

  Panel p{x0, y0, w, h, {}, {}};
  p.xr = Range::of({&xs});
  std::vector<const std::vector<double>*> refs;
  for (auto& y : ys) refs.push_back(&y);
  p.yr = Range::of(refs);

  append_axes(svg, p, title);
  for (std::size_t i = 0; i < ys.size(); ++i)
    append_polyline(svg, p, xs, ys[i], kPalette[i % 4]);
  append_legend(svg, p, ycols);
}

}  // namespace

std::string render_rewards_svg(const CsvTable& rewards) {
  check_schema(rewards, kRewardsColumns, "rewards.csv");
  require_rows(rewards, "rewards.csv");

  const std::vector<double> xs = column_values(rewards, "eval_episode");
  const std::vector<double> total = column_values(rewards, "total_reward");
  const std::vector<double> avg = column_values(rewards, "running_avg_10");

  const int width = 960, height = 540;
  Panel p{70, 40, width - 110.0, height - 110.0, {}, {}};
  p.xr = Range::of({&xs});
  p.yr = Range::of({&total, &avg});

  std::string svg = svg_open(width, height);
  append_axes(svg, p, "episode reward");
  append_polyline(svg, p, xs, total, kPalette[0]);
  append_polyline(svg, p, xs, avg, kPalette[1]);
  append_legend(svg, p, {"total_reward", "running_avg_10"});
  append_text(svg, width / 2.0, height - 12.0, "evaluation episode", "middle");
  svg += "</svg>\n";
  return svg;
}

std::string render_motion_svg(const CsvTable& trace) {
  check_schema(trace, kTraceColumns, "trace.csv");
  require_rows(trace, "trace.csv");

  const int width = 1000, height = 760;
  const double w = 380, h = 280;
  std::string svg = svg_open(width, height);
  trace_panel(svg, trace, "time", {"x", "y", "z"}, "position (m)", 70, 40, w, h);
  trace_panel(svg, trace, "time", {"vx", "vy", "vz"}, "velocity (m/s)", 580, 40, w, h);
  trace_panel(svg, trace, "time", {"p", "q", "r"}, "body rates (rad/s)", 70, 420, w, h);
  trace_panel(svg, trace, "time", {"s1", "s2", "s3", "s4"}, "rotor speed (rev/s)", 580, 420, w, h);
  svg += "</svg>\n";
  return svg;
}

std::string render_trajectory_svg(const CsvTable& trace) {
  check_schema(trace, kTraceColumns, "trace.csv");
  require_rows(trace, "trace.csv");

  const int width = 1000, height = 480;
  const double w = 380, h = 360;
  std::string svg = svg_open(width, height);
  trace_panel(svg, trace, "x", {"y"}, "ground track (y vs x, m)", 70, 50, w, h);
  trace_panel(svg, trace, "time", {"z"}, "altitude (z vs t)", 580, 50, w, h);
  svg += "</svg>\n";
  return svg;
}

}  // namespace arsq
