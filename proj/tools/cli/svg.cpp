#include "cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace skewflow::cli {

namespace {

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo{std::numeric_limits<double>::infinity()};
  double hi{-std::numeric_limits<double>::infinity()};

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) lo = -1.0, hi = 1.0;
    if (hi - lo < 1e-12) {
      const double c = 0.5 * (lo + hi);
      lo = c - 0.5;
      hi = c + 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

void panel_svg(std::ostringstream& os, const Panel& p, double ox, double oy, double w, double h) {
  const double ml = 48, mr = 12, mt = 24, mb = 36;
  const double pw = w - ml - mr, ph = h - mt - mb;
  Range xr, yr;
  for (const auto& s : p.series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  xr.finish();
  yr.finish();
  if (p.xmin) xr.lo = *p.xmin;
  if (p.xmax) xr.hi = *p.xmax;
  if (p.ymin) yr.lo = *p.ymin;
  if (p.ymax) yr.hi = *p.ymax;
  if (p.equal_aspect) {
    const double sx = (xr.hi - xr.lo) / pw, sy = (yr.hi - yr.lo) / ph;
    const double s = std::max(sx, sy);
    const double cx = 0.5 * (xr.lo + xr.hi), cy = 0.5 * (yr.lo + yr.hi);
    xr.lo = cx - 0.5 * s * pw, xr.hi = cx + 0.5 * s * pw;
    yr.lo = cy - 0.5 * s * ph, yr.hi = cy + 0.5 * s * ph;
  }
  auto X = [&](double v) { return ox + ml + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto Y = [&](double v) { return oy + mt + (yr.hi - v) / (yr.hi - yr.lo) * ph; };

  os << "<rect x=\"" << fmt(ox + ml) << "\" y=\"" << fmt(oy + mt) << "\" width=\"" << fmt(pw)
     << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  // ticks at the ends and the middle
  for (int k = 0; k <= 2; ++k) {
    const double fx = xr.lo + 0.5 * k * (xr.hi - xr.lo);
    const double fy = yr.lo + 0.5 * k * (yr.hi - yr.lo);
    os << "<text x=\"" << fmt(X(fx)) << "\" y=\"" << fmt(oy + mt + ph + 14)
       << "\" font-size=\"10\" text-anchor=\"middle\">" << fmt(fx, "%.3g") << "</text>\n";
    os << "<text x=\"" << fmt(ox + ml - 4) << "\" y=\"" << fmt(Y(fy) + 3)
       << "\" font-size=\"10\" text-anchor=\"end\">" << fmt(fy, "%.3g") << "</text>\n";
  }
  os << "<text x=\"" << fmt(ox + ml + pw / 2) << "\" y=\"" << fmt(oy + 16)
     << "\" font-size=\"12\" text-anchor=\"middle\">" << escape(p.title) << "</text>\n";
  os << "<text x=\"" << fmt(ox + ml + pw / 2) << "\" y=\"" << fmt(oy + h - 6)
     << "\" font-size=\"11\" text-anchor=\"middle\">" << escape(p.xlabel) << "</text>\n";
  os << "<text x=\"" << fmt(ox + 12) << "\" y=\"" << fmt(oy + mt + ph / 2)
     << "\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 " << fmt(ox + 12) << ' '
     << fmt(oy + mt + ph / 2) << ")\">" << escape(p.ylabel) << "</text>\n";

  os << "<g>\n";
  for (const auto& s : p.series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (n == 0) continue;
    const std::size_t stride = std::max<std::size_t>(1, (n + kMaxVertices - 1) / kMaxVertices);
    if (s.markers) {
      for (std::size_t i = 0; i < n; i += stride) {
        os << "<circle cx=\"" << fmt(X(s.x[i])) << "\" cy=\"" << fmt(Y(s.y[i])) << "\" r=\"2\" fill=\""
           << s.color << "\"/>\n";
      }
      continue;
    }
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << fmt(s.width)
       << "\" points=\"";
    for (std::size_t i = 0; i < n; i += stride) {
      os << fmt(X(s.x[i])) << ',' << fmt(Y(s.y[i])) << ' ';
    }
    if ((n - 1) % stride != 0) os << fmt(X(s.x[n - 1])) << ',' << fmt(Y(s.y[n - 1]));
    os << "\"/>\n";
  }
  os << "</g>\n";
}

}  // namespace

const std::string& palette(std::size_t i) {
  static const std::array<std::string, 8> colors = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  return colors[i % colors.size()];
}

std::string render_panels(const std::vector<Panel>& panels, const std::string& title,
                          double panel_width, double panel_height) {
  const double top = title.empty() ? 0.0 : 24.0;
  const double width = panel_width * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
  const double height = panel_height + top;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
     << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    os << "<text x=\"" << fmt(width / 2) << "\" y=\"17\" font-size=\"14\" text-anchor=\"middle\">"
       << escape(title) << "</text>\n";
  }
  for (std::size_t i = 0; i < panels.size(); ++i) {
    panel_svg(os, panels[i], panel_width * static_cast<double>(i), top, panel_width, panel_height);
  }
  os << "</svg>\n";
  return os.str();
}

namespace {

std::string heat_color(double u) {
  u = std::clamp(u, 0.0, 1.0);
  // dark blue -> yellow
  const int r = static_cast<int>(std::lround(30 + 225 * u));
  const int g = static_cast<int>(std::lround(30 + 200 * u));
  const int b = static_cast<int>(std::lround(120 - 100 * u));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string render_heatmap(const HeatMap& map, double width, double height) {
  const double ml = 48, mr = 80, mt = 28, mb = 36;
  const double pw = width - ml - mr, ph = height - mt - mb;
  Range vr;
  for (double v : map.values) vr.add(v);
  if (!(vr.lo <= vr.hi)) vr.lo = 0.0, vr.hi = 1.0;
  const double span = vr.hi - vr.lo > 0 ? vr.hi - vr.lo : 1.0;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
     << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"18\" font-size=\"13\" text-anchor=\"middle\">"
     << escape(map.title) << "</text>\n";
  const double cw = map.cols ? pw / static_cast<double>(map.cols) : pw;
  const double chh = map.rows ? ph / static_cast<double>(map.rows) : ph;
  for (std::size_t r = 0; r < map.rows; ++r) {
    for (std::size_t c = 0; c < map.cols; ++c) {
      const double v = map.values[r * map.cols + c];
      os << "<rect x=\"" << fmt(ml + cw * static_cast<double>(c)) << "\" y=\""
         << fmt(mt + chh * static_cast<double>(r)) << "\" width=\"" << fmt(cw) << "\" height=\""
         << fmt(chh) << "\" fill=\"" << heat_color((v - vr.lo) / span) << "\"/>\n";
    }
  }
  os << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw) << "\" height=\""
     << fmt(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  // color bar
  for (int k = 0; k < 20; ++k) {
    const double u = k / 19.0;
    os << "<rect x=\"" << fmt(ml + pw + 16) << "\" y=\"" << fmt(mt + ph * (1.0 - (k + 1) / 20.0))
       << "\" width=\"14\" height=\"" << fmt(ph / 20.0 + 0.5) << "\" fill=\"" << heat_color(u) << "\"/>\n";
  }
  os << "<text x=\"" << fmt(ml + pw + 34) << "\" y=\"" << fmt(mt + 8) << "\" font-size=\"10\">"
     << fmt(vr.hi, "%.4g") << "</text>\n";
  os << "<text x=\"" << fmt(ml + pw + 34) << "\" y=\"" << fmt(mt + ph) << "\" font-size=\"10\">"
     << fmt(vr.lo, "%.4g") << "</text>\n";
  os << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(height - 8)
     << "\" font-size=\"11\" text-anchor=\"middle\">" << escape(map.xlabel) << "</text>\n";
  os << "<text x=\"14\" y=\"" << fmt(mt + ph / 2) << "\" font-size=\"11\" text-anchor=\"middle\" "
     << "transform=\"rotate(-90 14 " << fmt(mt + ph / 2) << ")\">" << escape(map.ylabel) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace skewflow::cli
