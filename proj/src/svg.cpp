// SPDX-License-Identifier: Apache-2.0
#include "roomrom/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "roomrom/errors.hpp"

namespace roomrom {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                         "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void write_svg_plot(const std::string& path, const std::vector<SvgSeries>& series,
                    const SvgPlotOptions& opt) {
  const double ml = 70, mr = 20, mt = 40, mb = 55;
  const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;

  auto tx = [&](double v) { return opt.log_x ? std::log10(std::max(v, 1e-300)) : v; };
  auto ty = [&](double v) { return opt.log_y ? std::log10(std::max(v, 1e-300)) : v; };

  Range rx, ry;
  for (const auto& s : series)
    for (int i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x(i)) || !std::isfinite(s.y(i))) continue;
      if (opt.log_x && s.x(i) <= 0.0) continue;
      if (opt.log_y && s.y(i) <= 0.0) continue;
      rx.add(tx(s.x(i)));
      ry.add(ty(s.y(i)));
    }
  if (!(rx.hi > rx.lo)) rx.hi = rx.lo + 1.0;
  if (!(ry.hi > ry.lo)) ry.hi = ry.lo + 1.0;
  const double padx = 0.03 * (rx.hi - rx.lo), pady = 0.05 * (ry.hi - ry.lo);
  rx.lo -= padx; rx.hi += padx; ry.lo -= pady; ry.hi += pady;

  auto px = [&](double v) { return ml + (tx(v) - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto py = [&](double v) { return mt + ph - (ty(v) - ry.lo) / (ry.hi - ry.lo) * ph; };

  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
     << opt.height << "\" viewBox=\"0 0 " << opt.width << " " << opt.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << opt.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"15\">" << opt.title << "</text>\n";

  // axes + ticks
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  const int nticks = 6;
  for (int i = 0; i <= nticks; ++i) {
    const double fx = rx.lo + (rx.hi - rx.lo) * i / nticks;
    const double fy = ry.lo + (ry.hi - ry.lo) * i / nticks;
    const double gx = ml + pw * i / nticks;
    const double gy = mt + ph - ph * i / nticks;
    const double vx = opt.log_x ? std::pow(10.0, fx) : fx;
    const double vy = opt.log_y ? std::pow(10.0, fy) : fy;
    os << "<line x1=\"" << gx << "\" y1=\"" << mt + ph << "\" x2=\"" << gx << "\" y2=\""
       << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << gx << "\" y=\"" << mt + ph + 20
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(vx)
       << "</text>\n";
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << gy << "\" x2=\"" << ml << "\" y2=\"" << gy
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << gy + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(vy)
       << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << opt.height - 10
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << opt.x_label
     << "</text>\n";
  os << "<text x=\"18\" y=\"" << mt + ph / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
     << "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">" << opt.y_label << "</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    os << "<polyline fill=\"none\" stroke=\"" << kColors[si % 8]
       << "\" stroke-width=\"1.5\" points=\"";
    for (int i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x(i)) || !std::isfinite(s.y(i))) continue;
      if (opt.log_x && s.x(i) <= 0.0) continue;
      if (opt.log_y && s.y(i) <= 0.0) continue;
      os << px(s.x(i)) << ',' << py(s.y(i)) << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << ml + pw - 8 << "\" y=\"" << mt + 16 + 16 * si
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
       << kColors[si % 8] << "\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace roomrom
