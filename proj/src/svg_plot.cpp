#include "rankdiff/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "rankdiff/csv.hpp"

namespace rankdiff {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Axis {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool log = false;

  void include(double v) {
    if (log && !(v > 0.0)) return;
    const double x = log ? std::log10(v) : v;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  void finalize() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  double place(double v) const {
    const double x = log ? std::log10(v) : v;
    return (x - lo) / (hi - lo);
  }
  bool valid(double v) const { return !log || v > 0.0; }
};

std::vector<double> ticks_for(const Axis& a) {
  std::vector<double> out;
  if (a.log) {
    for (int e = static_cast<int>(std::floor(a.lo));
         e <= static_cast<int>(std::ceil(a.hi)); ++e) {
      if (e >= a.lo && e <= a.hi) out.push_back(std::pow(10.0, e));
    }
  } else {
    const double span = a.hi - a.lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
      if (mag * m >= raw) {
        step = mag * m;
        break;
      }
    const double first = std::ceil(a.lo / step) * step;
    for (double v = first; v <= a.hi + 1e-12 * step; v += step)
      out.push_back(v);
  }
  return out;
}

}  // namespace

void write_svg_plot(const std::string& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file: " + path);

  const double ml = 70, mr = 20, mt = 40, mb = 50;
  const double pw = spec.width - ml - mr;
  const double ph = spec.height - mt - mb;

  Axis xa, ya;
  xa.log = spec.log_x;
  ya.log = spec.log_y;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (xa.valid(x) && ya.valid(y)) {
        xa.include(x);
        ya.include(y);
      }
    }
  xa.finalize();
  ya.finalize();

  auto X = [&](double v) { return ml + pw * xa.place(v); };
  auto Y = [&](double v) { return mt + ph * (1.0 - ya.place(v)); };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
      << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width
      << " " << spec.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << spec.width / 2 << "\" y=\"20\" font-size=\"14\" "
      << "text-anchor=\"middle\">" << spec.title << "</text>\n";

  // frame
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
      << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  for (double tx : ticks_for(xa)) {
    const double px = X(tx);
    out << "<line x1=\"" << px << "\" y1=\"" << mt + ph << "\" x2=\"" << px
        << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px << "\" y=\"" << mt + ph + 18
        << "\" font-size=\"10\" text-anchor=\"middle\">" << fmt(tx)
        << "</text>\n";
  }
  for (double ty : ticks_for(ya)) {
    const double py = Y(ty);
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << py << "\" x2=\"" << ml
        << "\" y2=\"" << py << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << py + 3
        << "\" font-size=\"10\" text-anchor=\"end\">" << fmt(ty)
        << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << spec.height - 8
      << "\" font-size=\"12\" text-anchor=\"middle\">" << spec.x_label
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << mt + ph / 2
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 "
      << 16 << " " << mt + ph / 2 << ")\">" << spec.y_label << "</text>\n";

  int color = 0;
  double legend_y = mt + 14;
  for (const auto& s : series) {
    const char* stroke = kColors[color % 8];
    out << "<polyline fill=\"none\" stroke=\"" << stroke
        << "\" stroke-width=\"1.5\" points=\"";
    bool any = false;
    for (const auto& [x, y] : s.points) {
      if (!xa.valid(x) || !ya.valid(y)) continue;
      out << X(x) << "," << Y(y) << " ";
      any = true;
    }
    out << "\"/>\n";
    if (any) {
      out << "<rect x=\"" << ml + pw - 150 << "\" y=\"" << legend_y - 8
          << "\" width=\"12\" height=\"3\" fill=\"" << stroke << "\"/>\n";
      out << "<text x=\"" << ml + pw - 133 << "\" y=\"" << legend_y
          << "\" font-size=\"10\">" << s.label << "</text>\n";
      legend_y += 14;
    }
    ++color;
  }
  out << "</svg>\n";
}

}  // namespace rankdiff
