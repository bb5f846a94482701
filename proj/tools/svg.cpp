#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "advlab/errors.hpp"

namespace advlab::tool {

namespace {

constexpr int kW = 720, kH = 480;
constexpr int kL = 70, kR = 180, kT = 40, kB = 50;  // margins

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  std::ostringstream os;
  os.precision(5);
  os << v;
  return os.str();
}

}  // namespace

void write_svg(const std::string& path, const AggregateCurve& curve,
               const std::string& title) {
  const bool logx = curve.x_name == "lambda";
  std::map<std::string, std::vector<const CurvePoint*>> series;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& p : curve.points) {
    if (!std::isfinite(p.mean)) continue;
    const std::string key = p.method + " (eps=" + num(p.eps) + ")";
    series[key].push_back(&p);
    const double xv = logx ? std::log10(std::max(p.x, 1e-12)) : p.x;
    xmin = std::min(xmin, xv);
    xmax = std::max(xmax, xv);
    ymin = std::min(ymin, p.mean);
    ymax = std::max(ymax, p.mean);
  }
  if (series.empty()) throw Error("no finite points to plot");
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
  const auto px = [&](double x) {
    const double xv = logx ? std::log10(std::max(x, 1e-12)) : x;
    return kL + (xv - xmin) / (xmax - xmin) * (kW - kL - kR);
  };
  const auto py = [&](double y) {
    return kH - kB - (y - ymin) / (ymax - ymin) * (kH - kT - kB);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH
      << "\">\n"
      << "<rect width=\"" << kW << "\" height=\"" << kH
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << kL << "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << title << "</text>\n"
      << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\""
      << kW - kR << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL
      << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0;
    const double vx = logx ? std::pow(10.0, fx) : fx;
    const double X = kL + (fx - xmin) / (xmax - xmin) * (kW - kL - kR);
    svg << "<text x=\"" << X << "\" y=\"" << kH - kB + 20
        << "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"middle\">"
        << num(vx) << "</text>\n";
    const double fy = ymin + (ymax - ymin) * i / 4.0;
    svg << "<text x=\"" << kL - 8 << "\" y=\"" << py(fy) + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"end\">"
        << num(fy) << "</text>\n";
  }
  svg << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 12
      << "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\">"
      << curve.x_name << "</text>\n";

  int ci = 0;
  for (const auto& [name, pts] : series) {
    const char* color = kPalette[ci % 8];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto* p : pts) svg << px(p->x) << ',' << py(p->mean) << ' ';
    svg << "\"/>\n";
    svg << "<text x=\"" << kW - kR + 12 << "\" y=\"" << kT + 16 * ci + 12
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color
        << "\">" << name << "</text>\n";
    ++ci;
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << svg.str();
}

}  // namespace advlab::tool
