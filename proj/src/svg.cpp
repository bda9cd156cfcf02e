#include "bswarm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

namespace bswarm::io {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
constexpr std::size_t kMaxPlotPoints = 2000;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string color(std::size_t i) { return kPalette[i % (sizeof kPalette / sizeof kPalette[0])]; }

std::size_t stride_for(std::size_t count) { return std::max<std::size_t>(1, (count + kMaxPlotPoints - 1) / kMaxPlotPoints); }

struct Box {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity(), y1 = -std::numeric_limits<double>::infinity();
  void add(const Vec2& p) {
    if (!std::isfinite(p.x()) || !std::isfinite(p.y())) return;
    x0 = std::min(x0, p.x());
    x1 = std::max(x1, p.x());
    y0 = std::min(y0, p.y());
    y1 = std::max(y1, p.y());
  }
};

// Polyline that breaks at non-finite points.
void polyline(std::ostringstream& os, const std::vector<std::pair<double, double>>& pts, const std::string& style) {
  std::string current;
  auto flush = [&] {
    if (!current.empty()) os << "<polyline fill=\"none\" " << style << " points=\"" << current << "\"/>\n";
    current.clear();
  };
  for (const auto& [x, y] : pts) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
      flush();
      continue;
    }
    if (!current.empty()) current += ' ';
    current += num(x) + "," + num(y);
  }
  flush();
}

}  // namespace

std::string trajectory_svg(const ScenarioConfig& cfg, std::span<const RunRecord> records) {
  constexpr double size = 640.0, pad = 40.0;
  Box box;
  for (const auto& s : cfg.sensors) box.add(s);
  for (const auto& r : records) box.add(r.ptrue);
  if (!std::isfinite(box.x0)) box = Box{-1, 1, -1, 1};
  const double span = std::max({box.x1 - box.x0, box.y1 - box.y0, 1e-9}) * 1.2;
  const double cx = 0.5 * (box.x0 + box.x1), cy = 0.5 * (box.y0 + box.y1);
  const double scale = (size - 2 * pad) / span;
  auto X = [&](double x) { return pad + (x - (cx - span / 2)) * scale; };
  auto Y = [&](double y) { return size - pad - (y - (cy - span / 2)) * scale; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
     << size << ' ' << size << "\">\n";
  os << "<defs><clipPath id=\"field\"><rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << size - 2 * pad
     << "\" height=\"" << size - 2 * pad << "\"/></clipPath></defs>\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << size - 2 * pad << "\" height=\"" << size - 2 * pad
     << "\" fill=\"none\" stroke=\"#888\"/>\n";
  os << "<text x=\"" << size / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
     << (cfg.name.empty() ? "scenario" : cfg.name) << ": target and node estimates</text>\n";
  os << "<g clip-path=\"url(#field)\">\n";

  for (const auto& [i, j] : cfg.graph.edges) {
    if (i < 0 || j < 0 || static_cast<std::size_t>(std::max(i, j)) >= cfg.sensors.size()) continue;
    const auto& a = cfg.sensors[static_cast<std::size_t>(i)];
    const auto& b = cfg.sensors[static_cast<std::size_t>(j)];
    os << "<line x1=\"" << num(X(a.x())) << "\" y1=\"" << num(Y(a.y())) << "\" x2=\"" << num(X(b.x())) << "\" y2=\""
       << num(Y(b.y())) << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  }

  const std::size_t stride = stride_for(records.size());
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < records.size(); k += stride) pts.emplace_back(X(records[k].ptrue.x()), Y(records[k].ptrue.y()));
  if (!records.empty()) pts.emplace_back(X(records.back().ptrue.x()), Y(records.back().ptrue.y()));
  polyline(os, pts, "stroke=\"#f2c200\" stroke-width=\"6\" stroke-linecap=\"round\"");

  const std::size_t n = records.empty() ? 0 : records.front().p.size();
  for (std::size_t i = 0; i < n; ++i) {
    pts.clear();
    for (std::size_t k = 0; k < records.size(); k += stride) pts.emplace_back(X(records[k].p[i].x()), Y(records[k].p[i].y()));
    polyline(os, pts, "stroke=\"" + color(i) + "\" stroke-width=\"1\" stroke-dasharray=\"4 3\"");
  }

  for (const auto& s : cfg.sensors)
    os << "<circle cx=\"" << num(X(s.x())) << "\" cy=\"" << num(Y(s.y())) << "\" r=\"7\" fill=\"#3060d0\"/>\n";
  if (!records.empty()) {
    const double sx = X(records.front().ptrue.x()), sy = Y(records.front().ptrue.y());
    os << "<polygon points=\"" << num(sx) << ',' << num(sy - 9) << ' ' << num(sx + 9) << ',' << num(sy) << ' '
       << num(sx) << ',' << num(sy + 9) << ' ' << num(sx - 9) << ',' << num(sy) << "\" fill=\"#20a020\"/>\n";
    const double ex = X(records.back().ptrue.x()), ey = Y(records.back().ptrue.y());
    std::string star;
    for (int k = 0; k < 10; ++k) {
      const double r = k % 2 == 0 ? 10.0 : 4.0;
      const double a = -std::numbers::pi / 2 + k * std::numbers::pi / 5;
      star += num(ex + r * std::cos(a)) + "," + num(ey + r * std::sin(a)) + (k < 9 ? " " : "");
    }
    os << "<polygon points=\"" << star << "\" fill=\"#d02020\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

std::string metric_svg(std::span<const RunRecord> records, int n, Metric metric) {
  constexpr double width = 720.0, height = 420.0, left = 70.0, right = 20.0, top = 36.0, bottom = 46.0;
  auto value = [&](const RunRecord& r, std::size_t i) { return metric == Metric::Rmse ? r.rmse[i] : r.msce[i]; };

  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  for (const auto& r : records)
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
      const double v = value(r, i);
      if (std::isfinite(v) && v > 0.0) {
        hi = std::max(hi, v);
        lo = std::min(lo, v);
      }
    }
  if (!(hi > 0.0)) {
    hi = 1.0;
    lo = 1e-3;
  }
  double top_dec = std::ceil(std::log10(hi));
  double bottom_dec = std::floor(std::log10(std::max(lo, hi * 1e-14)));
  if (top_dec <= bottom_dec) bottom_dec = top_dec - 1.0;
  const double t0 = records.empty() ? 0.0 : records.front().t;
  const double t1 = records.empty() ? 1.0 : std::max(records.back().t, t0 + 1e-12);

  auto X = [&](double t) { return left + (t - t0) / (t1 - t0) * (width - left - right); };
  auto Y = [&](double v) {
    const double d = std::clamp(std::log10(std::max(v, 1e-300)), bottom_dec, top_dec);
    return top + (top_dec - d) / (top_dec - bottom_dec) * (height - top - bottom);
  };

  const char* label = metric == Metric::Rmse ? "RMSE" : "MSCE";
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
     << label << " per node</text>\n";

  const int decades = static_cast<int>(top_dec - bottom_dec);
  const int label_every = std::max(1, decades / 8);
  for (int d = 0; d <= decades; ++d) {
    const double exponent = bottom_dec + d;
    const double y = Y(std::pow(10.0, exponent));
    os << "<line x1=\"" << left << "\" y1=\"" << num(y) << "\" x2=\"" << width - right << "\" y2=\"" << num(y)
       << "\" stroke=\"#e0e0e0\"/>\n";
    if (d % label_every == 0)
      os << "<text x=\"" << left - 6 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         << "font-size=\"11\">1e" << static_cast<int>(exponent) << "</text>\n";
  }
  for (int k = 0; k <= 5; ++k) {
    const double t = t0 + (t1 - t0) * k / 5.0;
    os << "<text x=\"" << num(X(t)) << "\" y=\"" << height - bottom + 16
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(t) << "</text>\n";
  }
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right << "\" height=\""
     << height - top - bottom << "\" fill=\"none\" stroke=\"#888\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"" << height - 8
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">t</text>\n";

  const std::size_t stride = stride_for(records.size());
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
    pts.clear();
    for (std::size_t k = 0; k < records.size(); k += stride) pts.emplace_back(X(records[k].t), Y(value(records[k], i)));
    if (!records.empty()) pts.emplace_back(X(records.back().t), Y(value(records.back(), i)));
    polyline(os, pts, "stroke=\"" + color(i) + "\" stroke-width=\"1.2\"");
    os << "<text x=\"" << width - right - 60 << "\" y=\"" << top + 16 + 14 * static_cast<double>(i)
       << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color(i) << "\">node " << i << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace bswarm::io
