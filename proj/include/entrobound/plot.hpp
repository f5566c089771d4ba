#pragma once

// Static SVG scatter of (cost product, entropy) with the fitted curve.

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "entrobound/scan.hpp"

namespace entrobound {

struct PlotLayout {
  double width = 720.0;
  double height = 480.0;
  double margin = 60.0;
  int curve_samples = 240;
};

/// Maps data coordinates onto the plotting rectangle.
struct PlotFrame {
  double x_max = 1.0;
  double y_max = 1.0;
  PlotLayout layout;

  double px(double c) const { return layout.margin + c / x_max * (layout.width - 2.0 * layout.margin); }
  double py(double s) const {
    return layout.height - layout.margin - s / y_max * (layout.height - 2.0 * layout.margin);
  }
};

inline PlotFrame plot_frame(const std::vector<CostPoint>& points, const std::optional<BoundFit>& fit,
                            const PlotLayout& layout = {}) {
  PlotFrame f;
  f.layout = layout;
  f.x_max = fit ? fit->window.c_max : 1.0;
  if (!fit)
    for (const auto& p : points) f.x_max = std::max(f.x_max, p.product);
  f.y_max = 1e-3;
  for (const auto& p : points)
    if (p.product <= f.x_max) f.y_max = std::max(f.y_max, p.entropy);
  if (fit && !points.empty()) f.y_max = std::max(f.y_max, dominating_entropy(fit->alpha, f.x_max));
  f.y_max *= 1.05;
  return f;
}

/// Points beyond the fit window's upper edge are left out; the curve is only
/// drawn when there is at least one point.
inline std::string render_svg(const std::vector<CostPoint>& points, const std::optional<BoundFit>& fit,
                              const PlotLayout& layout = {}) {
  const PlotFrame f = plot_frame(points, fit, layout);
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };
  std::ostringstream os;
  const double l = layout.margin, r = layout.width - layout.margin;
  const double t = layout.margin, b = layout.height - layout.margin;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(layout.width) << "\" height=\""
     << num(layout.height) << "\" viewBox=\"0 0 " << num(layout.width) << ' ' << num(layout.height) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line class=\"axis\" x1=\"" << num(l) << "\" y1=\"" << num(b) << "\" x2=\"" << num(r) << "\" y2=\"" << num(b)
     << "\" stroke=\"black\"/>\n";
  os << "<line class=\"axis\" x1=\"" << num(l) << "\" y1=\"" << num(b) << "\" x2=\"" << num(l) << "\" y2=\"" << num(t)
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << num((l + r) / 2) << "\" y=\"" << num(layout.height - 15) << "\" text-anchor=\"middle\">"
     << "cost product C = tr(rho H) tr(rho Q^2)</text>\n";
  os << "<text x=\"15\" y=\"" << num((t + b) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
     << num((t + b) / 2) << ")\">entropy S</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double cx = f.x_max * k / 4.0, sy = f.y_max * k / 4.0;
    os << "<text class=\"tick\" x=\"" << num(f.px(cx)) << "\" y=\"" << num(b + 18) << "\" text-anchor=\"middle\">"
       << num(cx) << "</text>\n";
    os << "<text class=\"tick\" x=\"" << num(l - 6) << "\" y=\"" << num(f.py(sy) + 4) << "\" text-anchor=\"end\">"
       << num(sy) << "</text>\n";
  }
  for (const auto& p : points) {
    if (p.product < 0.0 || p.product > f.x_max) continue;
    const bool in = fit && fit->window.contains(p.product);
    os << "<circle class=\"" << (in ? "in" : "out") << "\" cx=\"" << num(f.px(p.product)) << "\" cy=\""
       << num(f.py(p.entropy)) << "\" r=\"1.5\" fill=\"" << (in ? "steelblue" : "lightgray") << "\"/>\n";
  }
  if (fit && !points.empty()) {
    os << "<path class=\"curve\" fill=\"none\" stroke=\"crimson\" stroke-width=\"1.5\" d=\"";
    for (int k = 0; k <= layout.curve_samples; ++k) {
      const double c = f.x_max * k / layout.curve_samples;
      os << (k ? " L" : "M") << num(f.px(c)) << ' ' << num(f.py(dominating_entropy(fit->alpha, c)));
    }
    os << "\"/>\n";
    char label[64];
    std::snprintf(label, sizeof label, "S = log(%.4f sqrt(C) + 1)", fit->alpha);
    os << "<text x=\"" << num(r - 10) << "\" y=\"" << num(t + 20) << "\" text-anchor=\"end\" fill=\"crimson\">" << label
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace entrobound
