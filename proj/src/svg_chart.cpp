#include "osteomorph/svg_chart.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace osteomorph {
namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round the axis top up to 1, 2 or 5 times a power of ten.
double nice_ceiling(double v) {
  if (v <= 0.0) return 1.0;
  const double exp10 = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * exp10 >= v) return m * exp10;
  }
  return 10.0 * exp10;
}

constexpr const char* kPalette[] = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd"};

}  // namespace

std::string render_bar_chart(const std::vector<ErrorBar>& bars, const BarChartOptions& options) {
  const double left = 64.0;
  const double right = 16.0;
  const double top = 40.0;
  const double bottom = 48.0;
  const double plot_w = options.width - left - right;
  const double plot_h = options.height - top - bottom;

  double max_v = 0.0;
  for (const auto& b : bars) max_v = std::max(max_v, b.mean + b.std);
  const double y_max = nice_ceiling(max_v);
  const auto y_of = [&](double v) { return top + plot_h * (1.0 - v / y_max); };

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (!options.header_comment.empty()) {
    svg += fmt::format("<!-- {} -->\n", options.header_comment);
  }
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      options.width, options.height, options.width, options.height);
  svg += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", options.width,
                     options.height);
  svg += fmt::format("<text x=\"{:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     options.width / 2.0, escape_xml(options.title));

  constexpr int kTicks = 5;
  for (int t = 0; t <= kTicks; ++t) {
    const double v = y_max * t / kTicks;
    const double y = y_of(v);
    svg += fmt::format(
        "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#dddddd\"/>\n",
        left, y, left + plot_w, y);
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.3g}</text>\n",
                       left - 6.0, y + 4.0, v);
  }
  svg += fmt::format(
      "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n",
      left, top, top + plot_h);
  svg += fmt::format(
      "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"black\"/>\n",
      left, top + plot_h, left + plot_w);
  svg += fmt::format(
      "<text x=\"16\" y=\"{0:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0:.1f})\">{1}</text>\n",
      top + plot_h / 2.0, escape_xml(options.y_label));

  if (!bars.empty()) {
    const double slot = plot_w / static_cast<double>(bars.size());
    const double bar_w = slot * 0.6;
    for (std::size_t i = 0; i < bars.size(); ++i) {
      const auto& b = bars[i];
      const double cx = left + slot * (static_cast<double>(i) + 0.5);
      const double y = y_of(b.mean);
      svg += fmt::format(
          "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"{}\">"
          "<title>{}: {:.4f} +- {:.4f} (n={})</title></rect>\n",
          cx - bar_w / 2.0, y, bar_w, top + plot_h - y, kPalette[i % std::size(kPalette)],
          escape_xml(b.label), b.mean, b.std, b.n);
      const double lo = y_of(std::max(0.0, b.mean - b.std));
      const double hi = y_of(b.mean + b.std);
      svg += fmt::format(
          "<path d=\"M{0:.1f} {1:.1f}V{2:.1f}M{3:.1f} {1:.1f}H{4:.1f}M{3:.1f} {2:.1f}H{4:.1f}\" "
          "stroke=\"black\" fill=\"none\"/>\n",
          cx, lo, hi, cx - bar_w / 6.0, cx + bar_w / 6.0);
      svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", cx,
                         top + plot_h + 18.0, escape_xml(b.label));
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace osteomorph
