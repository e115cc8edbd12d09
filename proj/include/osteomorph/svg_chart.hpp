#pragma once

#include <string>
#include <vector>

namespace osteomorph {

struct ErrorBar {
  std::string label;
  double mean = 0.0;
  double std = 0.0;
  std::size_t n = 0;
};

struct BarChartOptions {
  std::string title;
  std::string y_label;
  std::string header_comment;  // emitted as an XML comment after the prolog
  int width = 480;
  int height = 320;
};

// Mean +- std bars with whiskers. Output is a pure function of the inputs.
std::string render_bar_chart(const std::vector<ErrorBar>& bars, const BarChartOptions& options);

}  // namespace osteomorph
