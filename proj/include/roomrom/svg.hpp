// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace roomrom {

// Minimal self-contained SVG line plots for report output.
struct SvgSeries {
  std::string label;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

struct SvgPlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 720;
  int height = 480;
};

void write_svg_plot(const std::string& path, const std::vector<SvgSeries>& series,
                    const SvgPlotOptions& options);

}  // namespace roomrom
