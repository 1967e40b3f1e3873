#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace tnclust {

/// 2-d scatter colored by label; `centers` are drawn as ring markers.
void write_scatter_svg(const std::filesystem::path& path, const Eigen::MatrixXd& xy,
                       const std::vector<int>& labels, const std::vector<int>& centers,
                       const std::string& title = "");

/// Simple line chart with point markers.
void write_line_svg(const std::filesystem::path& path, const std::vector<double>& xs,
                    const std::vector<double>& ys, const std::string& x_label,
                    const std::string& y_label, const std::string& title = "");

}  // namespace tnclust
