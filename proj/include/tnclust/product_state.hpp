#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace tnclust {

/// Rank-1 encoding of one data point: site l carries the unit pair
/// (cos(pi/2 x_l), sin(pi/2 x_l)).
struct ProductState {
  std::vector<Eigen::Vector2d> site_amplitudes;
  std::optional<Eigen::Index> source_index;

  int length() const { return static_cast<int>(site_amplitudes.size()); }
};

}  // namespace tnclust
