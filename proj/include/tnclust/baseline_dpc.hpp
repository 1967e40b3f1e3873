#pragma once

#include <vector>

#include <Eigen/Core>

namespace tnclust {

enum class DpcKernel { Cutoff, Gaussian };

struct DpcBaselineParams {
  double dc_percent = 0.02;
  DpcKernel kernel = DpcKernel::Gaussian;
  int k = 1;  // number of cluster centers; the baseline needs it up front
};

/// Pairwise Euclidean distances.
Eigen::MatrixXd distance_matrix(const Eigen::MatrixXd& features);

/// Cutoff: count of neighbors within d_c. Gaussian: sum of exp(-(d/d_c)^2)
/// over the other points.
Eigen::VectorXd dpc_rho(const Eigen::MatrixXd& dist_matrix, double d_c, DpcKernel kernel);

struct DpcDeltaResult {
  Eigen::VectorXd delta;
  std::vector<int> nhd;  // -1 for the density maximum
};

/// Distance to the nearest higher-density point; the density maximum gets
/// its row maximum instead.
DpcDeltaResult dpc_delta(const Eigen::VectorXd& rho, const Eigen::MatrixXd& dist_matrix);

/// Classical density-peak clustering: d_c from the dc_percent distance
/// quantile, centers as the top-k by gamma = rho * delta, remaining points
/// assigned to their neighbor's label in decreasing-density order.
std::vector<int> dpc_cluster(const Eigen::MatrixXd& features, const DpcBaselineParams& params);

}  // namespace tnclust
