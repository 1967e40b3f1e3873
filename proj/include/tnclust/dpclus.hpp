#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "tnclust/encoding.hpp"
#include "tnclust/train.hpp"

namespace tnclust {

/// Eq.-as-printed vs similarity-consistent orientation of the delta and
/// connectability formulas. dpc-consistent treats fidelity as similarity
/// (nearest = highest fidelity, clusters connect when cores are similar);
/// literal keeps the printed min / < comparisons for auditability.
enum class OrientationMode { DpcConsistent, Literal };

struct DpcParams {
  double dc_percent = 0.002;
  double f_d = 0.99;
  OrientationMode mode = OrientationMode::DpcConsistent;
  TrainConfig train;
};

struct DensityProfile {
  Eigen::VectorXd rho;
  Eigen::VectorXd delta;
  std::vector<int> nhd;  // nearest higher-density neighbor; -1 where absent
  Eigen::VectorXd f_global;
  double f_c = 0.0;
};

struct ClusteringResult {
  std::vector<int> local_labels;
  std::vector<char> is_core;
  std::vector<int> component_of_local;
  std::vector<int> final_labels;
  int num_local = 0;
  int num_final = 0;
};

struct PipelineOutput {
  ClusteringResult clustering;
  DensityProfile profile;
  TrainLog train_log;
};

/// Cutoff fidelity: the (1 - dc_percent) quantile of the off-diagonal
/// upper-triangle fidelities, so dc_percent of pairs are more similar.
double compute_cutoff_fidelity(const Eigen::MatrixXd& fid_matrix, double dc_percent);

/// rho_i = tanh(f_i / (10 f_c)).
Eigen::VectorXd compute_rho(const Eigen::VectorXd& f_global, double f_c);

struct DeltaResult {
  Eigen::VectorXd delta;
  std::vector<int> nhd;
};

/// Isolation from higher-density points. Ties in rho are broken by smaller
/// index, which makes the density order strict and the nhd chains acyclic.
/// The global density maximum has no neighbor and delta = 1.
DeltaResult compute_delta(const Eigen::VectorXd& rho, const Eigen::MatrixXd& fid_matrix,
                          OrientationMode mode);

/// Local cluster centers: delta above threshold and rho above the mean.
/// Guaranteed non-empty (the density maximum is promoted when no point
/// qualifies). Returned sorted by decreasing density.
std::vector<int> select_local_centers(const DensityProfile& profile, OrientationMode mode);

/// Centers get labels 0..L-1 by decreasing density; every other point
/// inherits the label of its nearest higher-density neighbor.
std::vector<int> assign_local_clusters(const std::vector<int>& centers,
                                       const std::vector<int>& nhd,
                                       const Eigen::VectorXd& rho);

/// Trains one MPS per local cluster and flags members whose fidelity to it
/// exceeds the cluster mean. Singletons and degenerate all-equal clusters
/// are entirely core.
std::vector<char> classify_core_border(const std::vector<ProductState>& points,
                                       const std::vector<int>& local_labels,
                                       const DpcParams& params,
                                       std::vector<TrainLog>* cluster_logs = nullptr);

/// Edges between local clusters that share a sufficiently similar pair of
/// core points (f >= f_d in dpc-consistent mode, f < f_d in literal mode).
std::vector<std::pair<int, int>> build_connectivity(const std::vector<char>& is_core,
                                                    const std::vector<int>& local_labels,
                                                    const Eigen::MatrixXd& fid_matrix,
                                                    double f_d, OrientationMode mode);

struct MergeResult {
  std::vector<int> component_of_local;
  int num_components = 0;
};

/// Connected components of the cluster graph, numbered by smallest member.
MergeResult merge_clusters(int num_local, const std::vector<std::pair<int, int>>& edges);

/// Full pipeline: normalize, encode, train the global MPS, fidelities,
/// density profile, local clusters, core/border, connectivity, merge.
/// Deterministic given params.train.seed.
PipelineOutput cluster(const Eigen::MatrixXd& raw_data, const DpcParams& params);

}  // namespace tnclust
