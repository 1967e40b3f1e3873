#pragma once

#include <vector>

#include <Eigen/Core>

#include "tnclust/mps.hpp"
#include "tnclust/product_state.hpp"

namespace tnclust {

/// Feature matrix rescaled column-wise into [0,1], with the original
/// column ranges kept for provenance.
struct NormalizedDataset {
  Eigen::MatrixXd rows;
  Eigen::VectorXd feature_mins;
  Eigen::VectorXd feature_maxs;

  Eigen::Index n() const { return rows.rows(); }
  Eigen::Index m() const { return rows.cols(); }
};

/// Column-wise (x - min) / (max - min); constant columns map to 0.5.
/// NaN or Inf entries raise a DataError naming the offending cell.
NormalizedDataset minmax_normalize(const Eigen::MatrixXd& raw);

/// Site l of the result carries (cos(pi/2 x_l), sin(pi/2 x_l)). Entries must
/// lie in [0,1] up to a 1e-12 clamping tolerance.
ProductState encode_point(const Eigen::VectorXd& x);

/// Encodes every row, tagging each state with its row index.
std::vector<ProductState> encode_dataset(const NormalizedDataset& data);

/// |<a|b>| as the closed-form product of per-site overlaps, accumulated in
/// log space. Agrees with the tensor contraction to 1e-12.
double pairwise_fidelity(const ProductState& a, const ProductState& b);

/// Symmetric matrix of pairwise fidelities with unit diagonal.
Eigen::MatrixXd fidelity_matrix(const NormalizedDataset& data);

/// |<p|phi>| via the chain contraction; phi is expected to be normalized.
double fidelity_to_mps(const ProductState& p, const MPS& phi);

}  // namespace tnclust
