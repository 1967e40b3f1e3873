#pragma once

#include <vector>

#include <Eigen/Core>

namespace tnclust {

/// Cross-tabulation of two labelings over the same points.
struct ContingencyTable {
  Eigen::MatrixXi counts;  // rows: predicted labels, cols: true labels
  int n = 0;

  static ContingencyTable build(const std::vector<int>& pred, const std::vector<int>& truth);

  /// True when the two partitions coincide as set partitions.
  bool partitions_identical() const;
};

/// Fowlkes-Mallows index over point pairs; 0 when either partition has no
/// co-clustered pair.
double fmi(const std::vector<int>& pred, const std::vector<int>& truth);

/// Adjusted Rand index; when both partitions are trivial the convention is
/// 1 for identical partitions and 0 otherwise.
double ari(const std::vector<int>& pred, const std::vector<int>& truth);

/// Normalized mutual information with natural logs and geometric-mean
/// normalization; zero-entropy convention as for ari.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

/// Best accuracy over injective label mappings, via optimal assignment on
/// the contingency table.
double acc(const std::vector<int>& pred, const std::vector<int>& truth);

}  // namespace tnclust
