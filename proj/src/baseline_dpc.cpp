#include "tnclust/baseline_dpc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tnclust/errors.hpp"
#include "tnclust/stats.hpp"

namespace tnclust {

namespace {

bool denser(const Eigen::VectorXd& rho, int j, int i) {
  return rho(j) > rho(i) || (rho(j) == rho(i) && j < i);
}

}  // namespace

Eigen::MatrixXd distance_matrix(const Eigen::MatrixXd& features) {
  const Eigen::Index n = features.rows();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist = (features.row(i) - features.row(j)).norm();
      d(i, j) = dist;
      d(j, i) = dist;
    }
  }
  return d;
}

Eigen::VectorXd dpc_rho(const Eigen::MatrixXd& dist_matrix, double d_c, DpcKernel kernel) {
  if (d_c <= 0.0) throw ParamError("dpc_rho: d_c must be positive");
  const Eigen::Index n = dist_matrix.rows();
  Eigen::VectorXd rho = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      if (kernel == DpcKernel::Cutoff) {
        if (dist_matrix(i, j) < d_c) rho(i) += 1.0;
      } else {
        const double r = dist_matrix(i, j) / d_c;
        rho(i) += std::exp(-r * r);
      }
    }
  }
  return rho;
}

DpcDeltaResult dpc_delta(const Eigen::VectorXd& rho, const Eigen::MatrixXd& dist_matrix) {
  const int n = static_cast<int>(rho.size());
  if (dist_matrix.rows() != n || dist_matrix.cols() != n)
    throw ParamError("dpc_delta: size mismatch");
  DpcDeltaResult out;
  out.delta.resize(n);
  out.nhd.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    int best = -1;
    for (int j = 0; j < n; ++j) {
      if (j == i || !denser(rho, j, i)) continue;
      if (best == -1 || dist_matrix(i, j) < dist_matrix(i, best)) best = j;
    }
    if (best == -1) {
      out.delta(i) = n > 1 ? dist_matrix.row(i).maxCoeff() : 0.0;
    } else {
      out.nhd[i] = best;
      out.delta(i) = dist_matrix(i, best);
    }
  }
  return out;
}

std::vector<int> dpc_cluster(const Eigen::MatrixXd& features, const DpcBaselineParams& params) {
  const int n = static_cast<int>(features.rows());
  if (params.k < 1) throw ParamError("dpc_cluster: k must be >= 1");
  if (params.k > n) throw ParamError("dpc_cluster: k exceeds the number of points");
  if (!(params.dc_percent > 0.0 && params.dc_percent < 1.0))
    throw ParamError("dpc_cluster: dc_percent must lie in (0,1)");

  const Eigen::MatrixXd dist = distance_matrix(features);
  std::vector<double> pair_dists;
  pair_dists.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pair_dists.push_back(dist(i, j));
  double d_c = linear_quantile(std::move(pair_dists), params.dc_percent);
  if (d_c <= 0.0) {
    // Degenerate sample (many duplicate points); fall back to the smallest
    // positive distance so the kernel stays defined.
    double smallest = 0.0;
    for (int i = 0; i < n && smallest == 0.0; ++i)
      for (int j = i + 1; j < n; ++j)
        if (dist(i, j) > 0.0 && (smallest == 0.0 || dist(i, j) < smallest))
          smallest = dist(i, j);
    if (smallest == 0.0) throw NumericError("dpc_cluster: all points coincide");
    d_c = smallest;
  }

  const Eigen::VectorXd rho = dpc_rho(dist, d_c, params.kernel);
  const auto [delta, nhd] = dpc_delta(rho, dist);

  std::vector<int> by_gamma(n);
  std::iota(by_gamma.begin(), by_gamma.end(), 0);
  std::sort(by_gamma.begin(), by_gamma.end(), [&](int a, int b) {
    const double ga = rho(a) * delta(a);
    const double gb = rho(b) * delta(b);
    return ga > gb || (ga == gb && a < b);
  });

  std::vector<int> labels(n, -1);
  for (int rank = 0; rank < params.k; ++rank) labels[by_gamma[rank]] = rank;

  std::vector<int> by_rho(n);
  std::iota(by_rho.begin(), by_rho.end(), 0);
  std::sort(by_rho.begin(), by_rho.end(), [&](int a, int b) { return denser(rho, a, b); });
  for (int i : by_rho) {
    if (labels[i] >= 0) continue;
    if (nhd[i] >= 0 && labels[nhd[i]] >= 0) {
      labels[i] = labels[nhd[i]];
    } else {
      // The density maximum was not picked as a center; attach it to the
      // nearest center by distance.
      int best = -1;
      for (int c = 0; c < n; ++c)
        if (labels[c] >= 0 && c != i && (best == -1 || dist(i, c) < dist(i, best))) best = c;
      labels[i] = labels[best];
    }
  }
  return labels;
}

}  // namespace tnclust
