#include "tnclust/dpclus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tnclust/errors.hpp"
#include "tnclust/stats.hpp"

namespace tnclust {

namespace {

// Strict density order: ties in rho are broken by smaller index.
bool denser(const Eigen::VectorXd& rho, int j, int i) {
  return rho(j) > rho(i) || (rho(j) == rho(i) && j < i);
}

int density_argmax(const Eigen::VectorXd& rho) {
  int best = 0;
  for (int i = 1; i < rho.size(); ++i)
    if (denser(rho, i, best)) best = i;
  return best;
}

std::vector<int> density_order(const Eigen::VectorXd& rho) {
  std::vector<int> order(rho.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return denser(rho, a, b); });
  return order;
}

struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];  // path compression
      x = parent[x];
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const ParamError& e) {
    throw ParamError(std::string(name) + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(std::string(name) + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(std::string(name) + ": " + e.what());
  }
}

void validate_params(const DpcParams& p) {
  if (!(p.dc_percent > 0.0 && p.dc_percent < 1.0))
    throw ParamError("dc_percent must lie in (0,1)");
  if (!(p.f_d > 0.0 && p.f_d < 1.0))
    throw ParamError("f_d must lie in (0,1)");
}

}  // namespace

double compute_cutoff_fidelity(const Eigen::MatrixXd& fid_matrix, double dc_percent) {
  const Eigen::Index n = fid_matrix.rows();
  if (n < 2) throw ParamError("compute_cutoff_fidelity: need at least 2 points");
  if (fid_matrix.cols() != n)
    throw ParamError("compute_cutoff_fidelity: matrix must be square");
  if (!(dc_percent > 0.0 && dc_percent < 1.0))
    throw ParamError("compute_cutoff_fidelity: dc_percent must lie in (0,1)");

  std::vector<double> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) pairs.push_back(fid_matrix(i, j));
  return linear_quantile(std::move(pairs), 1.0 - dc_percent);
}

Eigen::VectorXd compute_rho(const Eigen::VectorXd& f_global, double f_c) {
  if (f_c == 0.0) throw NumericError("compute_rho: degenerate cutoff (f_c = 0)");
  if (f_c < 0.0) throw ParamError("compute_rho: f_c must be positive");
  return (f_global.array() / (10.0 * f_c)).tanh();
}

DeltaResult compute_delta(const Eigen::VectorXd& rho, const Eigen::MatrixXd& fid_matrix,
                          OrientationMode mode) {
  const int n = static_cast<int>(rho.size());
  if (fid_matrix.rows() != n || fid_matrix.cols() != n)
    throw ParamError("compute_delta: size mismatch");

  DeltaResult out;
  out.delta.resize(n);
  out.nhd.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    int best = -1;
    for (int j = 0; j < n; ++j) {
      if (j == i || !denser(rho, j, i)) continue;
      if (best == -1) {
        best = j;
        continue;
      }
      const double fj = fid_matrix(i, j);
      const double fb = fid_matrix(i, best);
      if (mode == OrientationMode::DpcConsistent ? fj > fb : fj < fb) best = j;
    }
    if (best == -1) {
      // Global density maximum: maximal isolation, no neighbor.
      out.delta(i) = 1.0;
    } else {
      out.nhd[i] = best;
      out.delta(i) = mode == OrientationMode::DpcConsistent
                         ? 1.0 - fid_matrix(i, best)
                         : fid_matrix(i, best);
    }
  }
  return out;
}

std::vector<int> select_local_centers(const DensityProfile& profile, OrientationMode mode) {
  const int n = static_cast<int>(profile.rho.size());
  const double mean_rho = profile.rho.mean();
  const double delta_threshold =
      mode == OrientationMode::DpcConsistent ? 1.0 - profile.f_c : profile.f_c;

  std::vector<int> centers;
  for (int i = 0; i < n; ++i) {
    if (profile.delta(i) > delta_threshold && profile.rho(i) > mean_rho)
      centers.push_back(i);
  }
  if (centers.empty()) centers.push_back(density_argmax(profile.rho));
  std::sort(centers.begin(), centers.end(),
            [&](int a, int b) { return denser(profile.rho, a, b); });
  return centers;
}

std::vector<int> assign_local_clusters(const std::vector<int>& centers,
                                       const std::vector<int>& nhd,
                                       const Eigen::VectorXd& rho) {
  const int n = static_cast<int>(rho.size());
  std::vector<int> labels(n, -1);
  for (std::size_t rank = 0; rank < centers.size(); ++rank)
    labels[centers[rank]] = static_cast<int>(rank);

  // Resolving in decreasing-density order guarantees nhd[i] is labeled
  // before i is visited.
  for (int i : density_order(rho)) {
    if (labels[i] >= 0) continue;
    if (nhd[i] < 0 || labels[nhd[i]] < 0)
      throw NumericError("assign_local_clusters: unresolved nhd chain");
    labels[i] = labels[nhd[i]];
  }
  return labels;
}

std::vector<char> classify_core_border(const std::vector<ProductState>& points,
                                       const std::vector<int>& local_labels,
                                       const DpcParams& params,
                                       std::vector<TrainLog>* cluster_logs) {
  const int n = static_cast<int>(points.size());
  if (static_cast<int>(local_labels.size()) != n)
    throw ParamError("classify_core_border: label count mismatch");
  const int num_local = local_labels.empty()
                            ? 0
                            : *std::max_element(local_labels.begin(), local_labels.end()) + 1;

  std::vector<std::vector<int>> members(num_local);
  for (int i = 0; i < n; ++i) members[local_labels[i]].push_back(i);

  std::vector<char> is_core(n, 0);
  if (cluster_logs) cluster_logs->assign(num_local, TrainLog{});
  for (int k = 0; k < num_local; ++k) {
    const auto& idx = members[k];
    if (idx.size() == 1) {
      // A border singleton could never merge; the sole point is core.
      is_core[idx[0]] = 1;
      continue;
    }
    std::vector<ProductState> cluster_data;
    cluster_data.reserve(idx.size());
    for (int i : idx) cluster_data.push_back(points[i]);

    TrainConfig cfg = params.train;
    cfg.seed = params.train.seed + static_cast<std::uint64_t>(k);
    auto [phi_k, log] = train_mps(cluster_data, cfg);
    if (cluster_logs) (*cluster_logs)[k] = log;

    Eigen::VectorXd f(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j)
      f(j) = fidelity_to_mps(points[idx[j]], phi_k);
    const double mean = f.mean();
    if ((f.array() - mean).abs().maxCoeff() <= 1e-12) {
      // All fidelities coincide; strict > would strand the whole cluster.
      for (int i : idx) is_core[i] = 1;
    } else {
      for (std::size_t j = 0; j < idx.size(); ++j)
        if (f(j) > mean) is_core[idx[j]] = 1;
    }
  }
  return is_core;
}

std::vector<std::pair<int, int>> build_connectivity(const std::vector<char>& is_core,
                                                    const std::vector<int>& local_labels,
                                                    const Eigen::MatrixXd& fid_matrix,
                                                    double f_d, OrientationMode mode) {
  const int n = static_cast<int>(local_labels.size());
  const int num_local =
      local_labels.empty() ? 0 : *std::max_element(local_labels.begin(), local_labels.end()) + 1;
  std::vector<std::vector<int>> cores(num_local);
  for (int i = 0; i < n; ++i)
    if (is_core[i]) cores[local_labels[i]].push_back(i);

  std::vector<std::pair<int, int>> edges;
  for (int k = 0; k < num_local; ++k) {
    for (int l = k + 1; l < num_local; ++l) {
      bool connected = false;
      for (int i : cores[k]) {
        for (int j : cores[l]) {
          const double f = fid_matrix(i, j);
          if (mode == OrientationMode::DpcConsistent ? f >= f_d : f < f_d) {
            connected = true;
            break;
          }
        }
        if (connected) break;
      }
      if (connected) edges.emplace_back(k, l);
    }
  }
  return edges;
}

MergeResult merge_clusters(int num_local, const std::vector<std::pair<int, int>>& edges) {
  if (num_local < 0) throw ParamError("merge_clusters: negative cluster count");
  UnionFind uf(num_local);
  for (const auto& [a, b] : edges) {
    if (a < 0 || a >= num_local || b < 0 || b >= num_local)
      throw ParamError("merge_clusters: edge endpoint out of range");
    uf.unite(a, b);
  }

  // Roots are the smallest members of their components; number components
  // in root order so final labels are contiguous from 0.
  std::vector<int> root_to_component(num_local, -1);
  MergeResult out;
  out.component_of_local.resize(num_local);
  for (int k = 0; k < num_local; ++k) {
    const int root = uf.find(k);
    if (root_to_component[root] == -1) root_to_component[root] = out.num_components++;
    out.component_of_local[k] = root_to_component[root];
  }
  return out;
}

PipelineOutput cluster(const Eigen::MatrixXd& raw_data, const DpcParams& params) {
  if (raw_data.rows() < 2) throw ParamError("cluster: need at least 2 points");
  validate_params(params);

  const NormalizedDataset normalized =
      stage("normalize", [&] { return minmax_normalize(raw_data); });
  const std::vector<ProductState> points =
      stage("encode", [&] { return encode_dataset(normalized); });

  TrainConfig train_cfg = params.train;
  auto [phi, train_log] =
      stage("train-global", [&] { return train_mps(points, train_cfg); });

  const Eigen::MatrixXd fid =
      stage("fidelity", [&] { return fidelity_matrix(normalized); });

  DensityProfile profile;
  stage("density", [&] {
    profile.f_global.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
      profile.f_global(i) = fidelity_to_mps(points[i], phi);
    profile.f_c = compute_cutoff_fidelity(fid, params.dc_percent);
    if (profile.f_c == 0.0) {
      // Every pair at this quantile is fully orthogonal (e.g. two distinct
      // points); fall back to the smallest positive pair fidelity, or the
      // self-fidelity scale, so the density kernel stays defined.
      double smallest = 1.0;
      for (Eigen::Index i = 0; i < fid.rows(); ++i)
        for (Eigen::Index j = i + 1; j < fid.cols(); ++j)
          if (fid(i, j) > 0.0 && fid(i, j) < smallest) smallest = fid(i, j);
      profile.f_c = smallest;
    }
    profile.rho = compute_rho(profile.f_global, profile.f_c);
    auto [delta, nhd] = compute_delta(profile.rho, fid, params.mode);
    profile.delta = std::move(delta);
    profile.nhd = std::move(nhd);
    return 0;
  });

  ClusteringResult result;
  const std::vector<int> centers =
      stage("centers", [&] { return select_local_centers(profile, params.mode); });
  result.local_labels = stage(
      "assign", [&] { return assign_local_clusters(centers, profile.nhd, profile.rho); });
  result.num_local = static_cast<int>(centers.size());

  result.is_core = stage("core-border", [&] {
    return classify_core_border(points, result.local_labels, params);
  });

  const auto edges = stage("connect", [&] {
    return build_connectivity(result.is_core, result.local_labels, fid, params.f_d,
                              params.mode);
  });
  const MergeResult merged =
      stage("merge", [&] { return merge_clusters(result.num_local, edges); });
  result.component_of_local = merged.component_of_local;
  result.num_final = merged.num_components;
  result.final_labels.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    result.final_labels[i] = result.component_of_local[result.local_labels[i]];

  return PipelineOutput{std::move(result), std::move(profile), std::move(train_log)};
}

}  // namespace tnclust
