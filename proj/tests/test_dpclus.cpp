#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include <doctest.h>

#include "tnclust/dpclus.hpp"
#include "tnclust/errors.hpp"
#include "tnclust/metrics.hpp"
#include "tnclust/stats.hpp"

using namespace tnclust;

namespace {

Eigen::MatrixXd symmetric_fidelity(std::initializer_list<std::initializer_list<double>> rows) {
  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd f(n, n);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) f(i, j++) = v;
    ++i;
  }
  return f;
}

// Reachability over an edge list, for checking merge_clusters.
std::vector<int> bfs_components(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> comp(n, -1);
  int next = 0;
  for (int start = 0; start < n; ++start) {
    if (comp[start] != -1) continue;
    std::queue<int> q;
    q.push(start);
    comp[start] = next;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        if (comp[v] == -1) {
          comp[v] = next;
          q.push(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

DpcParams quick_params(double dc, double fd) {
  DpcParams p;
  p.dc_percent = dc;
  p.f_d = fd;
  p.train.bond_cap = 2;
  p.train.max_sweeps = 15;
  p.train.learning_rate = 0.1;
  p.train.seed = 0;
  return p;
}

}  // namespace

TEST_SUITE("dpclus") {

TEST_CASE("compute_cutoff_fidelity: interpolated quantile of the pair fidelities") {
  const Eigen::MatrixXd f = symmetric_fidelity({{1.0, 0.1, 0.2},
                                                {0.1, 1.0, 0.3},
                                                {0.2, 0.3, 1.0}});
  // pairs {0.1, 0.2, 0.3}; 50th percentile = 0.2, and dc 0.25 interpolates
  CHECK(compute_cutoff_fidelity(f, 0.5) == doctest::Approx(0.2));
  CHECK(compute_cutoff_fidelity(f, 0.25) == doctest::Approx(0.25));

  // documented 4-value case: {0.1, 0.2, 0.3, 0.4} at dc 0.25 -> 0.325
  CHECK(linear_quantile({0.1, 0.2, 0.3, 0.4}, 0.75) == doctest::Approx(0.325));
  CHECK(linear_quantile({0.4, 0.1, 0.3, 0.2}, 0.75) == doctest::Approx(0.325));
}

TEST_CASE("compute_cutoff_fidelity: constant pairs and the dc -> 0 limit") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(5, 5, 0.42);
  m.diagonal().setOnes();
  CHECK(compute_cutoff_fidelity(m, 0.1) == doctest::Approx(0.42));
  CHECK(compute_cutoff_fidelity(m, 0.9) == doctest::Approx(0.42));

  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(4, 4);
  v(0, 1) = v(1, 0) = 0.2;
  v(0, 2) = v(2, 0) = 0.5;
  v(0, 3) = v(3, 0) = 0.9;
  v(1, 2) = v(2, 1) = 0.4;
  v(1, 3) = v(3, 1) = 0.6;
  v(2, 3) = v(3, 2) = 0.7;
  CHECK(compute_cutoff_fidelity(v, 1e-9) == doctest::Approx(0.9).epsilon(1e-6));

  CHECK_THROWS_AS(compute_cutoff_fidelity(Eigen::MatrixXd::Identity(1, 1), 0.5), ParamError);
  CHECK_THROWS_AS(compute_cutoff_fidelity(v, 0.0), ParamError);
}

TEST_CASE("compute_rho: kernel values and monotonicity") {
  Eigen::VectorXd f(3);
  f << 0.0, 1.0, 2.0;
  const Eigen::VectorXd rho = compute_rho(f, 0.1);
  CHECK(rho(0) == 0.0);
  CHECK(rho(1) == doctest::Approx(std::tanh(1.0)).epsilon(1e-15));
  CHECK(rho(1) == doctest::Approx(0.7615941559557649).epsilon(1e-12));
  CHECK(rho(0) < rho(1));
  CHECK(rho(1) < rho(2));
  for (int i = 0; i < 3; ++i) {
    CHECK(rho(i) >= 0.0);
    CHECK(rho(i) < 1.0);
  }
  CHECK_THROWS_AS(compute_rho(f, 0.0), NumericError);
}

TEST_CASE("compute_delta: single point and forced two-point case") {
  const Eigen::MatrixXd f1 = Eigen::MatrixXd::Identity(1, 1);
  const auto d1 = compute_delta(Eigen::VectorXd::Constant(1, 0.5), f1,
                                OrientationMode::DpcConsistent);
  CHECK(d1.delta(0) == 1.0);
  CHECK(d1.nhd[0] == -1);

  Eigen::MatrixXd f2 = Eigen::MatrixXd::Identity(2, 2);
  f2(0, 1) = f2(1, 0) = 0.9;
  Eigen::VectorXd rho(2);
  rho << 0.4, 0.7;
  const auto d2 = compute_delta(rho, f2, OrientationMode::DpcConsistent);
  CHECK(d2.delta(0) == doctest::Approx(0.1));
  CHECK(d2.nhd[0] == 1);
  CHECK(d2.delta(1) == 1.0);
  CHECK(d2.nhd[1] == -1);
}

TEST_CASE("compute_delta: matches a brute-force scan on a 4-point chain") {
  const Eigen::MatrixXd f = symmetric_fidelity({{1.0, 0.9, 0.5, 0.1},
                                                {0.9, 1.0, 0.8, 0.4},
                                                {0.5, 0.8, 1.0, 0.7},
                                                {0.1, 0.4, 0.7, 1.0}});
  Eigen::VectorXd rho(4);
  rho << 0.9, 0.6, 0.7, 0.3;

  const auto d = compute_delta(rho, f, OrientationMode::DpcConsistent);
  for (int i = 0; i < 4; ++i) {
    int best = -1;
    for (int j = 0; j < 4; ++j) {
      if (j == i || rho(j) <= rho(i)) continue;
      if (best == -1 || f(i, j) > f(i, best)) best = j;
    }
    if (best == -1) {
      CHECK(d.delta(i) == 1.0);
      CHECK(d.nhd[i] == -1);
    } else {
      CHECK(d.nhd[i] == best);
      CHECK(d.delta(i) == doctest::Approx(1.0 - f(i, best)));
    }
  }

  // literal mode: argmin instead
  const auto lit = compute_delta(rho, f, OrientationMode::Literal);
  CHECK(lit.nhd[1] == 2);          // min fidelity among {0, 2}: 0.9 vs 0.8 -> 2
  CHECK(lit.delta(1) == doctest::Approx(0.8));
  CHECK(lit.nhd[3] == 0);          // fidelities to 0,1,2: 0.1, 0.4, 0.7
  CHECK(lit.delta(3) == doctest::Approx(0.1));
}

TEST_CASE("compute_delta: ties in rho break by smaller index, chains stay acyclic") {
  Eigen::MatrixXd f = Eigen::MatrixXd::Constant(3, 3, 0.8);
  f.diagonal().setOnes();
  const Eigen::VectorXd rho = Eigen::VectorXd::Constant(3, 0.5);
  const auto d = compute_delta(rho, f, OrientationMode::DpcConsistent);
  CHECK(d.nhd[0] == -1);  // global maximum under the tie-broken order
  CHECK(d.nhd[1] == 0);
  CHECK(d.nhd[2] == 0);   // ties in fidelity resolved toward the smaller index
}

TEST_CASE("select_local_centers: two separated near-duplicate pairs give two centers") {
  DensityProfile profile;
  profile.rho = (Eigen::VectorXd(4) << 0.60, 0.58, 0.59, 0.57).finished();
  profile.f_c = 0.75;
  const Eigen::MatrixXd f = symmetric_fidelity({{1.0, 1.0, 0.0, 0.0},
                                                {1.0, 1.0, 0.0, 0.0},
                                                {0.0, 0.0, 1.0, 1.0},
                                                {0.0, 0.0, 1.0, 1.0}});
  const auto d = compute_delta(profile.rho, f, OrientationMode::DpcConsistent);
  profile.delta = d.delta;
  profile.nhd = d.nhd;

  const auto centers = select_local_centers(profile, OrientationMode::DpcConsistent);
  CHECK(centers == std::vector<int>{0, 2});
}

TEST_CASE("select_local_centers: degenerate profiles fall back to promotion") {
  DensityProfile profile;
  profile.rho = Eigen::VectorXd::Constant(4, 0.3);
  profile.delta = (Eigen::VectorXd(4) << 1.0, 0.0, 0.0, 0.0).finished();
  profile.nhd = {-1, 0, 0, 0};
  profile.f_c = 0.9;
  const auto centers = select_local_centers(profile, OrientationMode::DpcConsistent);
  CHECK(centers == std::vector<int>{0});

  DensityProfile single;
  single.rho = Eigen::VectorXd::Constant(1, 0.4);
  single.delta = Eigen::VectorXd::Constant(1, 1.0);
  single.nhd = {-1};
  single.f_c = 0.5;
  CHECK(select_local_centers(single, OrientationMode::DpcConsistent) ==
        std::vector<int>{0});
}

TEST_CASE("assign_local_clusters: single center, chains, and two centers") {
  {
    const Eigen::VectorXd rho = (Eigen::VectorXd(3) << 0.9, 0.5, 0.3).finished();
    const std::vector<int> labels =
        assign_local_clusters({0}, {-1, 0, 1}, rho);
    CHECK(labels == std::vector<int>{0, 0, 0});
  }
  {
    // chain a -> b -> c with c the center
    const Eigen::VectorXd rho = (Eigen::VectorXd(3) << 0.2, 0.5, 0.9).finished();
    const std::vector<int> labels =
        assign_local_clusters({2}, {1, 2, -1}, rho);
    CHECK(labels == std::vector<int>{0, 0, 0});
  }
  {
    // 6 points, 2 centers; verify against explicit path following
    const Eigen::VectorXd rho =
        (Eigen::VectorXd(6) << 0.9, 0.8, 0.5, 0.4, 0.3, 0.2).finished();
    const std::vector<int> nhd = {-1, 0, 0, 1, 2, 3};
    const std::vector<int> centers = {0, 1};
    const std::vector<int> labels = assign_local_clusters(centers, nhd, rho);
    for (int i = 0; i < 6; ++i) {
      int walk = i;
      while (std::find(centers.begin(), centers.end(), walk) == centers.end())
        walk = nhd[walk];
      const int expected = walk == 0 ? 0 : 1;
      CHECK(labels[i] == expected);
    }
  }
}

TEST_CASE("classify_core_border: singleton and identical-point clusters are all core") {
  std::vector<ProductState> points;
  points.push_back(encode_point(Eigen::Vector2d(0.1, 0.1)));
  points.push_back(encode_point(Eigen::Vector2d(0.9, 0.9)));
  points.push_back(encode_point(Eigen::Vector2d(0.9, 0.9)));
  const std::vector<int> labels = {0, 1, 1};
  const auto is_core = classify_core_border(points, labels, quick_params(0.2, 0.95));
  CHECK(is_core == std::vector<char>{1, 1, 1});
}

TEST_CASE("classify_core_border: a far outlier inside a blob cluster is border") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 0.02);
  std::vector<ProductState> points;
  for (int i = 0; i < 20; ++i)
    points.push_back(encode_point(Eigen::Vector2d(0.5 + g(rng), 0.5 + g(rng))));
  points.push_back(encode_point(Eigen::Vector2d(0.05, 0.95)));
  const std::vector<int> labels(21, 0);

  DpcParams params = quick_params(0.2, 0.95);
  params.train.max_sweeps = 30;
  const auto is_core = classify_core_border(points, labels, params);
  CHECK(is_core[20] == 0);
  CHECK(std::count(is_core.begin(), is_core.end(), 1) > 0);
}

TEST_CASE("build_connectivity: threshold comparisons over core pairs") {
  const Eigen::MatrixXd f = symmetric_fidelity({{1.0, 0.999, 0.1},
                                                {0.999, 1.0, 0.2},
                                                {0.1, 0.2, 1.0}});
  const std::vector<int> labels = {0, 1, 2};
  const std::vector<char> cores = {1, 1, 1};
  auto edges = build_connectivity(cores, labels, f, 0.99, OrientationMode::DpcConsistent);
  CHECK(edges == std::vector<std::pair<int, int>>{{0, 1}});

  // orthogonal clusters never connect
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Identity(2, 2);
  CHECK(build_connectivity({1, 1}, {0, 1}, zero, 0.01, OrientationMode::DpcConsistent)
            .empty());

  // only cores matter
  auto no_core_edges =
      build_connectivity({0, 0, 1}, labels, f, 0.99, OrientationMode::DpcConsistent);
  CHECK(no_core_edges.empty());

  // A-B similar, B-C similar, A-C not
  const Eigen::MatrixXd chain = symmetric_fidelity({{1.0, 0.995, 0.5},
                                                    {0.995, 1.0, 0.996},
                                                    {0.5, 0.996, 1.0}});
  auto chain_edges =
      build_connectivity(cores, labels, chain, 0.99, OrientationMode::DpcConsistent);
  CHECK(chain_edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});

  // literal mode uses f < f_d as printed
  auto literal_edges =
      build_connectivity(cores, labels, chain, 0.99, OrientationMode::Literal);
  CHECK(literal_edges == std::vector<std::pair<int, int>>{{0, 2}});
}

TEST_CASE("merge_clusters: identity, chain closure, and a BFS cross-check") {
  const auto none = merge_clusters(3, {});
  CHECK(none.num_components == 3);
  CHECK(none.component_of_local == std::vector<int>{0, 1, 2});

  const auto chain = merge_clusters(3, {{0, 1}, {1, 2}});
  CHECK(chain.num_components == 1);
  CHECK(chain.component_of_local == std::vector<int>{0, 0, 0});

  const std::vector<std::pair<int, int>> edges = {{0, 2}, {2, 4}, {1, 3}};
  const auto merged = merge_clusters(5, edges);
  const auto expected = bfs_components(5, edges);
  CHECK(merged.num_components == 2);
  CHECK(merged.component_of_local == expected);
}

TEST_CASE("cluster: two orthogonal near-duplicate groups give two exact clusters") {
  // groups around (0,0) and (1,1) with tiny in-group spread
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 0.04);
  Eigen::MatrixXd raw(20, 2);
  std::vector<int> truth(20);
  for (int i = 0; i < 10; ++i) {
    raw.row(i) << u(rng), u(rng);
    truth[i] = 0;
  }
  for (int i = 10; i < 20; ++i) {
    raw.row(i) << 1.0 - u(rng), 1.0 - u(rng);
    truth[i] = 1;
  }

  DpcParams params = quick_params(0.05, 0.9);
  params.train.max_sweeps = 30;
  const PipelineOutput out = cluster(raw, params);
  CHECK(out.clustering.num_final == 2);
  CHECK(ari(out.clustering.final_labels, truth) == doctest::Approx(1.0));
}

TEST_CASE("cluster: smallest legal input yields a valid partition") {
  Eigen::MatrixXd raw(2, 2);
  raw << 0.0, 0.0, 1.0, 1.0;
  const PipelineOutput out = cluster(raw, quick_params(0.5, 0.9));
  REQUIRE(out.clustering.final_labels.size() == 2);
  for (int l : out.clustering.final_labels) {
    CHECK(l >= 0);
    CHECK(l < out.clustering.num_final);
  }
  CHECK(out.clustering.num_final >= 1);
  CHECK(out.clustering.num_final <= 2);
}

TEST_CASE("cluster: final partition coarsens the local partition, labels contiguous") {
  std::mt19937_64 rng(44);
  std::normal_distribution<double> g(0.0, 0.05);
  Eigen::MatrixXd raw(60, 2);
  for (int i = 0; i < 30; ++i) raw.row(i) << 0.2 + g(rng), 0.2 + g(rng);
  for (int i = 30; i < 60; ++i) raw.row(i) << 0.8 + g(rng), 0.8 + g(rng);

  const PipelineOutput out = cluster(raw, quick_params(0.02, 0.97));
  const ClusteringResult& r = out.clustering;
  REQUIRE(static_cast<int>(r.component_of_local.size()) == r.num_local);
  std::vector<char> seen(r.num_final, 0);
  for (std::size_t i = 0; i < r.final_labels.size(); ++i) {
    CHECK(r.final_labels[i] == r.component_of_local[r.local_labels[i]]);
    REQUIRE(r.final_labels[i] < r.num_final);
    seen[r.final_labels[i]] = 1;
  }
  CHECK(std::count(seen.begin(), seen.end(), 0) == 0);
  CHECK(r.num_final <= r.num_local);

  // disabling edges keeps the local partition (spec property: f_d above any
  // attainable fidelity disables all merging)
  const auto edges = build_connectivity(r.is_core, r.local_labels,
                                        fidelity_matrix(minmax_normalize(raw)), 1.0 + 1e-9,
                                        OrientationMode::DpcConsistent);
  CHECK(edges.empty());
}

TEST_CASE("cluster: deterministic for a fixed seed") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 0.1);
  Eigen::MatrixXd raw(40, 2);
  for (int i = 0; i < 40; ++i)
    raw.row(i) << (i < 20 ? 0.0 : 1.0) + g(rng), (i < 20 ? 0.0 : 1.0) + g(rng);

  const DpcParams params = quick_params(0.05, 0.95);
  const PipelineOutput a = cluster(raw, params);
  const PipelineOutput b = cluster(raw, params);
  CHECK(a.clustering.final_labels == b.clustering.final_labels);
  CHECK(a.clustering.is_core == b.clustering.is_core);
  CHECK((a.profile.rho.array() == b.profile.rho.array()).all());
}

TEST_CASE("cluster: errors carry their stage name") {
  Eigen::MatrixXd raw(3, 2);
  raw << 0, 0, 1, std::numeric_limits<double>::quiet_NaN(), 2, 2;
  CHECK_THROWS_WITH_AS(cluster(raw, quick_params(0.1, 0.9)),
                       doctest::Contains("normalize"), DataError);

  Eigen::MatrixXd tiny(1, 2);
  tiny << 0, 0;
  CHECK_THROWS_AS(cluster(tiny, quick_params(0.1, 0.9)), ParamError);

  DpcParams bad = quick_params(0.1, 0.9);
  bad.dc_percent = 1.5;
  Eigen::MatrixXd ok(3, 2);
  ok << 0, 0, 0.5, 0.5, 1, 1;
  CHECK_THROWS_AS(cluster(ok, bad), ParamError);
}

}  // TEST_SUITE
