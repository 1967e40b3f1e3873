// Independent reference computations used by the tests: dense state-vector
// expansions, brute-force pair counting, exhaustive scans. These never call
// the code paths they are checking.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "tnclust/mps.hpp"
#include "tnclust/product_state.hpp"

namespace oracle {

// Full 2^m amplitude vector; site 0 is the most significant bit.
inline Eigen::VectorXd dense_amplitudes(const tnclust::MPS& mps) {
  Eigen::MatrixXd cur = Eigen::MatrixXd::Ones(1, 1);
  for (int i = 0; i < mps.length(); ++i) {
    const tnclust::SiteTensor& t = mps.site(i);
    Eigen::MatrixXd next(cur.rows() * 2, t.right_dim());
    for (Eigen::Index x = 0; x < cur.rows(); ++x) {
      next.row(2 * x) = cur.row(x) * t.phys[0];
      next.row(2 * x + 1) = cur.row(x) * t.phys[1];
    }
    cur = std::move(next);
  }
  return cur.col(0);
}

inline Eigen::VectorXd dense_amplitudes(const tnclust::ProductState& p) {
  Eigen::VectorXd cur = Eigen::VectorXd::Ones(1);
  for (const Eigen::Vector2d& site : p.site_amplitudes) {
    Eigen::VectorXd next(cur.size() * 2);
    for (Eigen::Index x = 0; x < cur.size(); ++x) {
      next(2 * x) = cur(x) * site[0];
      next(2 * x + 1) = cur(x) * site[1];
    }
    cur = std::move(next);
  }
  return cur;
}

// Schmidt values across a bond from the dense amplitudes.
inline std::vector<double> dense_schmidt(const tnclust::MPS& mps, int bond) {
  const Eigen::VectorXd amps = dense_amplitudes(mps);
  const Eigen::Index rows = Eigen::Index(1) << bond;
  const Eigen::Index cols = amps.size() / rows;
  Eigen::MatrixXd block(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) block.row(r) = amps.segment(r * cols, cols);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(block);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double s = svd.singularValues()(i);
    if (s > 1e-12) out.push_back(s);
  }
  return out;
}

// Pair-counting clustering indices, enumerated over all point pairs.
struct PairTally {
  long long both = 0, pred_only = 0, truth_only = 0, neither = 0;
};

inline PairTally tally_pairs(const std::vector<int>& pred, const std::vector<int>& truth) {
  PairTally t;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = i + 1; j < pred.size(); ++j) {
      const bool p = pred[i] == pred[j];
      const bool q = truth[i] == truth[j];
      if (p && q) ++t.both;
      else if (p) ++t.pred_only;
      else if (q) ++t.truth_only;
      else ++t.neither;
    }
  }
  return t;
}

inline double brute_fmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  const PairTally t = tally_pairs(pred, truth);
  const double pp = static_cast<double>(t.both + t.pred_only);
  const double tq = static_cast<double>(t.both + t.truth_only);
  if (pp == 0.0 || tq == 0.0) return 0.0;
  return t.both / std::sqrt(pp * tq);
}

inline double brute_ari(const std::vector<int>& pred, const std::vector<int>& truth) {
  const PairTally t = tally_pairs(pred, truth);
  const double total = static_cast<double>(t.both + t.pred_only + t.truth_only + t.neither);
  const double pp = static_cast<double>(t.both + t.pred_only);
  const double tq = static_cast<double>(t.both + t.truth_only);
  const double expected = pp * tq / total;
  const double max_index = 0.5 * (pp + tq);
  if (max_index == expected) {
    // both partitions trivial
    std::vector<int> a(pred), b(truth);
    return t.pred_only == 0 && t.truth_only == 0 ? 1.0 : 0.0;
  }
  return (t.both - expected) / (max_index - expected);
}

// Best accuracy over all injective mappings of predicted to true labels.
inline double brute_acc(const std::vector<int>& pred, const std::vector<int>& truth) {
  auto uniq = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  const std::vector<int> pl = uniq(pred);
  std::vector<int> tl = uniq(truth);
  // Pad true labels with dummies so permutations cover "maps to nothing".
  while (tl.size() < pl.size()) tl.push_back(-1 - static_cast<int>(tl.size()));
  std::sort(tl.begin(), tl.end());
  long long best = 0;
  do {
    long long correct = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const std::size_t pi =
          std::lower_bound(pl.begin(), pl.end(), pred[i]) - pl.begin();
      if (tl[pi] == truth[i]) ++correct;
    }
    best = std::max(best, correct);
  } while (std::next_permutation(tl.begin(), tl.end()));
  return static_cast<double>(best) / pred.size();
}

inline double brute_nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  const double n = static_cast<double>(pred.size());
  auto prob = [&](const std::vector<int>& labels) {
    std::vector<std::pair<int, double>> p;
    for (int l : labels) {
      auto it = std::find_if(p.begin(), p.end(), [&](auto& kv) { return kv.first == l; });
      if (it == p.end()) p.emplace_back(l, 1.0);
      else it->second += 1.0;
    }
    for (auto& kv : p) kv.second /= n;
    return p;
  };
  const auto pp = prob(pred);
  const auto pt = prob(truth);
  auto entropy = [](const std::vector<std::pair<int, double>>& p) {
    double h = 0.0;
    for (const auto& kv : p) h -= kv.second * std::log(kv.second);
    return h;
  };
  const double hp = entropy(pp);
  const double ht = entropy(pt);
  if (hp == 0.0 || ht == 0.0) {
    const bool identical = oracle::tally_pairs(pred, truth).pred_only == 0 &&
                           oracle::tally_pairs(pred, truth).truth_only == 0;
    return identical ? 1.0 : 0.0;
  }
  double mi = 0.0;
  for (const auto& [a, pa] : pp) {
    for (const auto& [b, pb] : pt) {
      double joint = 0.0;
      for (std::size_t i = 0; i < pred.size(); ++i)
        if (pred[i] == a && truth[i] == b) joint += 1.0;
      joint /= n;
      if (joint > 0.0) mi += joint * std::log(joint / (pa * pb));
    }
  }
  return mi / std::sqrt(hp * ht);
}

inline std::vector<int> random_labels(std::mt19937_64& rng, int n, int max_labels) {
  std::uniform_int_distribution<int> d(0, max_labels - 1);
  std::vector<int> out(n);
  for (int& l : out) l = d(rng);
  return out;
}

}  // namespace oracle
