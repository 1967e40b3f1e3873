#include "tnclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "tnclust/errors.hpp"

namespace tnclust {

namespace {

std::vector<int> compress_labels(const std::vector<int>& labels) {
  std::map<int, int> ids;
  for (int l : labels) ids.emplace(l, 0);
  int next = 0;
  for (auto& [label, id] : ids) id = next++;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = ids[labels[i]];
  return out;
}

void check_inputs(const std::vector<int>& pred, const std::vector<int>& truth,
                  const char* who) {
  if (pred.size() != truth.size())
    throw ParamError(std::string(who) + ": label vectors differ in length");
  if (pred.size() < 2) throw ParamError(std::string(who) + ": need at least 2 points");
}

double choose2(long long c) { return 0.5 * static_cast<double>(c) * static_cast<double>(c - 1); }

struct PairCounts {
  double tp = 0.0;       // co-clustered in both
  double pred_pairs = 0.0;
  double truth_pairs = 0.0;
  double total_pairs = 0.0;
};

PairCounts pair_counts(const ContingencyTable& t) {
  PairCounts pc;
  for (Eigen::Index i = 0; i < t.counts.rows(); ++i)
    for (Eigen::Index j = 0; j < t.counts.cols(); ++j) pc.tp += choose2(t.counts(i, j));
  const Eigen::VectorXi row_sums = t.counts.rowwise().sum();
  const Eigen::VectorXi col_sums = t.counts.colwise().sum();
  for (Eigen::Index i = 0; i < row_sums.size(); ++i) pc.pred_pairs += choose2(row_sums(i));
  for (Eigen::Index j = 0; j < col_sums.size(); ++j) pc.truth_pairs += choose2(col_sums(j));
  pc.total_pairs = choose2(t.n);
  return pc;
}

// Hungarian assignment (potentials form) minimizing cost over a square
// matrix; O(n^3).
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_of_col(n);
  for (int j = 1; j <= n; ++j) row_of_col[j - 1] = p[j] - 1;
  return row_of_col;
}

}  // namespace

ContingencyTable ContingencyTable::build(const std::vector<int>& pred,
                                         const std::vector<int>& truth) {
  check_inputs(pred, truth, "ContingencyTable::build");
  const std::vector<int> p = compress_labels(pred);
  const std::vector<int> t = compress_labels(truth);
  const int r = *std::max_element(p.begin(), p.end()) + 1;
  const int s = *std::max_element(t.begin(), t.end()) + 1;
  ContingencyTable table;
  table.counts = Eigen::MatrixXi::Zero(r, s);
  table.n = static_cast<int>(pred.size());
  for (std::size_t i = 0; i < p.size(); ++i) ++table.counts(p[i], t[i]);
  return table;
}

bool ContingencyTable::partitions_identical() const {
  if (counts.rows() != counts.cols()) return false;
  for (Eigen::Index i = 0; i < counts.rows(); ++i) {
    if ((counts.row(i).array() != 0).count() != 1) return false;
  }
  for (Eigen::Index j = 0; j < counts.cols(); ++j) {
    if ((counts.col(j).array() != 0).count() != 1) return false;
  }
  return true;
}

double fmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_inputs(pred, truth, "fmi");
  const PairCounts pc = pair_counts(ContingencyTable::build(pred, truth));
  if (pc.pred_pairs == 0.0 || pc.truth_pairs == 0.0) return 0.0;
  return pc.tp / std::sqrt(pc.pred_pairs * pc.truth_pairs);
}

double ari(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_inputs(pred, truth, "ari");
  const ContingencyTable table = ContingencyTable::build(pred, truth);
  const PairCounts pc = pair_counts(table);
  const bool both_trivial =
      (pc.pred_pairs == 0.0 && pc.truth_pairs == 0.0) ||
      (pc.pred_pairs == pc.total_pairs && pc.truth_pairs == pc.total_pairs);
  if (both_trivial) return table.partitions_identical() ? 1.0 : 0.0;
  const double expected = pc.pred_pairs * pc.truth_pairs / pc.total_pairs;
  const double max_index = 0.5 * (pc.pred_pairs + pc.truth_pairs);
  return (pc.tp - expected) / (max_index - expected);
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_inputs(pred, truth, "nmi");
  const ContingencyTable table = ContingencyTable::build(pred, truth);
  const double n = table.n;
  const Eigen::VectorXi row_sums = table.counts.rowwise().sum();
  const Eigen::VectorXi col_sums = table.counts.colwise().sum();

  auto entropy = [n](const Eigen::VectorXi& sums) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < sums.size(); ++i) {
      if (sums(i) == 0) continue;
      const double p = sums(i) / n;
      h -= p * std::log(p);
    }
    return h;
  };
  const double hp = entropy(row_sums);
  const double ht = entropy(col_sums);
  if (hp == 0.0 || ht == 0.0) return table.partitions_identical() ? 1.0 : 0.0;

  double mi = 0.0;
  for (Eigen::Index i = 0; i < table.counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.counts.cols(); ++j) {
      const int c = table.counts(i, j);
      if (c == 0) continue;
      mi += (c / n) * std::log(n * c / (static_cast<double>(row_sums(i)) * col_sums(j)));
    }
  }
  return std::clamp(mi / std::sqrt(hp * ht), 0.0, 1.0);
}

double acc(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_inputs(pred, truth, "acc");
  const ContingencyTable table = ContingencyTable::build(pred, truth);
  const int k = static_cast<int>(std::max(table.counts.rows(), table.counts.cols()));
  // Pad to square and negate: max matching == min cost assignment.
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(k, k);
  cost.topLeftCorner(table.counts.rows(), table.counts.cols()) =
      -table.counts.cast<double>();
  const std::vector<int> row_of_col = min_cost_assignment(cost);
  double matched = 0.0;
  for (int j = 0; j < k; ++j) {
    const int i = row_of_col[j];
    if (i < table.counts.rows() && j < table.counts.cols()) matched += table.counts(i, j);
  }
  return matched / table.n;
}

}  // namespace tnclust
