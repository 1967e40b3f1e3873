#include "tnclust/encoding.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "tnclust/errors.hpp"

namespace tnclust {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kClampTol = 1e-12;

double clamp01(double v, const char* what, Eigen::Index idx) {
  if (v < -kClampTol || v > 1.0 + kClampTol) {
    std::ostringstream msg;
    msg << what << ": entry " << idx << " = " << v << " lies outside [0,1]";
    throw ParamError(msg.str());
  }
  return std::min(1.0, std::max(0.0, v));
}

}  // namespace

NormalizedDataset minmax_normalize(const Eigen::MatrixXd& raw) {
  if (raw.rows() < 1 || raw.cols() < 1)
    throw ParamError("minmax_normalize: dataset must be non-empty");
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    for (Eigen::Index j = 0; j < raw.cols(); ++j) {
      if (!std::isfinite(raw(i, j))) {
        std::ostringstream msg;
        msg << "minmax_normalize: non-finite value at row " << i << ", column " << j;
        throw DataError(msg.str());
      }
    }
  }

  NormalizedDataset out;
  out.feature_mins = raw.colwise().minCoeff();
  out.feature_maxs = raw.colwise().maxCoeff();
  out.rows.resize(raw.rows(), raw.cols());
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    const double lo = out.feature_mins(j);
    const double span = out.feature_maxs(j) - lo;
    if (span == 0.0) {
      // A constant feature carries no information; 0.5 keeps the site
      // unbiased between the two basis states.
      out.rows.col(j).setConstant(0.5);
    } else {
      out.rows.col(j) = ((raw.col(j).array() - lo) / span)
                            .min(1.0)
                            .max(0.0);
    }
  }
  return out;
}

ProductState encode_point(const Eigen::VectorXd& x) {
  if (x.size() < 1) throw ParamError("encode_point: empty vector");
  ProductState p;
  p.site_amplitudes.reserve(x.size());
  for (Eigen::Index l = 0; l < x.size(); ++l) {
    const double v = clamp01(x(l), "encode_point", l);
    // The endpoints map to exact basis states so that orthogonal pairs
    // produce an exact zero flag (cos(pi/2) rounds to ~6e-17 otherwise).
    if (v == 0.0) {
      p.site_amplitudes.emplace_back(1.0, 0.0);
    } else if (v == 1.0) {
      p.site_amplitudes.emplace_back(0.0, 1.0);
    } else {
      p.site_amplitudes.emplace_back(std::cos(kHalfPi * v), std::sin(kHalfPi * v));
    }
  }
  return p;
}

std::vector<ProductState> encode_dataset(const NormalizedDataset& data) {
  std::vector<ProductState> points;
  points.reserve(data.n());
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    ProductState p = encode_point(data.rows.row(i).transpose());
    p.source_index = i;
    points.push_back(std::move(p));
  }
  return points;
}

double pairwise_fidelity(const ProductState& a, const ProductState& b) {
  if (a.length() != b.length())
    throw ParamError("pairwise_fidelity: length mismatch");
  double log_f = 0.0;
  for (int l = 0; l < a.length(); ++l) {
    // cos cos + sin sin = cos(pi/2 (x_a - x_b)) per site
    const double overlap = a.site_amplitudes[l].dot(b.site_amplitudes[l]);
    if (overlap == 0.0) return 0.0;
    log_f += std::log(std::abs(overlap));
  }
  return std::exp(log_f);
}

Eigen::MatrixXd fidelity_matrix(const NormalizedDataset& data) {
  const std::vector<ProductState> points = encode_dataset(data);
  const Eigen::Index n = data.n();
  Eigen::MatrixXd f(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    f(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double val = pairwise_fidelity(points[i], points[j]);
      f(i, j) = val;
      f(j, i) = val;
    }
  }
  return f;
}

double fidelity_to_mps(const ProductState& p, const MPS& phi) {
  return inner_product(phi, p).magnitude();
}

}  // namespace tnclust
