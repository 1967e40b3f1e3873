#include "tnclust/mps.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "tnclust/errors.hpp"

namespace tnclust {

namespace {

// Relative threshold below which singular values are treated as numerical
// noise and dropped from a Schmidt spectrum.
constexpr double kSvdTruncation = 1e-14;

int pow2_capped(int e, int cap) {
  if (e >= 31) return cap;
  const long long p = 1LL << e;
  return static_cast<int>(std::min<long long>(p, cap));
}

struct ThinQR {
  Eigen::MatrixXd q;  // (rows, r) with orthonormal columns
  Eigen::MatrixXd r;  // (r, cols) upper trapezoidal
};

ThinQR thin_qr(const Eigen::MatrixXd& m) {
  const Eigen::Index rank = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  ThinQR out;
  out.q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), rank);
  out.r = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
  return out;
}

}  // namespace

Eigen::MatrixXd SiteTensor::left_unfold() const {
  Eigen::MatrixXd m(2 * left_dim(), right_dim());
  m.topRows(left_dim()) = phys[0];
  m.bottomRows(left_dim()) = phys[1];
  return m;
}

Eigen::MatrixXd SiteTensor::right_unfold() const {
  Eigen::MatrixXd m(left_dim(), 2 * right_dim());
  m.leftCols(right_dim()) = phys[0];
  m.rightCols(right_dim()) = phys[1];
  return m;
}

SiteTensor SiteTensor::from_left_unfold(const Eigen::MatrixXd& m) {
  const Eigen::Index l = m.rows() / 2;
  SiteTensor t;
  t.phys[0] = m.topRows(l);
  t.phys[1] = m.bottomRows(l);
  return t;
}

SiteTensor SiteTensor::from_right_unfold(const Eigen::MatrixXd& m) {
  const Eigen::Index r = m.cols() / 2;
  SiteTensor t;
  t.phys[0] = m.leftCols(r);
  t.phys[1] = m.rightCols(r);
  return t;
}

MPS MPS::random(int length, int bond_cap, std::uint64_t seed) {
  if (length < 1) throw ParamError("MPS::random: length must be >= 1");
  if (bond_cap < 1) throw ParamError("MPS::random: bond cap must be >= 1");

  std::vector<int> bonds(length + 1, 1);
  for (int i = 1; i < length; ++i) {
    bonds[i] = std::min(pow2_capped(i, bond_cap), pow2_capped(length - i, bond_cap));
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  MPS mps;
  mps.bond_cap_ = bond_cap;
  mps.sites_.resize(length);
  for (int i = 0; i < length; ++i) {
    SiteTensor& t = mps.sites_[i];
    for (int s = 0; s < 2; ++s) {
      t.phys[s].resize(bonds[i], bonds[i + 1]);
      for (Eigen::Index a = 0; a < t.phys[s].rows(); ++a)
        for (Eigen::Index b = 0; b < t.phys[s].cols(); ++b)
          t.phys[s](a, b) = gauss(rng);
    }
  }
  mps.canonicalize(0);
  mps.normalize();
  return mps;
}

MPS MPS::from_product_state(const ProductState& p) {
  if (p.length() < 1) throw ParamError("MPS::from_product_state: empty state");
  MPS mps;
  mps.bond_cap_ = 1;
  mps.sites_.resize(p.length());
  for (int i = 0; i < p.length(); ++i) {
    for (int s = 0; s < 2; ++s) {
      mps.sites_[i].phys[s] = Eigen::MatrixXd::Constant(1, 1, p.site_amplitudes[i][s]);
    }
  }
  mps.center_ = 0;
  return mps;
}

MPS MPS::from_sites(std::vector<SiteTensor> sites, int bond_cap) {
  if (sites.empty()) throw ParamError("MPS::from_sites: no sites");
  if (bond_cap < 1) throw ParamError("MPS::from_sites: bond cap must be >= 1");
  const int m = static_cast<int>(sites.size());
  if (sites.front().left_dim() != 1 || sites.back().right_dim() != 1)
    throw ParamError("MPS::from_sites: boundary bonds must have dimension 1");
  for (int i = 0; i < m; ++i) {
    if (sites[i].phys[0].rows() != sites[i].phys[1].rows() ||
        sites[i].phys[0].cols() != sites[i].phys[1].cols())
      throw ParamError("MPS::from_sites: physical slices disagree in shape");
    if (i + 1 < m && sites[i].right_dim() != sites[i + 1].left_dim())
      throw ParamError("MPS::from_sites: adjacent sites are not chain-compatible");
    if (sites[i].right_dim() > bond_cap && i + 1 < m)
      throw ParamError("MPS::from_sites: bond dimension exceeds the cap");
  }
  MPS mps;
  mps.sites_ = std::move(sites);
  mps.bond_cap_ = bond_cap;
  return mps;
}

const SiteTensor& MPS::site(int i) const {
  if (i < 0 || i >= length()) throw ParamError("MPS::site: index out of range");
  return sites_[i];
}

std::vector<int> MPS::interior_bond_dims() const {
  std::vector<int> dims;
  for (int i = 0; i + 1 < length(); ++i)
    dims.push_back(static_cast<int>(sites_[i].right_dim()));
  return dims;
}

void MPS::left_qr_step(int i) {
  auto [q, r] = thin_qr(sites_[i].left_unfold());
  sites_[i] = SiteTensor::from_left_unfold(q);
  for (int s = 0; s < 2; ++s) sites_[i + 1].phys[s] = r * sites_[i + 1].phys[s];
}

void MPS::right_qr_step(int i) {
  auto [q, r] = thin_qr(sites_[i].right_unfold().transpose());
  sites_[i] = SiteTensor::from_right_unfold(q.transpose());
  const Eigen::MatrixXd l = r.transpose();
  for (int s = 0; s < 2; ++s) sites_[i - 1].phys[s] = sites_[i - 1].phys[s] * l;
}

void MPS::canonicalize(int center) {
  if (center < 0 || center >= length())
    throw ParamError("MPS::canonicalize: center out of range");
  for (int i = 0; i < center; ++i) left_qr_step(i);
  for (int i = length() - 1; i > center; --i) right_qr_step(i);
  center_ = center;
}

MPS MPS::canonicalized(int center) const {
  MPS copy = *this;
  copy.canonicalize(center);
  return copy;
}

void MPS::move_center(int target) {
  if (!center_) throw ParamError("MPS::move_center: no canonical center set");
  if (target < 0 || target >= length())
    throw ParamError("MPS::move_center: target out of range");
  while (*center_ < target) {
    left_qr_step(*center_);
    ++*center_;
  }
  while (*center_ > target) {
    right_qr_step(*center_);
    --*center_;
  }
}

void MPS::set_center_tensor(SiteTensor t) {
  if (!center_) throw ParamError("MPS::set_center_tensor: no canonical center set");
  SiteTensor& cur = sites_[*center_];
  if (t.left_dim() != cur.left_dim() || t.right_dim() != cur.right_dim())
    throw ParamError("MPS::set_center_tensor: shape mismatch");
  cur = std::move(t);
}

double MPS::norm() const {
  if (center_) return std::sqrt(sites_[*center_].squared_norm());
  return std::sqrt(inner_product(*this, *this).magnitude());
}

void MPS::normalize() {
  if (!center_) canonicalize(0);
  const double n = std::sqrt(sites_[*center_].squared_norm());
  if (n == 0.0) throw NumericError("MPS::normalize: zero state");
  for (int s = 0; s < 2; ++s) sites_[*center_].phys[s] /= n;
}

SchmidtSpectrum MPS::schmidt_spectrum(int bond) const {
  if (bond < 1 || bond > length() - 1)
    throw ParamError("MPS::schmidt_spectrum: bond out of range");
  const SignedLog n2 = inner_product(*this, *this);
  if (n2.is_zero() || std::abs(n2.log_abs) > 1e-8) {
    std::ostringstream msg;
    msg << "MPS::schmidt_spectrum: state is not normalized (<phi|phi> = "
        << n2.magnitude() << ")";
    throw NumericError(msg.str());
  }

  MPS centered = canonicalized(bond);
  // With the center at `bond`, sites to the left form an orthonormal basis of
  // the left block and sites to the right one of the right block, so the
  // Schmidt values are the singular values of the center's right unfolding.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered.sites_[bond].right_unfold());
  const Eigen::VectorXd sv = svd.singularValues();

  SchmidtSpectrum spec;
  spec.bond_position = bond;
  const double cutoff = sv.size() > 0 ? sv(0) * kSvdTruncation : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) spec.coefficients.push_back(sv(i));
  }
  if (spec.coefficients.empty())
    throw NumericError("MPS::schmidt_spectrum: empty spectrum");
  std::sort(spec.coefficients.begin(), spec.coefficients.end(), std::greater<>());
  double sq = 0.0;
  for (double c : spec.coefficients) sq += c * c;
  const double scale = std::sqrt(sq);
  for (double& c : spec.coefficients) c /= scale;
  return spec;
}

SignedLog inner_product(const MPS& a, const MPS& b) {
  if (a.length() != b.length())
    throw ParamError("inner_product: length mismatch");
  double log_scale = 0.0;
  Eigen::MatrixXd env = Eigen::MatrixXd::Ones(1, 1);
  for (int i = 0; i < a.length(); ++i) {
    const SiteTensor& sa = a.site(i);
    const SiteTensor& sb = b.site(i);
    Eigen::MatrixXd next = sa.phys[0].transpose() * env * sb.phys[0] +
                           sa.phys[1].transpose() * env * sb.phys[1];
    const double scale = next.cwiseAbs().maxCoeff();
    if (scale == 0.0) return SignedLog::zero();
    next /= scale;
    log_scale += std::log(scale);
    env = std::move(next);
  }
  const double v = env(0, 0);
  if (v == 0.0) return SignedLog::zero();
  return SignedLog{log_scale + std::log(std::abs(v)), v > 0.0 ? 1 : -1};
}

SignedLog inner_product(const MPS& a, const ProductState& b) {
  if (a.length() != b.length())
    throw ParamError("inner_product: length mismatch");
  double log_scale = 0.0;
  Eigen::VectorXd env = Eigen::VectorXd::Ones(1);
  for (int i = 0; i < a.length(); ++i) {
    const SiteTensor& sa = a.site(i);
    const Eigen::Vector2d& p = b.site_amplitudes[i];
    Eigen::VectorXd next = p[0] * (sa.phys[0].transpose() * env) +
                           p[1] * (sa.phys[1].transpose() * env);
    const double scale = next.cwiseAbs().maxCoeff();
    if (scale == 0.0) return SignedLog::zero();
    next /= scale;
    log_scale += std::log(scale);
    env = std::move(next);
  }
  const double v = env(0);
  if (v == 0.0) return SignedLog::zero();
  return SignedLog{log_scale + std::log(std::abs(v)), v > 0.0 ? 1 : -1};
}

double entanglement_entropy(const SchmidtSpectrum& spectrum) {
  double s = 0.0;
  for (double lambda : spectrum.coefficients) {
    const double p = lambda * lambda;
    if (p > 0.0) s -= p * std::log(p);
  }
  return std::max(s, 0.0);
}

}  // namespace tnclust
