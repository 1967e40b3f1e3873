#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "tnclust/product_state.hpp"
#include "tnclust/signed_log.hpp"

namespace tnclust {

/// Rank-3 MPS site tensor of shape (left bond, physical dim 2, right bond),
/// stored as one matrix per physical basis state.
struct SiteTensor {
  Eigen::MatrixXd phys[2];

  Eigen::Index left_dim() const { return phys[0].rows(); }
  Eigen::Index right_dim() const { return phys[0].cols(); }

  /// (2*left, right) matrix with phys[0] stacked on top of phys[1].
  Eigen::MatrixXd left_unfold() const;
  /// (left, 2*right) matrix with phys[0] and phys[1] side by side.
  Eigen::MatrixXd right_unfold() const;

  static SiteTensor from_left_unfold(const Eigen::MatrixXd& m);
  static SiteTensor from_right_unfold(const Eigen::MatrixXd& m);

  double squared_norm() const {
    return phys[0].squaredNorm() + phys[1].squaredNorm();
  }
};

/// Schmidt coefficients across one bond, sorted non-increasing with
/// sum of squares equal to 1.
struct SchmidtSpectrum {
  std::vector<double> coefficients;
  int bond_position = 0;

  int rank() const { return static_cast<int>(coefficients.size()); }
};

/// Matrix product state over m sites of physical dimension 2, real entries.
///
/// Boundary bonds always have dimension 1; interior bond i is capped at
/// min(D, 2^i, 2^(m-i)). When a canonical center c is set, every site left
/// of c is a left isometry and every site right of c a right isometry, so
/// the state norm is the Frobenius norm of the center tensor.
class MPS {
 public:
  /// Random state with N(0,1) entries, right-canonicalized and normalized
  /// so <phi|phi> = 1. Deterministic for a given seed.
  static MPS random(int length, int bond_cap, std::uint64_t seed);

  /// Bond-1 embedding of a product state (canonical by construction).
  static MPS from_product_state(const ProductState& p);

  /// Builds from explicit site tensors; validates chain compatibility,
  /// unit boundary bonds and the bond cap.
  static MPS from_sites(std::vector<SiteTensor> sites, int bond_cap);

  int length() const { return static_cast<int>(sites_.size()); }
  int bond_cap() const { return bond_cap_; }
  const SiteTensor& site(int i) const;
  std::optional<int> canonical_center() const { return center_; }

  /// Interior bond dimensions (beta_1 .. beta_{m-1}).
  std::vector<int> interior_bond_dims() const;

  /// Sweeps QR factorizations inward from both ends so that `center`
  /// becomes the canonical center. The represented state is unchanged.
  void canonicalize(int center);
  MPS canonicalized(int center) const;

  /// Moves an existing canonical center one QR step at a time.
  void move_center(int target);

  /// Replaces the center tensor (shape must match). Isometry structure of
  /// the other sites is untouched.
  void set_center_tensor(SiteTensor t);

  double norm() const;
  void normalize();

  /// Schmidt coefficients across bond b (between sites b-1 and b),
  /// 1 <= b <= m-1. Requires a normalized state.
  SchmidtSpectrum schmidt_spectrum(int bond) const;

 private:
  MPS() = default;

  void left_qr_step(int i);   // site i -> left isometry, R absorbed into i+1
  void right_qr_step(int i);  // site i -> right isometry, L absorbed into i-1

  std::vector<SiteTensor> sites_;
  int bond_cap_ = 1;
  std::optional<int> center_;
};

/// Exact chain contraction <a|b> in signed log-magnitude form.
SignedLog inner_product(const MPS& a, const MPS& b);
SignedLog inner_product(const MPS& a, const ProductState& b);

/// Von Neumann entropy -sum lambda^2 ln lambda^2 in nats (0 ln 0 := 0).
double entanglement_entropy(const SchmidtSpectrum& spectrum);

}  // namespace tnclust
