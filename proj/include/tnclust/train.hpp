#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tnclust/mps.hpp"
#include "tnclust/product_state.hpp"

namespace tnclust {

struct TrainConfig {
  int bond_cap = 8;
  int max_sweeps = 30;
  double learning_rate = 1e-2;
  double convergence_tol = 1e-6;
  std::uint64_t seed = 0;
  bool backtrack = true;
};

struct TrainLog {
  std::vector<double> loss_per_sweep;
  int sweeps_run = 0;
  bool converged = false;
  double final_entropy_mid_bond = 0.0;
  long zero_overlap_exclusions = 0;
};

/// Negative log-likelihood ln|<phi|phi>| - (1/N) sum_i ln|<phi|psi_i>|^2.
/// Returns +infinity when some data overlap is exactly zero; that sentinel
/// is a value, not an error.
double nll_loss(const MPS& phi, const std::vector<ProductState>& data);

/// Gradient of the loss with respect to the tensor at site k. phi must be
/// canonical at k. Data points with exactly zero overlap are excluded from
/// the sum; `excluded`, when given, receives their count.
SiteTensor site_gradient(const MPS& phi, const std::vector<ProductState>& data,
                         int k, long* excluded = nullptr);

/// Gradient-descent sweep training from a seeded random state. Every site
/// update keeps the state normalized; with backtracking enabled the loss is
/// monotone non-increasing per accepted step.
std::pair<MPS, TrainLog> train_mps(const std::vector<ProductState>& data,
                                   const TrainConfig& cfg);

}  // namespace tnclust
