#include "tnclust/train.hpp"

#include <cmath>
#include <limits>

#include "tnclust/errors.hpp"

namespace tnclust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Contracts one point site into a left partial: out = sum_s p_s A_s^T v.
Eigen::VectorXd step_left(const SiteTensor& a, const Eigen::Vector2d& p,
                          const Eigen::VectorXd& v) {
  return p[0] * (a.phys[0].transpose() * v) + p[1] * (a.phys[1].transpose() * v);
}

// Mirror of step_left: out = sum_s p_s A_s v.
Eigen::VectorXd step_right(const SiteTensor& a, const Eigen::Vector2d& p,
                           const Eigen::VectorXd& v) {
  return p[0] * (a.phys[0] * v) + p[1] * (a.phys[1] * v);
}

// Partials are kept at max-abs 1; the dropped scales cancel in the
// gradient ratio E_i / <phi|psi_i> and shift site losses by a constant.
void rescale(Eigen::VectorXd& v) {
  const double s = v.cwiseAbs().maxCoeff();
  if (s > 0.0) v /= s;
}

// Overlap of the center tensor with one point's environment (scaled).
double center_overlap(const SiteTensor& y, const Eigen::Vector2d& p,
                      const Eigen::VectorXd& l, const Eigen::VectorXd& r) {
  return p[0] * l.dot(y.phys[0] * r) + p[1] * l.dot(y.phys[1] * r);
}

struct SiteLoss {
  double value = 0.0;
  bool finite = true;
};

// ln||Y||^2 - (2/N) sum_i ln|w_i|, up to a Y-independent constant.
SiteLoss scaled_site_loss(const SiteTensor& y,
                          const std::vector<ProductState>& data, int k,
                          const std::vector<Eigen::VectorXd>& lvecs,
                          const std::vector<Eigen::VectorXd>& rvecs) {
  const double n2 = y.squared_norm();
  if (n2 == 0.0) return {kInf, false};
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double w = center_overlap(y, data[i].site_amplitudes[k], lvecs[i], rvecs[i]);
    if (w == 0.0) return {kInf, false};
    sum += std::log(std::abs(w));
  }
  return {std::log(n2) - 2.0 / static_cast<double>(data.size()) * sum, true};
}

SiteTensor gradient_from_envs(const SiteTensor& y,
                              const std::vector<ProductState>& data, int k,
                              const std::vector<Eigen::VectorXd>& lvecs,
                              const std::vector<Eigen::VectorXd>& rvecs,
                              long* excluded) {
  const double n2 = y.squared_norm();
  SiteTensor grad;
  for (int s = 0; s < 2; ++s) grad.phys[s] = (2.0 / n2) * y.phys[s];

  const double inv_n = 1.0 / static_cast<double>(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {  // fixed order: by data index
    const Eigen::Vector2d& p = data[i].site_amplitudes[k];
    const double w = center_overlap(y, p, lvecs[i], rvecs[i]);
    if (w == 0.0) {
      if (excluded) ++*excluded;
      continue;
    }
    const Eigen::MatrixXd outer = lvecs[i] * rvecs[i].transpose();
    const double coef = 2.0 * inv_n / w;
    grad.phys[0] -= coef * p[0] * outer;
    grad.phys[1] -= coef * p[1] * outer;
  }
  return grad;
}

void validate_data(const std::vector<ProductState>& data, const char* who) {
  if (data.empty()) throw ParamError(std::string(who) + ": empty data");
  for (const ProductState& p : data) {
    if (p.length() != data.front().length())
      throw ParamError(std::string(who) + ": inconsistent data lengths");
  }
}

struct Updater {
  const std::vector<ProductState>& data;
  const TrainConfig& cfg;
  MPS& phi;
  TrainLog& log;

  void update_site(int k, const std::vector<Eigen::VectorXd>& lvecs,
                   const std::vector<Eigen::VectorXd>& rvecs) {
    const SiteTensor& y = phi.site(k);
    const SiteTensor grad =
        gradient_from_envs(y, data, k, lvecs, rvecs, &log.zero_overlap_exclusions);

    const SiteLoss before = scaled_site_loss(y, data, k, lvecs, rvecs);
    double eta = cfg.learning_rate;
    SiteTensor cand;
    bool accepted = false;
    for (int attempt = 0; attempt < (cfg.backtrack ? 11 : 1); ++attempt) {
      for (int s = 0; s < 2; ++s) cand.phys[s] = y.phys[s] - eta * grad.phys[s];
      if (!cfg.backtrack) {
        accepted = true;
        break;
      }
      const SiteLoss after = scaled_site_loss(cand, data, k, lvecs, rvecs);
      const double slack = 1e-12 * std::max(1.0, std::abs(before.value));
      if (after.value <= before.value + slack) {
        accepted = true;
        break;
      }
      eta /= 2.0;
    }
    if (!accepted) return;  // keep the old tensor; it is already normalized

    const double n = std::sqrt(cand.squared_norm());
    if (n == 0.0) return;
    for (int s = 0; s < 2; ++s) cand.phys[s] /= n;
    phi.set_center_tensor(std::move(cand));
  }

  // One full sweep: sites 0..m-1, then back down to 0.
  void sweep() {
    const int m = phi.length();
    const std::size_t n = data.size();

    // Left-to-right pass. Right partials are valid for the whole pass:
    // only sites at or left of the moving center get modified.
    {
      std::vector<std::vector<Eigen::VectorXd>> rstack(m + 1,
                                                       std::vector<Eigen::VectorXd>(n));
      for (std::size_t i = 0; i < n; ++i)
        rstack[m][i] = Eigen::VectorXd::Ones(1);
      for (int k = m - 1; k >= 1; --k) {
        for (std::size_t i = 0; i < n; ++i) {
          rstack[k][i] =
              step_right(phi.site(k), data[i].site_amplitudes[k], rstack[k + 1][i]);
          rescale(rstack[k][i]);
        }
      }
      std::vector<Eigen::VectorXd> lvecs(n, Eigen::VectorXd::Ones(1));
      for (int k = 0; k < m; ++k) {
        update_site(k, lvecs, rstack[k + 1]);
        if (k + 1 < m) {
          phi.move_center(k + 1);
          for (std::size_t i = 0; i < n; ++i) {
            lvecs[i] = step_left(phi.site(k), data[i].site_amplitudes[k], lvecs[i]);
            rescale(lvecs[i]);
          }
        }
      }
    }

    if (m == 1) return;

    // Right-to-left pass, mirrored.
    {
      std::vector<std::vector<Eigen::VectorXd>> lstack(m + 1,
                                                       std::vector<Eigen::VectorXd>(n));
      for (std::size_t i = 0; i < n; ++i)
        lstack[0][i] = Eigen::VectorXd::Ones(1);
      for (int k = 0; k < m - 1; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
          lstack[k + 1][i] =
              step_left(phi.site(k), data[i].site_amplitudes[k], lstack[k][i]);
          rescale(lstack[k + 1][i]);
        }
      }
      std::vector<Eigen::VectorXd> rvecs(n, Eigen::VectorXd::Ones(1));
      for (int k = m - 1; k >= 0; --k) {
        update_site(k, lstack[k], rvecs);
        if (k > 0) {
          phi.move_center(k - 1);
          for (std::size_t i = 0; i < n; ++i) {
            rvecs[i] = step_right(phi.site(k), data[i].site_amplitudes[k], rvecs[i]);
            rescale(rvecs[i]);
          }
        }
      }
    }
  }
};

}  // namespace

double nll_loss(const MPS& phi, const std::vector<ProductState>& data) {
  validate_data(data, "nll_loss");
  const SignedLog norm2 = inner_product(phi, phi);
  if (norm2.is_zero()) return kInf;
  double sum = 0.0;
  for (const ProductState& p : data) {
    const SignedLog o = inner_product(phi, p);
    if (o.is_zero()) return kInf;
    sum += o.log_abs;
  }
  return norm2.log_abs - 2.0 / static_cast<double>(data.size()) * sum;
}

SiteTensor site_gradient(const MPS& phi, const std::vector<ProductState>& data,
                         int k, long* excluded) {
  validate_data(data, "site_gradient");
  if (k < 0 || k >= phi.length())
    throw ParamError("site_gradient: site index out of range");
  if (!phi.canonical_center() || *phi.canonical_center() != k)
    throw ParamError("site_gradient: phi must be canonical at the target site");
  if (data.front().length() != phi.length())
    throw ParamError("site_gradient: data length mismatch");

  const std::size_t n = data.size();
  std::vector<Eigen::VectorXd> lvecs(n), rvecs(n);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd l = Eigen::VectorXd::Ones(1);
    for (int j = 0; j < k; ++j) {
      l = step_left(phi.site(j), data[i].site_amplitudes[j], l);
      rescale(l);
    }
    Eigen::VectorXd r = Eigen::VectorXd::Ones(1);
    for (int j = phi.length() - 1; j > k; --j) {
      r = step_right(phi.site(j), data[i].site_amplitudes[j], r);
      rescale(r);
    }
    lvecs[i] = std::move(l);
    rvecs[i] = std::move(r);
  }
  return gradient_from_envs(phi.site(k), data, k, lvecs, rvecs, excluded);
}

std::pair<MPS, TrainLog> train_mps(const std::vector<ProductState>& data,
                                   const TrainConfig& cfg) {
  validate_data(data, "train_mps");
  if (cfg.max_sweeps < 1) throw ParamError("train_mps: max_sweeps must be >= 1");
  if (cfg.learning_rate <= 0.0) throw ParamError("train_mps: learning rate must be > 0");
  if (cfg.convergence_tol < 0.0) throw ParamError("train_mps: tolerance must be >= 0");

  const int m = data.front().length();
  MPS phi = MPS::random(m, cfg.bond_cap, cfg.seed);

  TrainLog log;
  Updater updater{data, cfg, phi, log};
  double prev_loss = nll_loss(phi, data);
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    updater.sweep();
    const double loss = nll_loss(phi, data);
    log.loss_per_sweep.push_back(loss);
    log.sweeps_run = sweep;
    if (std::isfinite(loss) && std::isfinite(prev_loss)) {
      const double rel = std::abs(loss - prev_loss) / std::max(std::abs(prev_loss), 1e-12);
      if (rel < cfg.convergence_tol) {
        log.converged = true;
        break;
      }
    }
    prev_loss = loss;
  }

  phi.move_center(0);
  phi.normalize();
  log.final_entropy_mid_bond =
      m >= 2 ? entanglement_entropy(phi.schmidt_spectrum(m / 2)) : 0.0;
  return {std::move(phi), std::move(log)};
}

}  // namespace tnclust
