#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vardiff/schedule.hpp"

namespace vardiff {

/// Noise-prediction model: maps a noisy state x_t at time index t (and an
/// optional conditioning field) to an estimate of the injected noise.
///
/// Implementations must be deterministic and safe to call concurrently.
class Denoiser {
 public:
  virtual ~Denoiser() = default;

  virtual std::vector<double> predict(std::span<const double> x, int t,
                                      std::span<const double> cond) const = 0;

  /// Evaluates predict on several states at the same time index.
  virtual std::vector<std::vector<double>> predict_batch(
      std::span<const std::vector<double>> xs, int t, std::span<const double> cond) const;

  /// Exact diagonal of d(predict)/dx when the model knows it in closed form.
  virtual std::optional<std::vector<double>> analytic_jacobian_diag(
      std::span<const double> /*x*/, int /*t*/, std::span<const double> /*cond*/) const {
    return std::nullopt;
  }

  virtual std::string id() const = 0;
};

/// Optimal noise predictor for data distributed as N(mu, diag(sigma)).
///
/// For x_t = sr * x + nr * eps with x ~ N(mu, Sigma), the conditional mean is
///   E[eps | x_t] = nr * (x_t - sr * mu) / (sr^2 * Sigma + nr^2),
/// which is linear in x_t. Ignores conditioning and lambda (use lambda = 1).
class GaussianOracle final : public Denoiser {
 public:
  GaussianOracle(std::vector<double> mu, std::vector<double> sigma_diag, Schedule schedule);

  std::vector<double> predict(std::span<const double> x, int t,
                              std::span<const double> cond) const override;
  std::optional<std::vector<double>> analytic_jacobian_diag(
      std::span<const double> x, int t, std::span<const double> cond) const override;
  std::string id() const override { return "gaussian-oracle"; }

  std::span<const double> mu() const { return mu_; }
  std::span<const double> sigma_diag() const { return sigma_; }
  const Schedule& schedule() const { return schedule_; }

 private:
  std::vector<double> mu_;
  std::vector<double> sigma_;
  Schedule schedule_;
};

std::vector<double> oracle_predict(const GaussianOracle& oracle, std::span<const double> x,
                                   int t);

/// Central-difference estimate of diag(d eps_hat / d x) at m:
///   J_ii = (eps(m + h e_i)_i - eps(m - h e_i)_i) / (2h).
std::vector<double> jacobian_diag_fd(const Denoiser& d, std::span<const double> m, int t,
                                     std::span<const double> cond, double h = 1e-3);

}  // namespace vardiff
