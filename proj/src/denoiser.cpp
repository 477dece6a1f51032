#include "vardiff/denoiser.hpp"

#include <cmath>

#include <fmt/format.h>

#include "vardiff/errors.hpp"

namespace vardiff {

std::vector<std::vector<double>> Denoiser::predict_batch(std::span<const std::vector<double>> xs,
                                                        int t,
                                                        std::span<const double> cond) const {
  std::vector<std::vector<double>> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(predict(x, t, cond));
  return out;
}

GaussianOracle::GaussianOracle(std::vector<double> mu, std::vector<double> sigma_diag,
                               Schedule schedule)
    : mu_(std::move(mu)), sigma_(std::move(sigma_diag)), schedule_(std::move(schedule)) {
  if (mu_.size() != sigma_.size() || mu_.empty()) {
    throw ShapeError(fmt::format("gaussian oracle: mu has {} entries, sigma has {}",
                                 mu_.size(), sigma_.size()));
  }
  for (std::size_t i = 0; i < sigma_.size(); ++i) {
    if (!(sigma_[i] > 0.0) || !std::isfinite(sigma_[i])) {
      throw ParameterError(
          fmt::format("gaussian oracle: sigma[{}] = {} must be positive", i, sigma_[i]));
    }
  }
}

std::vector<double> GaussianOracle::predict(std::span<const double> x, int t,
                                            std::span<const double> /*cond*/) const {
  if (x.size() != mu_.size()) {
    throw ShapeError(
        fmt::format("gaussian oracle: input has {} entries, expected {}", x.size(), mu_.size()));
  }
  const double sr = schedule_.signal_rate(t);
  const double nr = schedule_.noise_rate(t);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = nr * (x[i] - sr * mu_[i]) / (sr * sr * sigma_[i] + nr * nr);
  }
  return out;
}

std::optional<std::vector<double>> GaussianOracle::analytic_jacobian_diag(
    std::span<const double> x, int t, std::span<const double> /*cond*/) const {
  if (x.size() != mu_.size()) {
    throw ShapeError(
        fmt::format("gaussian oracle: input has {} entries, expected {}", x.size(), mu_.size()));
  }
  const double sr = schedule_.signal_rate(t);
  const double nr = schedule_.noise_rate(t);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = nr / (sr * sr * sigma_[i] + nr * nr);
  return out;
}

std::vector<double> oracle_predict(const GaussianOracle& oracle, std::span<const double> x,
                                   int t) {
  return oracle.predict(x, t, {});
}

std::vector<double> jacobian_diag_fd(const Denoiser& d, std::span<const double> m, int t,
                                     std::span<const double> cond, double h) {
  if (!(h > 0.0)) throw ParameterError(fmt::format("jacobian_diag_fd: step h = {} must be > 0", h));
  const std::size_t n = m.size();
  // Probes 2i and 2i+1 perturb coordinate i by +h and -h.
  std::vector<std::vector<double>> probes(2 * n, std::vector<double>(m.begin(), m.end()));
  for (std::size_t i = 0; i < n; ++i) {
    probes[2 * i][i] += h;
    probes[2 * i + 1][i] -= h;
  }
  const auto eps = d.predict_batch(probes, t, cond);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (eps[2 * i].size() != n || eps[2 * i + 1].size() != n) {
      throw ShapeError("jacobian_diag_fd: denoiser output dimension differs from input");
    }
    diag[i] = (eps[2 * i][i] - eps[2 * i + 1][i]) / (2.0 * h);
    if (!std::isfinite(diag[i])) {
      throw NumericalError(fmt::format(
          "jacobian_diag_fd: non-finite derivative at coordinate {} (t = {})", i, t));
    }
  }
  return diag;
}

}  // namespace vardiff
