#include "vardiff/variance_theory.hpp"

#include <cmath>

#include <fmt/format.h>

#include "vardiff/errors.hpp"
#include "vardiff/sampler.hpp"

namespace vardiff {

std::vector<double> elementwise_variance(std::span<const std::vector<double>> samples) {
  if (samples.size() < 2) {
    throw ParameterError(
        fmt::format("elementwise_variance: need at least 2 samples, got {}", samples.size()));
  }
  const std::size_t n = samples.front().size();
  std::vector<double> mean(n, 0.0);
  for (const auto& s : samples) {
    if (s.size() != n) throw ShapeError("elementwise_variance: samples differ in dimension");
    for (std::size_t i = 0; i < n; ++i) mean[i] += s[i];
  }
  const auto count = static_cast<double>(samples.size());
  for (auto& m : mean) m /= count;
  std::vector<double> var(n, 0.0);
  for (const auto& s : samples) {
    for (std::size_t i = 0; i < n; ++i) var[i] += (s[i] - mean[i]) * (s[i] - mean[i]);
  }
  for (auto& v : var) v /= count;
  return var;
}

std::vector<double> elementwise_covariance(std::span<const std::vector<double>> xs,
                                           std::span<const std::vector<double>> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw ParameterError("elementwise_covariance: need two equally sized sets of >= 2 samples");
  }
  const std::size_t n = xs.front().size();
  std::vector<double> mx(n, 0.0), my(n, 0.0);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (xs[k].size() != n || ys[k].size() != n) {
      throw ShapeError("elementwise_covariance: samples differ in dimension");
    }
    for (std::size_t i = 0; i < n; ++i) {
      mx[i] += xs[k][i];
      my[i] += ys[k][i];
    }
  }
  const auto count = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < n; ++i) {
    mx[i] /= count;
    my[i] /= count;
  }
  std::vector<double> cov(n, 0.0);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) cov[i] += (xs[k][i] - mx[i]) * (ys[k][i] - my[i]);
  }
  for (auto& c : cov) c /= count;
  return cov;
}

std::vector<std::vector<double>> mean_trajectory(const Denoiser& d, const Schedule& s,
                                                 int delta_t, std::span<const double> cond,
                                                 std::size_t dim) {
  const TimeGrid grid = time_grid(s.T(), delta_t);
  std::vector<std::vector<double>> m;
  m.reserve(grid.points.size());
  m.emplace_back(dim, 0.0);
  for (std::size_t k = 1; k < grid.points.size(); ++k) {
    std::vector<double> next = ddim_step(m.back(), grid.points[k], delta_t, d, s, cond);
    for (std::size_t i = 0; i < dim; ++i) {
      if (!std::isfinite(next[i])) {
        throw NumericalError(fmt::format("mean_trajectory: diverged at t = {} (coordinate {})",
                                         grid.points[k], i));
      }
    }
    m.push_back(std::move(next));
  }
  return m;
}

VarianceFactors variance_factors(const Denoiser& d, const Schedule& s, int delta_t,
                                 std::span<const double> cond, std::size_t dim,
                                 const JacobianOptions& opt) {
  const TimeGrid grid = time_grid(s.T(), delta_t);
  const auto means = mean_trajectory(d, s, delta_t, cond, dim);
  VarianceFactors f;
  f.delta_t = delta_t;
  for (std::size_t k = 1; k < grid.points.size(); ++k) {
    const int t = grid.points[k];
    const int prev = t - delta_t;
    const double ratio = s.step_ratio(t, delta_t);  // sqrt(alpha_t / alpha_prev)
    const double c = s.step_coefficient(t, delta_t);
    auto jac = d.analytic_jacobian_diag(means[k - 1], prev, cond);
    const std::vector<double> j =
        jac ? std::move(*jac) : jacobian_diag_fd(d, means[k - 1], prev, cond, opt.fd_step);
    std::vector<double> F(dim);
    for (std::size_t i = 0; i < dim; ++i) F[i] = ratio * ratio + 2.0 * ratio * c * j[i];
    f.F.push_back(std::move(F));
    f.g.push_back(c * c);
  }
  return f;
}

double VariancePrediction::mean_v_T() const {
  double sum = 0.0;
  for (double v : v_T) sum += v;
  return v_T.empty() ? 0.0 : sum / static_cast<double>(v_T.size());
}

VariancePrediction recursive_from_factors(const VarianceFactors& f, std::size_t dim) {
  VariancePrediction p;
  p.steps = static_cast<int>(f.F.size());
  p.delta_t = f.delta_t;
  p.v.emplace_back(dim, 1.0);
  for (std::size_t k = 0; k < f.F.size(); ++k) {
    std::vector<double> next(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      next[i] = f.F[k][i] * p.v.back()[i] + f.g[k];
      if (next[i] < 0.0) {
        next[i] = 0.0;
        ++p.clamp_count;
      }
    }
    p.v.push_back(std::move(next));
  }
  p.v_T = p.v.back();
  return p;
}

VariancePrediction closed_from_factors(const VarianceFactors& f, std::size_t dim) {
  VariancePrediction p;
  const std::size_t steps = f.F.size();
  p.steps = static_cast<int>(steps);
  p.delta_t = f.delta_t;
  p.v_T.assign(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    // Products are accumulated from the last step backwards so that suffix
    // products prod_{k>m} F_k are shared across the sum terms.
    double suffix = 1.0;  // F_{N+1} = identity
    double sum = 0.0;
    for (std::size_t m = steps; m-- > 0;) {
      sum += suffix * f.g[m];
      suffix *= f.F[m][i];
    }
    double v = suffix * 1.0 + sum;
    if (v < 0.0) {
      v = 0.0;
      ++p.clamp_count;
    }
    p.v_T[i] = v;
  }
  return p;
}

VariancePrediction predict_variance_recursive(const Denoiser& d, const Schedule& s, int delta_t,
                                              std::span<const double> cond, std::size_t dim,
                                              const JacobianOptions& opt) {
  auto p = recursive_from_factors(variance_factors(d, s, delta_t, cond, dim, opt), dim);
  p.schedule = s.config();
  p.denoiser_id = d.id();
  return p;
}

VariancePrediction predict_variance_closed(const Denoiser& d, const Schedule& s, int delta_t,
                                           std::span<const double> cond, std::size_t dim,
                                           const JacobianOptions& opt) {
  auto p = closed_from_factors(variance_factors(d, s, delta_t, cond, dim, opt), dim);
  p.schedule = s.config();
  p.denoiser_id = d.id();
  return p;
}

}  // namespace vardiff
