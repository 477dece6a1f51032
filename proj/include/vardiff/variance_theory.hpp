#pragma once

#include <span>
#include <string>
#include <vector>

#include "vardiff/denoiser.hpp"
#include "vardiff/schedule.hpp"

namespace vardiff {

/// Per-coordinate population variance (divisor = sample count).
std::vector<double> elementwise_variance(std::span<const std::vector<double>> samples);

/// Per-coordinate population covariance of paired samples.
std::vector<double> elementwise_covariance(std::span<const std::vector<double>> xs,
                                           std::span<const std::vector<double>> ys);

/// Mean-field propagation m_0 = 0,
///   m_t = (sr[t]/sr[t-dt]) m_{t-dt} + c_{t-dt} eps_hat(m_{t-dt}),
/// returning m at every grid point 0, dt, ..., T.
std::vector<std::vector<double>> mean_trajectory(const Denoiser& d, const Schedule& s,
                                                 int delta_t, std::span<const double> cond,
                                                 std::size_t dim);

/// Per-step coefficients of the linearized variance recursion
///   v_t = F_t * v_{t-dt} + g_t,
///   F_t = alpha_t/alpha_{t-dt} + 2 sqrt(alpha_t/alpha_{t-dt}) c_{t-dt} J_t,
///   g_t = c_{t-dt}^2,
/// with J_t the Jacobian diagonal of eps_hat at m_{t-dt}. F is diagonal, so
/// it is stored as one n-vector per step.
struct VarianceFactors {
  int delta_t = 1;
  std::vector<std::vector<double>> F;  // steps 1..N
  std::vector<double> g;               // steps 1..N
};

struct JacobianOptions {
  double fd_step = 1e-3;  // used when the denoiser has no analytic Jacobian
};

VarianceFactors variance_factors(const Denoiser& d, const Schedule& s, int delta_t,
                                 std::span<const double> cond, std::size_t dim,
                                 const JacobianOptions& opt = {});

struct VariancePrediction {
  int steps = 0;
  int delta_t = 0;
  ScheduleConfig schedule;
  std::string denoiser_id;
  std::vector<std::vector<double>> v;  // v at t = 0, dt, ..., T (recursion only)
  std::vector<double> v_T;
  int clamp_count = 0;  // negative entries reset to 0

  double mean_v_T() const;
};

/// Iterates the recursion from v_0 = 1, clamping negative transients to 0.
VariancePrediction predict_variance_recursive(const Denoiser& d, const Schedule& s, int delta_t,
                                              std::span<const double> cond, std::size_t dim,
                                              const JacobianOptions& opt = {});

/// Unrolled form
///   v_T = (prod_{i=1..N} F_i) 1 + sum_{i=1..N} (prod_{k=i+1..N} F_k) g_i,
/// with only the final v_T clamped at 0.
VariancePrediction predict_variance_closed(const Denoiser& d, const Schedule& s, int delta_t,
                                           std::span<const double> cond, std::size_t dim,
                                           const JacobianOptions& opt = {});

VariancePrediction recursive_from_factors(const VarianceFactors& f, std::size_t dim);
VariancePrediction closed_from_factors(const VarianceFactors& f, std::size_t dim);

}  // namespace vardiff
