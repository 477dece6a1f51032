#include "vardiff/schedule.hpp"

#include <cmath>

#include <fmt/format.h>

#include "vardiff/errors.hpp"

namespace vardiff {

Schedule::Schedule(const ScheduleConfig& cfg) : cfg_(cfg) {
  if (cfg.T < 1) throw ParameterError(fmt::format("schedule: T must be >= 1, got {}", cfg.T));
  if (!(cfg.sr_min > 0.0 && cfg.sr_min < cfg.sr_max && cfg.sr_max < 1.0)) {
    throw ParameterError(fmt::format(
        "schedule: need 0 < sr_min < sr_max < 1, got sr_min={} sr_max={}", cfg.sr_min,
        cfg.sr_max));
  }
  if (!(cfg.lambda >= 1.0)) {
    throw ParameterError(fmt::format("schedule: lambda must be >= 1, got {}", cfg.lambda));
  }
  const double theta_min = std::asin(cfg.sr_min);
  const double theta_max = std::asin(cfg.sr_max);
  sr_.resize(cfg.T + 1);
  nr_.resize(cfg.T + 1);
  for (int t = 0; t <= cfg.T; ++t) {
    const double theta =
        theta_min + (static_cast<double>(t) / cfg.T) * (theta_max - theta_min);
    sr_[t] = std::sin(theta);
    nr_[t] = std::cos(theta);
  }
  // Clamped endpoints are exact, not subject to asin/sin round-off.
  sr_.front() = cfg.sr_min;
  sr_.back() = cfg.sr_max;
  nr_.front() = std::sqrt(1.0 - cfg.sr_min * cfg.sr_min);
  nr_.back() = std::sqrt(1.0 - cfg.sr_max * cfg.sr_max);
}

void Schedule::check_index(int t) const {
  if (t < 0 || t > cfg_.T) {
    throw RangeError(fmt::format("schedule: time index {} outside [0, {}]", t, cfg_.T));
  }
}

double Schedule::signal_rate(int t) const {
  check_index(t);
  return sr_[t];
}

double Schedule::noise_rate(int t) const {
  check_index(t);
  return nr_[t];
}

double Schedule::alpha(int t) const {
  const double s = signal_rate(t);
  return s * s;
}

double Schedule::step_coefficient(int t, int delta_t) const {
  check_index(t);
  if (delta_t < 0 || t - delta_t < 0) {
    throw RangeError(fmt::format("schedule: step from t-dt={} to t={} leaves the grid",
                                 t - delta_t, t));
  }
  const int p = t - delta_t;
  return nr_[t] - sr_[t] * nr_[p] / sr_[p];
}

double Schedule::step_ratio(int t, int delta_t) const {
  check_index(t);
  if (delta_t < 0 || t - delta_t < 0) {
    throw RangeError(fmt::format("schedule: step from t-dt={} to t={} leaves the grid",
                                 t - delta_t, t));
  }
  return sr_[t] / sr_[t - delta_t];
}

Schedule make_schedule(int T, double sr_min, double sr_max, double lambda) {
  return Schedule(ScheduleConfig{T, sr_min, sr_max, lambda});
}

TimeGrid time_grid(int T, int delta_t) {
  if (T < 1) throw ParameterError(fmt::format("time grid: T must be >= 1, got {}", T));
  if (delta_t < 1 || T % delta_t != 0) {
    throw ParameterError(
        fmt::format("time grid: step size {} does not divide T = {}", delta_t, T));
  }
  TimeGrid grid;
  grid.delta_t = delta_t;
  for (int t = 0; t <= T; t += delta_t) grid.points.push_back(t);
  return grid;
}

int delta_t_for_steps(int T, int steps) {
  if (steps < 1 || T % steps != 0) {
    throw ParameterError(fmt::format(
        "step count {} does not divide T = {}; choose N among the divisors of T", steps, T));
  }
  return T / steps;
}

}  // namespace vardiff
