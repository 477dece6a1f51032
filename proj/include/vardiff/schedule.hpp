#pragma once

#include <span>
#include <vector>

namespace vardiff {

struct ScheduleConfig {
  int T = 256;
  double sr_min = 0.02;
  double sr_max = 0.995;
  double lambda = 3.0;
};

/// Discretized sinusoidal noise schedule.
///
/// Time runs from pure noise (t = 0) to data (t = T). The signal rate follows
/// a quarter-period sine between the two clamps,
///   sr[t] = sin(asin(sr_min) + t/T * (asin(sr_max) - asin(sr_min))),
/// and nr[t] = cos(same angle), so sr^2 + nr^2 = 1 at every index. Rates are
/// tabulated once so every consumer reads the same numbers.
class Schedule {
 public:
  explicit Schedule(const ScheduleConfig& cfg);

  int T() const { return cfg_.T; }
  double lambda() const { return cfg_.lambda; }
  double sr_min() const { return cfg_.sr_min; }
  double sr_max() const { return cfg_.sr_max; }
  const ScheduleConfig& config() const { return cfg_; }

  double signal_rate(int t) const;
  double noise_rate(int t) const;
  /// alpha_t = sr[t]^2.
  double alpha(int t) const;

  std::span<const double> signal_rates() const { return sr_; }
  std::span<const double> noise_rates() const { return nr_; }

  /// c_{t-dt} = nr[t] - sr[t] * nr[t-dt] / sr[t-dt], the coefficient of the
  /// predicted noise in one DDIM update from t-dt to t.
  double step_coefficient(int t, int delta_t) const;

  /// sqrt(alpha_t / alpha_{t-dt}) = sr[t] / sr[t-dt].
  double step_ratio(int t, int delta_t) const;

 private:
  void check_index(int t) const;

  ScheduleConfig cfg_;
  std::vector<double> sr_;
  std::vector<double> nr_;
};

Schedule make_schedule(int T, double sr_min, double sr_max, double lambda);

struct TimeGrid {
  int delta_t = 1;
  std::vector<int> points;  // 0, dt, ..., N*dt == T

  int steps() const { return static_cast<int>(points.size()) - 1; }
};

TimeGrid time_grid(int T, int delta_t);

/// Converts a step count N into the step size T / N, checking divisibility.
int delta_t_for_steps(int T, int steps);

}  // namespace vardiff
