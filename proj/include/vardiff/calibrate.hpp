#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vardiff/denoiser.hpp"
#include "vardiff/ensemble_stats.hpp"
#include "vardiff/sampler.hpp"
#include "vardiff/schedule.hpp"

namespace vardiff {

enum class CalibrationCriterion { Global, Mvd };

CalibrationCriterion parse_criterion(std::string_view name);

struct CalibrationRow {
  int steps = 0;
  double mu_v = 0.0;
  double mvd_yearly = 0.0;
  std::optional<std::array<double, 4>> mvd_season;  // JFM, AMJ, JAS, OND
  double mse_to_reference_mean = 0.0;
  double runtime_seconds = 0.0;
};

struct CalibrationReport {
  std::vector<CalibrationRow> rows;
  double reference_mu_v = 0.0;
  int best_global = 0;  // argmin |mu_V - mu_V_ref|
  int best_mvd = 0;     // argmin yearly MVD

  int best(CalibrationCriterion c) const {
    return c == CalibrationCriterion::Global ? best_global : best_mvd;
  }
  /// CSV with one row per candidate; runtimes are left out so reruns are
  /// byte-identical unless `with_runtime` is set.
  std::string to_csv(bool with_runtime = false) const;
};

/// Sweeps candidate step counts against a reference ensemble.
///
/// For each N, generates cfg.members members per reference sample with
/// conds[i] as conditioning (delta_t = T / N), then compares global mean
/// variance, yearly and seasonal MVD, and ensemble-mean MSE against the
/// reference. Ties resolve toward the smaller N. Every candidate is checked
/// for divisibility before any sampling starts.
CalibrationReport calibrate_steps(const Denoiser& d, const Schedule& s,
                                  const EnsembleSet& reference,
                                  std::span<const std::vector<double>> conds,
                                  std::span<const int> candidates, const SamplerConfig& cfg);

}  // namespace vardiff
