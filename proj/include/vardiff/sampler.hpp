#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vardiff/denoiser.hpp"
#include "vardiff/ensemble_stats.hpp"
#include "vardiff/fields.hpp"
#include "vardiff/schedule.hpp"

namespace vardiff {

struct SamplerConfig {
  int delta_t = 1;
  int members = 10;
  std::uint64_t base_seed = 0;
  int threads = 1;
  /// Shape of the state the denoiser works on.
  int height = 16;
  int width = 16;
  /// Output crop (0 keeps the working shape), for padded working grids.
  int out_height = 0;
  int out_width = 0;
  /// Maps the lambda-rescaled output back to physical units when set.
  std::optional<Standardizer> output;
  double divergence_limit = 1e6;
};

/// One DDIM update from t - dt to t:
///   x_t = (sr[t] / sr[t-dt]) * x_prev + c_{t-dt} * eps_hat(x_prev, t - dt, cond).
std::vector<double> ddim_step(std::span<const double> x_prev, int t, int delta_t,
                              const Denoiser& d, const Schedule& s,
                              std::span<const double> cond);

/// Runs the reverse process from x_0 ~ N(0, I) (drawn from `stream_seed`) to
/// t = T, multiplies by lambda, undoes standardization and crops.
Grid generate(const Denoiser& d, const Schedule& s, const SamplerConfig& cfg,
              std::span<const double> cond, std::uint64_t stream_seed);

/// Seed of member j of sample i: derive_seed(base_seed, i, j).
std::uint64_t member_seed(const SamplerConfig& cfg, int sample, int member);

/// M members for one conditioning field.
std::vector<Grid> generate_ensemble(const Denoiser& d, const Schedule& s,
                                    const SamplerConfig& cfg, std::span<const double> cond,
                                    int sample_index = 0);

/// M members for each of the given conditioning fields (an empty list entry
/// means unconditional). Output order is independent of cfg.threads.
EnsembleSet generate_ensemble_set(const Denoiser& d, const Schedule& s, const SamplerConfig& cfg,
                                  std::span<const std::vector<double>> conds);

/// Lower-resolution conditioning mapped onto the working grid: standardize,
/// resample bilinearly to h x w, divide by lambda.
std::vector<double> prepare_condition(const Grid& lo, const Standardizer& cond_norm, int h, int w,
                                      double lambda);

}  // namespace vardiff
