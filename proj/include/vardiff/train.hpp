#pragma once

#include <cstdint>
#include <vector>

#include "vardiff/schedule.hpp"
#include "vardiff/toy_net.hpp"

namespace vardiff {

struct TrainConfig {
  int epochs = 150;
  int batch = 64;
  double learning_rate = 1e-3;
  double weight_decay = 1e-4;
  std::uint64_t seed = 0;
};

/// Standardized training pairs: targets[i] is the clean field, conds[i] the
/// conditioning already resampled to the target grid. Neither is divided by
/// lambda yet; training applies the scaling.
struct TrainingSet {
  std::vector<std::vector<double>> targets;
  std::vector<std::vector<double>> conds;

  std::size_t size() const { return targets.size(); }
};

struct TrainResult {
  std::vector<double> step_loss;   // MAE of every optimizer step
  std::vector<double> epoch_loss;  // mean MAE per epoch
};

/// Fits the noise predictor with AdamW on the mean absolute noise error.
///
/// Each step draws t uniformly from {0..T} and eps ~ N(0, I) per sample and
/// forms x_t = sr[t] * x / lambda + nr[t] * eps (conditioning also / lambda).
/// Throws NumericalError when the loss stops being finite.
TrainResult train(ToyDenoiser& net, const TrainingSet& data, const TrainConfig& cfg);

/// Mean absolute noise error over `batches` fixed-seed batches.
double evaluate_loss(const ToyDenoiser& net, const TrainingSet& data, int batches, int batch,
                     std::uint64_t seed);

}  // namespace vardiff
