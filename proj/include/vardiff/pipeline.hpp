#pragma once

#include <filesystem>
#include <vector>

#include "vardiff/sampler.hpp"
#include "vardiff/synthdata.hpp"
#include "vardiff/toy_net.hpp"
#include "vardiff/train.hpp"

namespace vardiff {

/// Separate target (hi) and conditioning (lo) standardizers.
ModelNormalization fit_normalization(const PairedDataset& data);

/// Standardized targets and standardized, upsampled conditioning.
TrainingSet make_training_set(const PairedDataset& data, const ModelNormalization& norm);

/// Denoiser-ready conditioning for every sample (standardized, upsampled,
/// divided by lambda).
std::vector<std::vector<double>> make_conditions(const PairedDataset& data,
                                                 const ModelNormalization& norm, double lambda);

/// Sampler settings that return fields in the units of the training targets.
SamplerConfig sampler_for(const ToyDenoiser& net, int steps, int members, std::uint64_t seed,
                          int threads);

/// Dataset directory: hi.grd (S x h x w), lo.grd, seasons.csv.
void save_dataset(const std::filesystem::path& dir, const PairedDataset& data);
PairedDataset load_dataset(const std::filesystem::path& dir);

/// Least-squares affine map from flattened lo fields to hi fields; the
/// deterministic regression baseline.
class LinearBaseline {
 public:
  static LinearBaseline fit(const PairedDataset& train, double ridge = 1e-6);
  Grid predict(const Grid& lo) const;

 private:
  int h_ = 0;
  int w_ = 0;
  Eigen::MatrixXd weights_;  // (lo pixels + 1) x hi pixels
};

}  // namespace vardiff
