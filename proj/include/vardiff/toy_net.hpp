#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vardiff/denoiser.hpp"
#include "vardiff/fields.hpp"
#include "vardiff/schedule.hpp"

namespace vardiff {

struct ToyNetConfig {
  int height = 16;
  int width = 16;
  int hidden = 64;
  int blocks = 2;
  int freqs = 8;  // sinusoidal time features: 2 * freqs inputs

  int pixels() const { return height * width; }
  int embed_dim() const { return 2 * freqs; }
  int input_dim() const { return 2 * pixels() + embed_dim(); }

  friend bool operator==(const ToyNetConfig&, const ToyNetConfig&) = default;
};

/// Dataset-level statistics carried with a model so sampling can map back to
/// physical units. Target and conditioning are normalized separately.
struct ModelNormalization {
  Standardizer target;
  Standardizer cond;
};

/// Small residual MLP denoiser on h x w fields.
///
/// Input is [x_t, cond, time features]; a stem layer feeds `blocks` residual
/// blocks of width `hidden`. The head predicts a clean-field estimate
///   D = W_out silu(h) + b_out + g0(t) * x_t + g1(t) * cond,
/// where g(t) is a linear gate on the time features, and returns the noise
/// estimate consistent with it, eps = (x_t - sr[t] * D) / nr[t]. Training
/// still minimizes the error on eps.
///
/// Parameters live in one flat f32 vector (layer order: stem, blocks, head,
/// gate; weights column-major then bias), which is also the checkpoint payload.
class ToyDenoiser final : public Denoiser {
 public:
  using Matrix = Eigen::MatrixXf;

  ToyDenoiser(ToyNetConfig cfg, Schedule schedule, std::uint64_t init_seed);

  std::vector<double> predict(std::span<const double> x, int t,
                              std::span<const double> cond) const override;
  std::vector<std::vector<double>> predict_batch(std::span<const std::vector<double>> xs,
                                                 int t,
                                                 std::span<const double> cond) const override;
  std::string id() const override;

  const ToyNetConfig& config() const { return cfg_; }
  const Schedule& schedule() const { return schedule_; }
  const ModelNormalization& normalization() const { return norm_; }
  void set_normalization(const ModelNormalization& norm) { norm_ = norm; }

  std::size_t parameter_count() const { return theta_.size(); }
  std::span<float> parameters() { return theta_; }
  std::span<const float> parameters() const { return theta_; }

  /// Time features for index t: sin/cos of (t/T) * 2^f * pi/2, f < freqs.
  Eigen::VectorXf time_features(int t) const;

  /// Batched forward pass. Columns of `x`, `cond` are samples; `t` holds one
  /// time index per column. Returns eps estimates (pixels x batch).
  Matrix forward(const Matrix& x, const Matrix& cond, std::span<const int> t) const;

  /// Forward pass followed by back-propagation of dloss/deps into `grad`
  /// (same layout as parameters(), overwritten). Returns eps estimates.
  Matrix forward_backward(const Matrix& x, const Matrix& cond, std::span<const int> t,
                          const std::function<Matrix(const Matrix&)>& loss_grad,
                          std::vector<float>& grad) const;

  void save(const std::filesystem::path& path) const;
  static ToyDenoiser load(const std::filesystem::path& path);

 private:
  struct Layout;
  Layout layout() const;
  Matrix run(const Matrix& x, const Matrix& cond, std::span<const int> t,
             const std::function<Matrix(const Matrix&)>* loss_grad,
             std::vector<float>* grad) const;

  ToyNetConfig cfg_;
  Schedule schedule_;
  ModelNormalization norm_;
  std::vector<float> theta_;
};

inline constexpr std::uint16_t kCheckpointVersion = 1;

}  // namespace vardiff
