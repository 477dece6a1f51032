#pragma once

#include <span>
#include <vector>

namespace vardiff {

/// Row-major 2-D scalar field.
class Grid {
 public:
  Grid() = default;
  Grid(int h, int w, double fill = 0.0);
  Grid(int h, int w, std::vector<double> values);

  int height() const { return h_; }
  int width() const { return w_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator()(int y, int x) { return values_[static_cast<std::size_t>(y) * w_ + x]; }
  double operator()(int y, int x) const { return values_[static_cast<std::size_t>(y) * w_ + x]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

  bool same_shape(const Grid& other) const { return h_ == other.h_ && w_ == other.w_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int h_ = 0;
  int w_ = 0;
  std::vector<double> values_;
};

Grid wind_speed(const Grid& u, const Grid& v);

/// Align-corners bilinear resampling: output index i maps to source
/// coordinate i * (h - 1) / (h2 - 1), or 0 when h2 == 1.
Grid bilinear_resize(const Grid& g, int h2, int w2);

/// Extends g to h2 x w2 by reflecting about the bottom row and right column
/// without repeating the edge.
Grid mirror_pad(const Grid& g, int h2, int w2);

/// Top-left h2 x w2 block.
Grid crop(const Grid& g, int h2, int w2);

struct Standardizer {
  static constexpr double kMinStd = 1e-8;

  double mean = 0.0;
  double std = 1.0;

  double apply(double x) const { return (x - mean) / std; }
  double invert(double z) const { return z * std + mean; }
  Grid apply(const Grid& g) const;
  Grid invert(const Grid& g) const;
};

/// Global mean / standard deviation over every pixel of every grid.
/// A constant training set clamps std to Standardizer::kMinStd with a warning.
Standardizer fit_standardizer(std::span<const Grid> train);

}  // namespace vardiff
