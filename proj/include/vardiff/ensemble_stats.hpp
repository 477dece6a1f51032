#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vardiff/fields.hpp"

namespace vardiff {

enum class Season { JFM = 0, AMJ = 1, JAS = 2, OND = 3 };

inline constexpr std::array<Season, 4> kSeasons = {Season::JFM, Season::AMJ, Season::JAS,
                                                    Season::OND};

std::string_view season_name(Season k);
Season parse_season(std::string_view name);

/// S samples x M members of h x w fields, stored as f32 with the member
/// fields of one sample contiguous.
struct EnsembleSet {
  int samples = 0;
  int members = 0;
  int height = 0;
  int width = 0;
  std::vector<float> values;
  std::vector<Season> seasons;  // empty, or one label per sample

  EnsembleSet() = default;
  EnsembleSet(int s, int m, int h, int w);

  std::size_t pixels() const { return static_cast<std::size_t>(height) * width; }
  std::size_t offset(int sample, int member) const {
    return (static_cast<std::size_t>(sample) * members + member) * pixels();
  }
  float& at(int sample, int member, int y, int x) {
    return values[offset(sample, member) + static_cast<std::size_t>(y) * width + x];
  }
  float at(int sample, int member, int y, int x) const {
    return values[offset(sample, member) + static_cast<std::size_t>(y) * width + x];
  }
  Grid member(int sample, int member) const;
  void set_member(int sample, int member, const Grid& g);
  /// Per-pixel mean over members of one sample.
  Grid member_mean(int sample) const;
};

/// Pixel-wise variance maps, S x h x w, one map per sample.
struct VarianceMaps {
  int samples = 0;
  int height = 0;
  int width = 0;
  std::vector<double> values;

  Grid map(int sample) const;
};

/// Population variance over members (divisor M) at every (sample, y, x).
VarianceMaps pixelwise_variance(const EnsembleSet& d);

/// Mean of V over all samples and pixels.
double global_mean_variance(const VarianceMaps& v);

/// Per-pixel mean of V over the samples labelled `season`.
Grid spatial_mean_variance(const VarianceMaps& v, std::span<const Season> labels, Season season);

/// Per-pixel mean of V over every sample (the yearly map).
Grid spatial_mean_variance(const VarianceMaps& v);

/// Mean absolute difference between two maps.
double mvd(const Grid& a, const Grid& b);

double mse(const Grid& a, const Grid& b);

struct SsimOptions {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
};

/// Mean SSIM over all fully-contained Gaussian windows.
/// `data_range` is the dynamic range L of the reference data.
double ssim(const Grid& a, const Grid& b, double data_range, const SsimOptions& opt = {});

/// max - min over a set of reference grids.
double data_range(std::span<const Grid> reference);

}  // namespace vardiff
