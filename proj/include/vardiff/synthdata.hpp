#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "vardiff/ensemble_stats.hpp"
#include "vardiff/fields.hpp"

namespace vardiff {

enum class CovarianceKind { White, DiagonalProfile, SmoothedSpectral };

std::string_view covariance_kind_name(CovarianceKind k);
CovarianceKind parse_covariance_kind(std::string_view name);

/// Gaussian random field description.
///
/// A sample is mean + a_k * sigma(x, y) * z(x, y), where z has unit variance
/// per pixel: i.i.d. for White and DiagonalProfile, white noise convolved with
/// a normalized Gaussian kernel of standard deviation `length_scale` pixels for
/// SmoothedSpectral. White uses a constant variance (the profile's first
/// entry), DiagonalProfile and SmoothedSpectral use the full profile.
struct FieldSpec {
  int height = 16;
  int width = 16;
  CovarianceKind kind = CovarianceKind::SmoothedSpectral;
  Grid variance;  // sigma^2(x, y) > 0
  Grid mean;
  double length_scale = 3.0;
  std::array<double, 4> season_amplitude = {1.3, 1.0, 0.7, 1.0};

  void validate() const;
};

/// Stationary smoothed field with a gentle mean gradient; the downscaling task.
FieldSpec default_field_spec(int h, int w);

/// Independent pixels with variance between 0.5 and 2 and a smooth mean; the
/// exact-oracle regime.
FieldSpec diagonal_profile_spec(int h, int w);

Grid sample_field(const FieldSpec& spec, Season season, std::uint64_t seed);

/// Per-pixel variance a_k^2 * sigma^2 implied by the spec for one season.
Grid field_variance(const FieldSpec& spec, Season season);

struct PairedDataset {
  int coarse_factor = 1;
  std::vector<Grid> hi;
  std::vector<Grid> lo;
  std::vector<Season> seasons;

  std::size_t size() const { return hi.size(); }
};

/// Sample i is drawn from stream derive_seed(seed, i, 0) with season
/// kSeasons[i % 4]; lo = bilinear_resize(hi, h / f, w / f).
PairedDataset make_dataset(const FieldSpec& spec, int samples, int factor, std::uint64_t seed);

}  // namespace vardiff
