#include "vardiff/synthdata.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "vardiff/errors.hpp"
#include "vardiff/rng.hpp"

namespace vardiff {

std::string_view covariance_kind_name(CovarianceKind k) {
  switch (k) {
    case CovarianceKind::White: return "white";
    case CovarianceKind::DiagonalProfile: return "diagonal";
    case CovarianceKind::SmoothedSpectral: return "smoothed";
  }
  return "?";
}

CovarianceKind parse_covariance_kind(std::string_view name) {
  for (auto k : {CovarianceKind::White, CovarianceKind::DiagonalProfile,
                 CovarianceKind::SmoothedSpectral}) {
    if (covariance_kind_name(k) == name) return k;
  }
  throw ParameterError(
      fmt::format("unknown covariance kind '{}' (expected white, diagonal or smoothed)", name));
}

void FieldSpec::validate() const {
  if (height < 1 || width < 1) {
    throw ParameterError(fmt::format("field spec: invalid shape {}x{}", height, width));
  }
  if (variance.height() != height || variance.width() != width || mean.height() != height ||
      mean.width() != width) {
    throw ShapeError("field spec: variance and mean maps must match the field shape");
  }
  for (double v : variance.values()) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ParameterError("field spec: variance profile must be positive everywhere");
    }
  }
  if (!(length_scale >= 0.0)) {
    throw ParameterError(fmt::format("field spec: length scale {} must be >= 0", length_scale));
  }
  for (double a : season_amplitude) {
    if (!(a > 0.0)) throw ParameterError("field spec: seasonal amplitudes must be positive");
  }
}

namespace {

Grid smooth_mean(int h, int w) {
  Grid mean(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      mean(y, x) = 0.5 * std::sin(std::numbers::pi * x / w) + 0.3 * static_cast<double>(y) / h;
    }
  }
  return mean;
}

}  // namespace

FieldSpec default_field_spec(int h, int w) {
  FieldSpec spec;
  spec.height = h;
  spec.width = w;
  spec.kind = CovarianceKind::SmoothedSpectral;
  spec.variance = Grid(h, w, 1.0);
  spec.mean = smooth_mean(h, w);
  spec.length_scale = 3.0;
  return spec;
}

FieldSpec diagonal_profile_spec(int h, int w) {
  FieldSpec spec;
  spec.height = h;
  spec.width = w;
  spec.kind = CovarianceKind::DiagonalProfile;
  spec.variance = Grid(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Log-variance ramps smoothly from log 0.5 to log 2 across the diagonal.
      const double u = (h + w > 2) ? static_cast<double>(x + y) / (h + w - 2) : 0.5;
      spec.variance(y, x) = 0.5 * std::pow(4.0, u);
    }
  }
  spec.mean = smooth_mean(h, w);
  spec.length_scale = 0.0;
  spec.season_amplitude = {1.0, 1.0, 1.0, 1.0};
  return spec;
}

Grid field_variance(const FieldSpec& spec, Season season) {
  const double a = spec.season_amplitude[static_cast<int>(season)];
  Grid v = spec.variance;
  if (spec.kind == CovarianceKind::White) {
    for (auto& x : v.data()) x = spec.variance.data().front();
  }
  for (auto& x : v.data()) x *= a * a;
  return v;
}

Grid sample_field(const FieldSpec& spec, Season season, std::uint64_t seed) {
  spec.validate();
  const int h = spec.height;
  const int w = spec.width;
  Rng rng(seed);
  Grid z(h, w);
  if (spec.kind == CovarianceKind::SmoothedSpectral && spec.length_scale > 0.0) {
    // Valid convolution of a padded white field keeps every output pixel
    // stationary; the kernel is scaled to unit sum of squares so z ~ N(0, 1).
    const int r = static_cast<int>(std::ceil(3.0 * spec.length_scale));
    const int k = 2 * r + 1;
    std::vector<double> kern(k);
    for (int i = 0; i < k; ++i) {
      const double d = (i - r) / spec.length_scale;
      kern[i] = std::exp(-0.5 * d * d);
    }
    double ss = 0.0;
    for (double a : kern) {
      for (double b : kern) ss += a * a * b * b;
    }
    const double norm = 1.0 / std::sqrt(ss);
    const int ph = h + 2 * r;
    const int pw = w + 2 * r;
    const std::vector<double> noise = normal_vector(rng, static_cast<std::size_t>(ph) * pw);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double s = 0.0;
        for (int i = 0; i < k; ++i) {
          for (int j = 0; j < k; ++j) {
            s += kern[i] * kern[j] * noise[static_cast<std::size_t>(y + i) * pw + x + j];
          }
        }
        z(y, x) = s * norm;
      }
    }
  } else {
    z = Grid(h, w, normal_vector(rng, static_cast<std::size_t>(h) * w));
  }
  const Grid var = field_variance(spec, season);
  Grid out(h, w);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data()[i] = spec.mean.data()[i] + std::sqrt(var.data()[i]) * z.data()[i];
  }
  return out;
}

PairedDataset make_dataset(const FieldSpec& spec, int samples, int factor, std::uint64_t seed) {
  spec.validate();
  if (samples < 1) throw ParameterError(fmt::format("make_dataset: samples = {} < 1", samples));
  if (factor < 1 || spec.height % factor != 0 || spec.width % factor != 0) {
    throw ParameterError(fmt::format("make_dataset: coarsening factor {} does not divide {}x{}",
                                     factor, spec.height, spec.width));
  }
  PairedDataset d;
  d.coarse_factor = factor;
  for (int i = 0; i < samples; ++i) {
    const Season k = kSeasons[static_cast<std::size_t>(i) % 4];
    Grid hi = sample_field(spec, k, derive_seed(seed, static_cast<std::uint64_t>(i), 0));
    d.lo.push_back(bilinear_resize(hi, spec.height / factor, spec.width / factor));
    d.hi.push_back(std::move(hi));
    d.seasons.push_back(k);
  }
  return d;
}

}  // namespace vardiff
