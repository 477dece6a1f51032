#include "vardiff/ensemble_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "vardiff/errors.hpp"

namespace vardiff {

std::string_view season_name(Season k) {
  switch (k) {
    case Season::JFM: return "JFM";
    case Season::AMJ: return "AMJ";
    case Season::JAS: return "JAS";
    case Season::OND: return "OND";
  }
  return "?";
}

Season parse_season(std::string_view name) {
  for (Season k : kSeasons) {
    if (season_name(k) == name) return k;
  }
  throw ParameterError(fmt::format("unknown season label '{}' (expected JFM, AMJ, JAS or OND)",
                                   name));
}

EnsembleSet::EnsembleSet(int s, int m, int h, int w)
    : samples(s), members(m), height(h), width(w) {
  if (s < 0 || m < 0 || h < 0 || w < 0) {
    throw ShapeError(fmt::format("ensemble: negative shape {}x{}x{}x{}", s, m, h, w));
  }
  values.assign(static_cast<std::size_t>(s) * m * h * w, 0.0f);
}

Grid EnsembleSet::member(int sample, int m) const {
  Grid g(height, width);
  const std::size_t off = offset(sample, m);
  for (std::size_t p = 0; p < pixels(); ++p) g.data()[p] = values[off + p];
  return g;
}

void EnsembleSet::set_member(int sample, int m, const Grid& g) {
  if (g.height() != height || g.width() != width) {
    throw ShapeError(fmt::format("ensemble: member is {}x{}, ensemble expects {}x{}", g.height(),
                                 g.width(), height, width));
  }
  const std::size_t off = offset(sample, m);
  for (std::size_t p = 0; p < pixels(); ++p) values[off + p] = static_cast<float>(g.data()[p]);
}

Grid EnsembleSet::member_mean(int sample) const {
  Grid g(height, width);
  for (int m = 0; m < members; ++m) {
    const std::size_t off = offset(sample, m);
    for (std::size_t p = 0; p < pixels(); ++p) g.data()[p] += values[off + p];
  }
  for (auto& v : g.data()) v /= members;
  return g;
}

Grid VarianceMaps::map(int sample) const {
  const std::size_t px = static_cast<std::size_t>(height) * width;
  std::vector<double> v(values.begin() + static_cast<std::ptrdiff_t>(sample * px),
                        values.begin() + static_cast<std::ptrdiff_t>((sample + 1) * px));
  return Grid(height, width, std::move(v));
}

VarianceMaps pixelwise_variance(const EnsembleSet& d) {
  if (d.members < 2) {
    throw ParameterError(
        fmt::format("pixelwise_variance: need at least 2 members, got {}", d.members));
  }
  const std::size_t px = d.pixels();
  VarianceMaps v{d.samples, d.height, d.width, std::vector<double>(d.samples * px)};
  std::vector<double> mean(px);
  for (int i = 0; i < d.samples; ++i) {
    std::fill(mean.begin(), mean.end(), 0.0);
    for (int m = 0; m < d.members; ++m) {
      const std::size_t off = d.offset(i, m);
      for (std::size_t p = 0; p < px; ++p) mean[p] += d.values[off + p];
    }
    for (auto& mu : mean) mu /= d.members;
    double* out = v.values.data() + i * px;
    for (int m = 0; m < d.members; ++m) {
      const std::size_t off = d.offset(i, m);
      for (std::size_t p = 0; p < px; ++p) {
        const double diff = d.values[off + p] - mean[p];
        out[p] += diff * diff;
      }
    }
    for (std::size_t p = 0; p < px; ++p) out[p] /= d.members;
  }
  return v;
}

double global_mean_variance(const VarianceMaps& v) {
  if (v.values.empty()) throw ParameterError("global_mean_variance: empty variance maps");
  double sum = 0.0;
  for (double x : v.values) sum += x;
  return sum / static_cast<double>(v.values.size());
}

Grid spatial_mean_variance(const VarianceMaps& v, std::span<const Season> labels, Season season) {
  if (labels.size() != static_cast<std::size_t>(v.samples)) {
    throw ShapeError(fmt::format("spatial_mean_variance: {} labels for {} samples", labels.size(),
                                 v.samples));
  }
  Grid out(v.height, v.width);
  const std::size_t px = out.size();
  int count = 0;
  for (int i = 0; i < v.samples; ++i) {
    if (labels[i] != season) continue;
    ++count;
    for (std::size_t p = 0; p < px; ++p) out.data()[p] += v.values[i * px + p];
  }
  if (count == 0) {
    throw ParameterError(
        fmt::format("spatial_mean_variance: season {} has no samples", season_name(season)));
  }
  for (auto& x : out.data()) x /= count;
  return out;
}

Grid spatial_mean_variance(const VarianceMaps& v) {
  if (v.samples < 1) throw ParameterError("spatial_mean_variance: no samples");
  Grid out(v.height, v.width);
  const std::size_t px = out.size();
  for (int i = 0; i < v.samples; ++i) {
    for (std::size_t p = 0; p < px; ++p) out.data()[p] += v.values[i * px + p];
  }
  for (auto& x : out.data()) x /= v.samples;
  return out;
}

double mvd(const Grid& a, const Grid& b) {
  if (!a.same_shape(b) || a.empty()) {
    throw ShapeError(fmt::format("mvd: maps are {}x{} and {}x{}", a.height(), a.width(),
                                 b.height(), b.width()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a.data()[i] - b.data()[i]);
  return sum / static_cast<double>(a.size());
}

double mse(const Grid& a, const Grid& b) {
  if (!a.same_shape(b) || a.empty()) {
    throw ShapeError(fmt::format("mse: grids are {}x{} and {}x{}", a.height(), a.width(),
                                 b.height(), b.width()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

namespace {

std::vector<double> gaussian_window(int size, double sigma) {
  std::vector<double> k(size);
  const double c = (size - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    k[i] = std::exp(-0.5 * (i - c) * (i - c) / (sigma * sigma));
    sum += k[i];
  }
  for (auto& v : k) v /= sum;
  return k;
}

// 'valid' separable filtering of a row-major h x w image.
std::vector<double> filter_valid(const std::vector<double>& img, int h, int w,
                                 const std::vector<double>& k) {
  const int n = static_cast<int>(k.size());
  const int ow = w - n + 1;
  const int oh = h - n + 1;
  std::vector<double> rows(static_cast<std::size_t>(h) * ow, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += k[i] * img[static_cast<std::size_t>(y) * w + x + i];
      rows[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow, 0.0);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += k[i] * rows[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  return out;
}

}  // namespace

double ssim(const Grid& a, const Grid& b, double range, const SsimOptions& opt) {
  if (!a.same_shape(b)) {
    throw ShapeError(fmt::format("ssim: grids are {}x{} and {}x{}", a.height(), a.width(),
                                 b.height(), b.width()));
  }
  if (!(range > 0.0)) {
    throw ParameterError(fmt::format("ssim: data range must be positive, got {}", range));
  }
  if (a.height() < opt.window || a.width() < opt.window) {
    throw ShapeError(fmt::format("ssim: {}x{} grid smaller than the {}x{} window", a.height(),
                                 a.width(), opt.window, opt.window));
  }
  const int h = a.height();
  const int w = a.width();
  const auto k = gaussian_window(opt.window, opt.sigma);
  std::vector<double> aa(a.size()), bb(a.size()), ab(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    aa[i] = a.data()[i] * a.data()[i];
    bb[i] = b.data()[i] * b.data()[i];
    ab[i] = a.data()[i] * b.data()[i];
  }
  const auto mu_a = filter_valid(a.data(), h, w, k);
  const auto mu_b = filter_valid(b.data(), h, w, k);
  const auto e_aa = filter_valid(aa, h, w, k);
  const auto e_bb = filter_valid(bb, h, w, k);
  const auto e_ab = filter_valid(ab, h, w, k);
  const double c1 = (opt.k1 * range) * (opt.k1 * range);
  const double c2 = (opt.k2 * range) * (opt.k2 * range);
  double sum = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double va = e_aa[i] - mu_a[i] * mu_a[i];
    const double vb = e_bb[i] - mu_b[i] * mu_b[i];
    const double cov = e_ab[i] - mu_a[i] * mu_b[i];
    sum += ((2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2)) /
           ((mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (va + vb + c2));
  }
  return sum / static_cast<double>(mu_a.size());
}

double data_range(std::span<const Grid> reference) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& g : reference) {
    for (double v : g.values()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi >= lo)) throw ParameterError("data_range: empty reference set");
  return hi - lo;
}

}  // namespace vardiff
