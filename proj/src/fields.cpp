#include "vardiff/fields.hpp"

#include <cmath>
#include <iostream>

#include <fmt/format.h>

#include "vardiff/errors.hpp"

namespace vardiff {

namespace {

void require_finite(const Grid& g, const char* op) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g.values()[i])) {
      throw NumericalError(fmt::format("{}: non-finite value at flat index {}", op, i));
    }
  }
}

double source_coordinate(int i, int src, int dst) {
  if (dst == 1) return 0.0;
  return static_cast<double>(i) * (src - 1) / (dst - 1);
}

}  // namespace

Grid::Grid(int h, int w, double fill) : h_(h), w_(w) {
  if (h < 0 || w < 0) throw ShapeError(fmt::format("grid: negative shape {}x{}", h, w));
  values_.assign(static_cast<std::size_t>(h) * w, fill);
}

Grid::Grid(int h, int w, std::vector<double> values) : h_(h), w_(w), values_(std::move(values)) {
  if (h < 0 || w < 0 || values_.size() != static_cast<std::size_t>(h) * w) {
    throw ShapeError(
        fmt::format("grid: {} values do not fill a {}x{} grid", values_.size(), h, w));
  }
}

Grid wind_speed(const Grid& u, const Grid& v) {
  if (!u.same_shape(v)) {
    throw ShapeError(fmt::format("wind_speed: u is {}x{} but v is {}x{}", u.height(),
                                 u.width(), v.height(), v.width()));
  }
  Grid s(u.height(), u.width());
  for (std::size_t i = 0; i < s.size(); ++i) {
    s.data()[i] = std::hypot(u.data()[i], v.data()[i]);
  }
  require_finite(s, "wind_speed");
  return s;
}

Grid bilinear_resize(const Grid& g, int h2, int w2) {
  if (g.empty()) throw ShapeError("bilinear_resize: empty grid");
  if (h2 < 1 || w2 < 1) {
    throw ShapeError(fmt::format("bilinear_resize: target {}x{} must be positive", h2, w2));
  }
  if (h2 == g.height() && w2 == g.width()) return g;
  const int h = g.height();
  const int w = g.width();
  Grid out(h2, w2);
  for (int i = 0; i < h2; ++i) {
    const double y = source_coordinate(i, h, h2);
    const int y0 = static_cast<int>(std::floor(y));
    const int y1 = std::min(y0 + 1, h - 1);
    const double fy = y - y0;
    for (int j = 0; j < w2; ++j) {
      const double x = source_coordinate(j, w, w2);
      const int x0 = static_cast<int>(std::floor(x));
      const int x1 = std::min(x0 + 1, w - 1);
      const double fx = x - x0;
      const double top = (1.0 - fx) * g(y0, x0) + fx * g(y0, x1);
      const double bottom = (1.0 - fx) * g(y1, x0) + fx * g(y1, x1);
      out(i, j) = (1.0 - fy) * top + fy * bottom;
    }
  }
  require_finite(out, "bilinear_resize");
  return out;
}

Grid mirror_pad(const Grid& g, int h2, int w2) {
  const int h = g.height();
  const int w = g.width();
  if (h2 < h || w2 < w) {
    throw ParameterError(
        fmt::format("mirror_pad: target {}x{} smaller than source {}x{}", h2, w2, h, w));
  }
  if (h2 - h >= h || w2 - w >= w) {
    throw ParameterError(fmt::format(
        "mirror_pad: padding {}x{} must be smaller than source {}x{}", h2 - h, w2 - w, h, w));
  }
  auto reflect = [](int i, int n) { return i < n ? i : 2 * (n - 1) - i; };
  Grid out(h2, w2);
  for (int y = 0; y < h2; ++y) {
    for (int x = 0; x < w2; ++x) out(y, x) = g(reflect(y, h), reflect(x, w));
  }
  return out;
}

Grid crop(const Grid& g, int h2, int w2) {
  if (h2 < 0 || w2 < 0 || h2 > g.height() || w2 > g.width()) {
    throw ParameterError(fmt::format("crop: {}x{} does not fit inside {}x{}", h2, w2,
                                     g.height(), g.width()));
  }
  Grid out(h2, w2);
  for (int y = 0; y < h2; ++y) {
    for (int x = 0; x < w2; ++x) out(y, x) = g(y, x);
  }
  return out;
}

Grid Standardizer::apply(const Grid& g) const {
  Grid out = g;
  for (auto& v : out.data()) v = apply(v);
  return out;
}

Grid Standardizer::invert(const Grid& g) const {
  Grid out = g;
  for (auto& v : out.data()) v = invert(v);
  return out;
}

Standardizer fit_standardizer(std::span<const Grid> train) {
  std::size_t count = 0;
  double sum = 0.0;
  for (const auto& g : train) {
    for (double v : g.values()) sum += v;
    count += g.size();
  }
  if (count == 0) throw ParameterError("fit_standardizer: empty training set");
  const double mean = sum / static_cast<double>(count);
  double ss = 0.0;
  for (const auto& g : train) {
    for (double v : g.values()) ss += (v - mean) * (v - mean);
  }
  double sd = std::sqrt(ss / static_cast<double>(count));
  if (sd < Standardizer::kMinStd) {
    std::clog << fmt::format(
        "warning: fit_standardizer: training set is constant (std={:g}); clamping std to {:g}\n",
        sd, Standardizer::kMinStd);
    sd = Standardizer::kMinStd;
  }
  return Standardizer{mean, sd};
}

}  // namespace vardiff
