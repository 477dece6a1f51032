#include <doctest.h>

#include <cmath>
#include <random>

#include "vardiff/ensemble_stats.hpp"
#include "vardiff/errors.hpp"
#include "vardiff/rng.hpp"

using namespace vardiff;

namespace {

EnsembleSet random_ensemble(int s, int m, int h, int w, std::uint64_t seed) {
  EnsembleSet e(s, m, h, w);
  Rng rng = make_stream(seed);
  std::normal_distribution<float> n;
  for (auto& v : e.values) v = n(rng);
  for (int i = 0; i < s; ++i) e.seasons.push_back(kSeasons[i % 4]);
  return e;
}

Grid random_map(int h, int w, std::uint64_t seed) {
  Rng rng = make_stream(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  Grid g(h, w);
  for (auto& v : g.data()) v = u(rng);
  return g;
}

// Reference SSIM: full 2-D Gaussian window evaluated at every valid position.
double reference_ssim(const Grid& a, const Grid& b, double L) {
  const int win = 11;
  const double sigma = 1.5;
  std::vector<double> k2(win * win);
  double total = 0.0;
  for (int y = 0; y < win; ++y) {
    for (int x = 0; x < win; ++x) {
      const double dy = y - 5, dx = x - 5;
      k2[y * win + x] = std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
      total += k2[y * win + x];
    }
  }
  for (auto& v : k2) v /= total;
  const double c1 = std::pow(0.01 * L, 2), c2 = std::pow(0.03 * L, 2);
  double sum = 0.0;
  int count = 0;
  for (int y0 = 0; y0 + win <= a.height(); ++y0) {
    for (int x0 = 0; x0 + win <= a.width(); ++x0) {
      double ma = 0, mb = 0;
      for (int y = 0; y < win; ++y) {
        for (int x = 0; x < win; ++x) {
          ma += k2[y * win + x] * a(y0 + y, x0 + x);
          mb += k2[y * win + x] * b(y0 + y, x0 + x);
        }
      }
      double va = 0, vb = 0, cov = 0;
      for (int y = 0; y < win; ++y) {
        for (int x = 0; x < win; ++x) {
          const double da = a(y0 + y, x0 + x) - ma, db = b(y0 + y, x0 + x) - mb;
          va += k2[y * win + x] * da * da;
          vb += k2[y * win + x] * db * db;
          cov += k2[y * win + x] * da * db;
        }
      }
      sum += (2 * ma * mb + c1) * (2 * cov + c2) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++count;
    }
  }
  return sum / count;
}

}  // namespace

TEST_CASE("pixel-wise variance") {
  EnsembleSet two(1, 2, 1, 1);
  two.values = {0.0f, 2.0f};
  CHECK(pixelwise_variance(two).values == std::vector<double>{1.0});

  EnsembleSet same(2, 5, 3, 3);
  std::fill(same.values.begin(), same.values.end(), 1.25f);
  for (double v : pixelwise_variance(same).values) CHECK(v == 0.0);

  for (auto [s, m, h, w] : {std::array{3, 4, 5, 6}, std::array{8, 10, 16, 16}}) {
    const EnsembleSet e = random_ensemble(s, m, h, w, 3);
    const VarianceMaps v = pixelwise_variance(e);
    for (int i = 0; i < s; ++i) {
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          double mean = 0.0;
          for (int j = 0; j < m; ++j) mean += e.at(i, j, y, x);
          mean /= m;
          double acc = 0.0;
          for (int j = 0; j < m; ++j) acc += std::pow(e.at(i, j, y, x) - mean, 2);
          CHECK(std::abs(v.map(i)(y, x) - acc / m) < 1e-12);
        }
      }
    }
  }

  EnsembleSet single(1, 1, 2, 2);
  CHECK_THROWS_AS(pixelwise_variance(single), ParameterError);
}

TEST_CASE("pixel-wise variance is shift invariant and scales quadratically") {
  const EnsembleSet e = random_ensemble(2, 6, 4, 4, 5);
  EnsembleSet shifted = e, scaled = e;
  for (auto& v : shifted.values) v += 3.0f;
  for (auto& v : scaled.values) v *= 2.0f;
  const auto base = pixelwise_variance(e).values;
  const auto sh = pixelwise_variance(shifted).values;
  const auto sc = pixelwise_variance(scaled).values;
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(sh[i] == doctest::Approx(base[i]).epsilon(1e-5));
    CHECK(sc[i] == doctest::Approx(4.0 * base[i]).epsilon(1e-12));
  }
}

TEST_CASE("global mean variance") {
  CHECK(global_mean_variance({2, 3, 3, std::vector<double>(18, 0.5)}) == 0.5);
  CHECK(global_mean_variance({1, 2, 2, std::vector<double>(4, 0.0)}) == 0.0);
  const VarianceMaps v = pixelwise_variance(random_ensemble(8, 10, 16, 16, 6));
  double s = 0.0;
  for (double x : v.values) s += x;
  CHECK(std::abs(global_mean_variance(v) - s / v.values.size()) < 1e-12);
  CHECK_THROWS_AS(global_mean_variance(VarianceMaps{}), ParameterError);
}

TEST_CASE("seasonal spatial mean variance") {
  const EnsembleSet e = random_ensemble(8, 10, 16, 16, 7);
  const VarianceMaps v = pixelwise_variance(e);
  for (Season k : kSeasons) {
    const Grid got = spatial_mean_variance(v, e.seasons, k);
    for (int y = 0; y < 16; ++y) {
      for (int x = 0; x < 16; ++x) {
        double acc = 0.0;
        int count = 0;
        for (int i = 0; i < 8; ++i) {
          if (e.seasons[i] != k) continue;
          acc += v.map(i)(y, x);
          ++count;
        }
        CHECK(std::abs(got(y, x) - acc / count) < 1e-12);
      }
    }
  }

  // One sample in a season returns that sample's map.
  const std::vector<Season> labels = {Season::JFM, Season::AMJ, Season::AMJ, Season::JAS,
                                      Season::OND, Season::AMJ, Season::JAS, Season::OND};
  CHECK(spatial_mean_variance(v, labels, Season::JFM) == v.map(0));

  // Identical samples give the same map for every season.
  VarianceMaps rep{8, 2, 2, {}};
  for (int i = 0; i < 8; ++i) rep.values.insert(rep.values.end(), {0.1, 0.2, 0.3, 0.4});
  for (Season k : kSeasons) CHECK(spatial_mean_variance(rep, e.seasons, k) == rep.map(0));

  // The global mean is the S_k/S-weighted mean of the seasonal maps.
  double weighted = 0.0;
  for (Season k : kSeasons) {
    const Grid g = spatial_mean_variance(v, labels, k);
    double m = 0.0;
    for (double x : g.values()) m += x;
    const auto count = std::count(labels.begin(), labels.end(), k);
    weighted += m / g.size() * count / 8.0;
  }
  CHECK(weighted == doctest::Approx(global_mean_variance(v)).epsilon(1e-12));

  const std::vector<Season> missing(8, Season::JFM);
  try {
    spatial_mean_variance(v, missing, Season::JAS);
    FAIL("expected an error");
  } catch (const ParameterError& err) {
    CHECK(std::string(err.what()).find("JAS") != std::string::npos);
  }
}

TEST_CASE("MVD") {
  const Grid a = random_map(16, 16, 8);
  CHECK(mvd(a, a) == 0.0);
  Grid shifted = a;
  for (auto& v : shifted.data()) v -= 0.25;
  CHECK(mvd(a, shifted) == doctest::Approx(0.25).epsilon(1e-12));
  const Grid b = random_map(16, 16, 9);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a.data()[i] - b.data()[i]);
  CHECK(std::abs(mvd(a, b) - acc / a.size()) < 1e-12);
  for (int trial = 0; trial < 100; ++trial) {
    const Grid x = random_map(6, 5, 100 + trial);
    const Grid y = random_map(6, 5, 200 + trial);
    const Grid z = random_map(6, 5, 300 + trial);
    CHECK(mvd(x, y) == mvd(y, x));
    CHECK(mvd(x, y) > 0.0);
    CHECK(mvd(x, z) <= mvd(x, y) + mvd(y, z) + 1e-15);
  }
  CHECK_THROWS_AS(mvd(a, Grid(4, 4)), ShapeError);
}

TEST_CASE("MSE and SSIM") {
  const Grid a = random_map(16, 16, 10);
  CHECK(mse(a, a) == 0.0);
  Grid b = a;
  for (auto& v : b.data()) v += 0.3;
  CHECK(mse(a, b) == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(ssim(a, a, 2.0) == doctest::Approx(1.0).epsilon(1e-14));

  const Grid c = random_map(16, 16, 11);
  CHECK(std::abs(ssim(a, c, 2.0) - reference_ssim(a, c, 2.0)) < 1e-6);
  const Grid d = random_map(23, 19, 12);
  Grid e = d;
  for (std::size_t i = 0; i < e.size(); ++i) e.data()[i] = 0.7 * e.data()[i] + 0.05 * (i % 7);
  CHECK(std::abs(ssim(d, e, 2.0) - reference_ssim(d, e, 2.0)) < 1e-6);

  CHECK_THROWS_AS(ssim(a, a, 0.0), ParameterError);
  CHECK_THROWS_AS(ssim(a, Grid(16, 15), 1.0), ShapeError);
  CHECK_THROWS_AS(ssim(Grid(8, 8), Grid(8, 8), 1.0), ShapeError);
  CHECK_THROWS_AS(mse(a, Grid(3, 3)), ShapeError);

  const std::vector<Grid> refs = {Grid(2, 2, {0.0, 1.0, 2.0, 3.0}), Grid(2, 2, -1.0)};
  CHECK(data_range(refs) == 4.0);
}

TEST_CASE("season labels") {
  for (Season k : kSeasons) CHECK(parse_season(season_name(k)) == k);
  CHECK_THROWS_AS(parse_season("DJF"), ParameterError);
}
