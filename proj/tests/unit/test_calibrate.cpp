#include <doctest.h>

#include "vardiff/calibrate.hpp"
#include "vardiff/errors.hpp"
#include "vardiff/sampler.hpp"
#include "vardiff/synthdata.hpp"

using namespace vardiff;

namespace {

struct Setup {
  Schedule s = make_schedule(256, 0.02, 0.995, 1.0);
  FieldSpec spec = diagonal_profile_spec(8, 8);
  GaussianOracle oracle{spec.mean.data(), spec.variance.data(), s};
  std::vector<std::vector<double>> conds = std::vector<std::vector<double>>(8);
  SamplerConfig cfg = [] {
    SamplerConfig c;
    c.members = 10;
    c.height = c.width = 8;
    c.base_seed = 21;
    c.delta_t = 32;
    return c;
  }();

  EnsembleSet reference(int steps) const {
    SamplerConfig c = cfg;
    c.delta_t = 256 / steps;
    EnsembleSet e = generate_ensemble_set(oracle, s, c, conds);
    for (int i = 0; i < e.samples; ++i) e.seasons.push_back(kSeasons[i % 4]);
    return e;
  }
};

}  // namespace

TEST_CASE("round trip recovers the reference step count") {
  const Setup st;
  const std::vector<int> candidates = {2, 4, 8, 16, 32};
  for (int n_star : {4, 8}) {
    const CalibrationReport r =
        calibrate_steps(st.oracle, st.s, st.reference(n_star), st.conds, candidates, st.cfg);
    CHECK(r.best(CalibrationCriterion::Global) == n_star);
    CHECK(r.best(CalibrationCriterion::Mvd) == n_star);
    REQUIRE(r.rows.size() == candidates.size());
    for (const auto& row : r.rows) CHECK(row.mvd_season.has_value());
  }
}

TEST_CASE("report rows and reproducibility") {
  const Setup st;
  const EnsembleSet ref = st.reference(16);
  const std::vector<int> candidates = {2, 4, 8};
  const auto a = calibrate_steps(st.oracle, st.s, ref, st.conds, candidates, st.cfg);
  const auto b = calibrate_steps(st.oracle, st.s, ref, st.conds, candidates, st.cfg);
  CHECK(a.to_csv() == b.to_csv());
  for (std::size_t k = 1; k < a.rows.size(); ++k) CHECK(a.rows[k].mu_v >= a.rows[k - 1].mu_v);
  CHECK(a.to_csv().rfind("N_steps,mu_V", 0) == 0);
  CHECK(a.to_csv(true).find("runtime_s") != std::string::npos);

  const std::vector<int> single = {4};
  const auto one = calibrate_steps(st.oracle, st.s, ref, st.conds, single, st.cfg);
  CHECK(one.rows.size() == 1);
  CHECK(one.best_global == 4);
  CHECK(one.best_mvd == 4);
}

TEST_CASE("ties go to the smaller step count") {
  // With a zero denoiser every N only rescales the initial noise by
  // sr_max / sr_min, so all candidates score the same.
  struct Snap final : Denoiser {
    std::vector<double> predict(std::span<const double> x, int, std::span<const double>) const override {
      return std::vector<double>(x.size(), 0.0);
    }
    std::string id() const override { return "zero"; }
  };
  const Schedule s = make_schedule(4, 0.5, 0.6, 1.0);
  SamplerConfig cfg;
  cfg.members = 4;
  cfg.height = cfg.width = 2;
  cfg.delta_t = 4;
  const std::vector<std::vector<double>> conds(2);
  EnsembleSet ref = generate_ensemble_set(Snap{}, s, cfg, conds);
  const std::vector<int> candidates = {4, 2, 1};
  const auto r = calibrate_steps(Snap{}, s, ref, conds, candidates, cfg);
  for (const auto& row : r.rows) {
    REQUIRE(row.mu_v == r.rows.front().mu_v);
    REQUIRE(row.mvd_yearly == r.rows.front().mvd_yearly);
  }
  CHECK(r.best_global == 1);
  CHECK(r.best_mvd == 1);
}

TEST_CASE("calibration input validation") {
  const Setup st;
  const EnsembleSet ref = st.reference(8);
  CHECK_THROWS_AS(calibrate_steps(st.oracle, st.s, ref, st.conds, std::vector<int>{4, 7}, st.cfg),
                  ParameterError);
  CHECK_THROWS_AS(calibrate_steps(st.oracle, st.s, ref, st.conds, std::vector<int>{}, st.cfg),
                  ParameterError);
  CHECK(parse_criterion("global") == CalibrationCriterion::Global);
  CHECK(parse_criterion("mvd") == CalibrationCriterion::Mvd);
  CHECK_THROWS_AS(parse_criterion("best"), ParameterError);
}
