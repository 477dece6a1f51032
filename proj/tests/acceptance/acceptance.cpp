// Acceptance checks, one criterion per invocation:
//   acceptance <criterion 1..11> [--workdir DIR] [--threads N]
// Prints one PASS/FAIL line and exits 0 on pass, 1 on fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vardiff/calibrate.hpp"
#include "vardiff/ensemble_stats.hpp"
#include "vardiff/pipeline.hpp"
#include "vardiff/plot.hpp"
#include "vardiff/rng.hpp"
#include "vardiff/sampler.hpp"
#include "vardiff/synthdata.hpp"
#include "vardiff/toy_net.hpp"
#include "vardiff/train.hpp"
#include "vardiff/variance_theory.hpp"

using namespace vardiff;
namespace fs = std::filesystem;

namespace {

struct Context {
  fs::path dir;
  int threads = 1;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

constexpr int kT = 256;
constexpr int kSize = 16;

Schedule unit_schedule() { return make_schedule(kT, 0.02, 0.995, 1.0); }

GaussianOracle profile_oracle(const Schedule& s) {
  const FieldSpec spec = diagonal_profile_spec(kSize, kSize);
  return GaussianOracle(spec.mean.data(), spec.variance.data(), s);
}

SamplerConfig oracle_config(int steps, int members, std::uint64_t seed, int threads) {
  SamplerConfig cfg;
  cfg.delta_t = delta_t_for_steps(kT, steps);
  cfg.members = members;
  cfg.base_seed = seed;
  cfg.threads = threads;
  cfg.height = kSize;
  cfg.width = kSize;
  return cfg;
}

std::string e9(double v) { return fmt::format("{:.9e}", v); }

// ---------------------------------------------------------------------------
// Trained toy model shared by criteria 5, 8, 9 and 10. Training is seeded, so
// every criterion rebuilds the identical model.

struct ToyTask {
  PairedDataset train;
  PairedDataset test;
  ToyDenoiser net;
};

ToyTask train_toy() {
  const FieldSpec spec = default_field_spec(kSize, kSize);
  PairedDataset tr = make_dataset(spec, 4096, 4, 1);
  PairedDataset te = make_dataset(spec, 256, 4, 2);
  ToyDenoiser net(ToyNetConfig{}, unit_schedule(), 0);
  const ModelNormalization norm = fit_normalization(tr);
  net.set_normalization(norm);
  TrainConfig cfg;
  cfg.seed = 0;
  train(net, make_training_set(tr, norm), cfg);
  return {std::move(tr), std::move(te), std::move(net)};
}

EnsembleSet toy_ensemble(const ToyTask& task, int steps, int members, std::uint64_t seed,
                         int threads) {
  const SamplerConfig cfg = sampler_for(task.net, steps, members, seed, threads);
  EnsembleSet e = generate_ensemble_set(
      task.net, task.net.schedule(), cfg,
      make_conditions(task.test, task.net.normalization(), task.net.schedule().lambda()));
  e.seasons = task.test.seasons;
  return e;
}

// Ensemble-mean skill on standardized values.
std::pair<double, double> mean_skill(const ToyTask& task, const EnsembleSet& e) {
  const Standardizer& norm = task.net.normalization().target;
  std::vector<Grid> truth;
  for (const auto& g : task.test.hi) truth.push_back(norm.apply(g));
  const double range = data_range(truth);
  double m = 0.0, q = 0.0;
  for (int i = 0; i < e.samples; ++i) {
    const Grid mean = norm.apply(e.member_mean(i));
    m += mse(mean, truth[i]);
    q += ssim(mean, truth[i], range);
  }
  return {m / e.samples, q / e.samples};
}

// ---------------------------------------------------------------------------

Outcome criterion1(const Context&) {
  const Schedule s = make_schedule(kT, 0.02, 0.995, 3.0);
  double worst = 0.0;
  for (int t = 0; t <= kT; ++t) {
    const double sr = s.signal_rate(t), nr = s.noise_rate(t);
    worst = std::max(worst, std::abs(sr * sr + nr * nr - 1.0));
  }
  const bool ends = s.signal_rate(0) == 0.02 && s.signal_rate(kT) == 0.995;
  return {worst <= 1e-12 && ends,
          fmt::format("max |sr^2+nr^2-1| = {:.2e}, endpoints exact: {}", worst, ends)};
}

Outcome criterion2(const Context&) {
  struct Exact final : Denoiser {
    std::vector<double> eps;
    std::vector<double> predict(std::span<const double>, int,
                                std::span<const double>) const override {
      return eps;
    }
    std::string id() const override { return "exact-noise"; }
  };
  const Schedule s = unit_schedule();
  Rng rng = make_stream(2024);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int dt = std::uniform_int_distribution<int>(1, kT)(rng);
    const int t = std::uniform_int_distribution<int>(dt, kT)(rng);
    const auto x_star = normal_vector(rng, 64);
    Exact d;
    d.eps = normal_vector(rng, 64);
    std::vector<double> x(64);
    for (int i = 0; i < 64; ++i) {
      x[i] = s.signal_rate(t - dt) * x_star[i] + s.noise_rate(t - dt) * d.eps[i];
    }
    const auto out = ddim_step(x, t, dt, d, s, {});
    for (int i = 0; i < 64; ++i) {
      worst = std::max(worst,
                       std::abs(out[i] - (s.signal_rate(t) * x_star[i] + s.noise_rate(t) * d.eps[i])));
    }
  }
  return {worst <= 1e-10, fmt::format("max deviation over 100 tuples = {:.2e}", worst)};
}

Outcome criterion3(const Context& ctx) {
  const Schedule s = unit_schedule();
  const GaussianOracle o = profile_oracle(s);
  const std::size_t n = kSize * kSize;
  std::string csv =
      "N_steps,predicted_mean_v_T,empirical_mean_v,exact_linear_mean_v,mean_rel_error,"
      "frac_pixels_within_15pct\n";
  bool pass = true;
  std::string detail;
  for (int steps : {1, 2, 4, 8, 16}) {
    const int dt = kT / steps;
    const VariancePrediction p = predict_variance_closed(o, s, dt, {}, n);
    const auto members = generate_ensemble(o, s, oracle_config(steps, 4096, 3, ctx.threads), {});
    std::vector<std::vector<double>> flat;
    flat.reserve(members.size());
    for (const auto& g : members) flat.push_back(g.data());
    const auto emp = elementwise_variance(flat);

    // Exact variance of the affine oracle dynamics, for the report only.
    double exact_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double v = 1.0;
      for (int t = dt; t <= kT; t += dt) {
        const double k = o.analytic_jacobian_diag(std::vector<double>(n), t - dt, {})->at(i);
        const double gain = s.step_ratio(t, dt) + s.step_coefficient(t, dt) * k;
        v *= gain * gain;
      }
      exact_mean += v / n;
    }

    double pred_mean = 0.0, emp_mean = 0.0;
    int within = 0;
    for (std::size_t i = 0; i < n; ++i) {
      pred_mean += p.v_T[i] / n;
      emp_mean += emp[i] / n;
      if (std::abs(p.v_T[i] - emp[i]) <= 0.15 * emp[i]) ++within;
    }
    const double rel = std::abs(pred_mean - emp_mean) / emp_mean;
    const double frac = static_cast<double>(within) / n;
    const bool ok = rel <= 0.10 && frac >= 0.95;
    pass = pass && ok;
    csv += fmt::format("{},{},{},{},{},{}\n", steps, e9(pred_mean), e9(emp_mean), e9(exact_mean),
                       e9(rel), e9(frac));
    detail += fmt::format("N={}: pred {:.4f} vs MC {:.4f} (rel {:.1f}%, {:.0f}% px ok); ", steps,
                          pred_mean, emp_mean, 100 * rel, 100 * frac);
  }
  write_text(ctx.dir / "criterion3.csv", csv);
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Outcome criterion4(const Context&) {
  const Schedule s = unit_schedule();
  const GaussianOracle o = profile_oracle(s);
  double worst = 0.0;
  int clamps = 0;
  for (int steps : {1, 2, 4, 8, 16}) {
    const int dt = kT / steps;
    const auto r = predict_variance_recursive(o, s, dt, {}, kSize * kSize);
    const auto c = predict_variance_closed(o, s, dt, {}, kSize * kSize);
    clamps += r.clamp_count + c.clamp_count;
    for (std::size_t i = 0; i < r.v_T.size(); ++i) worst = std::max(worst, std::abs(r.v_T[i] - c.v_T[i]));
  }
  return {worst <= 1e-12, fmt::format("max |recursive - closed| = {:.2e}, clamps = {}", worst, clamps)};
}

// Monotonicity with MC tolerance plus the 64 -> 128 plateau, for one
// ensemble generator. Returns the CSV body and whether the checks hold.
std::pair<bool, std::string> monotone_sweep(const std::string& label,
                                            const std::function<EnsembleSet(int)>& make,
                                            std::string& csv) {
  const std::vector<int> grid = {1, 2, 4, 8, 16, 32, 64, 128};
  std::vector<std::vector<double>> per_sample;  // per-sample mu_V for each N
  std::vector<double> mu;
  for (int steps : grid) {
    const VarianceMaps v = pixelwise_variance(make(steps));
    const std::size_t px = static_cast<std::size_t>(v.height) * v.width;
    std::vector<double> sample_means(v.samples, 0.0);
    for (int i = 0; i < v.samples; ++i) {
      for (std::size_t p = 0; p < px; ++p) sample_means[i] += v.values[i * px + p] / px;
    }
    per_sample.push_back(sample_means);
    mu.push_back(global_mean_variance(v));
  }
  bool ok = true;
  int violations = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double se = 0.0;
    bool violation = false;
    if (k > 0 && grid[k] <= 32) {
      // Standard error of the paired difference of per-sample means.
      const auto& a = per_sample[k];
      const auto& b = per_sample[k - 1];
      double md = 0.0, sd = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) md += (a[i] - b[i]) / a.size();
      for (std::size_t i = 0; i < a.size(); ++i) sd += std::pow(a[i] - b[i] - md, 2);
      se = std::sqrt(sd / (a.size() - 1) / a.size());
      if (mu[k] < mu[k - 1]) {
        violation = true;
        ++violations;
        if (mu[k - 1] - mu[k] > 3.0 * se) ok = false;
      }
    }
    csv += fmt::format("{},{},{},{},{}\n", label, grid[k], e9(mu[k]), e9(se), violation ? 1 : 0);
  }
  const double plateau = std::abs(mu[7] - mu[6]) / mu[6];
  ok = ok && plateau < 0.05;
  return {ok, fmt::format("{}: mu_V {:.4g} -> {:.4g} over N=1..32, {} dips, 64->128 change {:.2f}%",
                          label, mu[0], mu[5], violations, 100 * plateau)};
}

Outcome criterion5(const Context& ctx) {
  const Schedule s = unit_schedule();
  const GaussianOracle o = profile_oracle(s);
  const std::vector<std::vector<double>> conds(64);
  std::string csv = "denoiser,N_steps,mu_V,se_paired_diff,dip\n";
  const auto [oracle_ok, oracle_detail] = monotone_sweep(
      "oracle",
      [&](int steps) {
        return generate_ensemble_set(o, s, oracle_config(steps, 10, 5, ctx.threads), conds);
      },
      csv);
  const ToyTask task = train_toy();
  const auto [toy_ok, toy_detail] = monotone_sweep(
      "toy", [&](int steps) { return toy_ensemble(task, steps, 10, 5, ctx.threads); }, csv);
  write_text(ctx.dir / "criterion5.csv", csv);

  std::vector<LineSeries> series(2);
  series[0].label = "oracle";
  series[1].label = "toy";
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    auto& dst = cells[0] == "oracle" ? series[0] : series[1];
    dst.x.push_back(std::stod(cells[1]));
    dst.y.push_back(std::stod(cells[2]));
  }
  // The toy model outputs physical units; show both curves relative to N = 128.
  for (auto& sr : series) {
    const double last = sr.y.back();
    for (auto& y : sr.y) y /= last;
  }
  write_text(ctx.dir / "criterion5.svg",
             line_plot_svg(series, "Global mean variance vs steps", "N (steps)",
                           "mu_V / mu_V(N=128)", true));
  return {oracle_ok && toy_ok, oracle_detail + "; " + toy_detail};
}

Outcome criterion6(const Context&) {
  Rng rng = make_stream(606);
  std::uniform_real_distribution<double> a_dist(-10.0, 10.0);
  std::uniform_int_distribution<int> count_dist(2, 20);
  double worst_p1 = 0.0;
  double worst_identity = 0.0;
  int p2_outside = 0;
  int p2_total = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = count_dist(rng);
    const int dim = 8;
    const double a = a_dist(rng);
    std::vector<std::vector<double>> xs, scaled;
    for (int k = 0; k < m; ++k) {
      auto v = normal_vector(rng, dim);
      for (auto& x : v) x *= 1.0 + trial % 5;
      xs.push_back(v);
      for (auto& x : v) x *= a;
      scaled.push_back(v);
    }
    const auto v = elementwise_variance(xs);
    const auto va = elementwise_variance(scaled);
    for (int i = 0; i < dim; ++i) {
      worst_p1 = std::max(worst_p1, std::abs(va[i] - a * a * v[i]) / std::max(1.0, a * a * v[i]));
    }

    // P2 on independent draws: the identity with the sample covariance is
    // exact, and the covariance term itself is MC noise around zero.
    const int n = 500;
    const double sx = 0.5 + trial % 3, sy = 1.5 - 0.25 * (trial % 4);
    std::vector<std::vector<double>> X, Y, Z;
    for (int k = 0; k < n; ++k) {
      auto x = normal_vector(rng, dim);
      auto y = normal_vector(rng, dim);
      std::vector<double> z(dim);
      for (int i = 0; i < dim; ++i) {
        x[i] *= sx;
        y[i] *= sy;
        z[i] = x[i] + y[i];
      }
      X.push_back(x);
      Y.push_back(y);
      Z.push_back(z);
    }
    const auto vx = elementwise_variance(X);
    const auto vy = elementwise_variance(Y);
    const auto vz = elementwise_variance(Z);
    const auto cov = elementwise_covariance(X, Y);
    for (int i = 0; i < dim; ++i) {
      worst_identity = std::max(worst_identity, std::abs(vz[i] - (vx[i] + vy[i] + 2 * cov[i])));
      const double se = 2.0 * std::sqrt(vx[i] * vy[i] / n);
      if (std::abs(vz[i] - vx[i] - vy[i]) > 3.0 * se) ++p2_outside;
      ++p2_total;
    }
  }
  const double frac = static_cast<double>(p2_outside) / p2_total;
  const bool pass = worst_p1 <= 1e-10 && worst_identity <= 1e-10 && frac <= 0.01;
  return {pass, fmt::format("P1 max rel err {:.2e}; P2 identity max err {:.2e}; "
                            "{:.2f}% of independent coordinates beyond 3 SE",
                            worst_p1, worst_identity, 100 * frac)};
}

Outcome criterion7(const Context&) {
  const int S = 8, M = 10, H = kSize, W = kSize;
  EnsembleSet e(S, M, H, W);
  Rng rng = make_stream(707);
  std::normal_distribution<float> nd;
  for (auto& v : e.values) v = nd(rng);
  for (int i = 0; i < S; ++i) e.seasons.push_back(kSeasons[i % 4]);
  EnsembleSet r = e;
  for (auto& v : r.values) v *= 1.0f + 0.3f * nd(rng);

  double worst = 0.0;
  const VarianceMaps v = pixelwise_variance(e);
  const VarianceMaps vr = pixelwise_variance(r);
  std::vector<double> brute(static_cast<std::size_t>(S) * H * W);
  double total = 0.0;
  for (int i = 0; i < S; ++i) {
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        double mean = 0.0;
        for (int j = 0; j < M; ++j) mean += e.at(i, j, y, x);
        mean /= M;
        double acc = 0.0;
        for (int j = 0; j < M; ++j) acc += (e.at(i, j, y, x) - mean) * (e.at(i, j, y, x) - mean);
        const double b = acc / M;
        brute[(static_cast<std::size_t>(i) * H + y) * W + x] = b;
        total += b;
        worst = std::max(worst, std::abs(v.map(i)(y, x) - b));
      }
    }
  }
  worst = std::max(worst, std::abs(global_mean_variance(v) - total / brute.size()));
  for (Season k : kSeasons) {
    const Grid got = spatial_mean_variance(v, e.seasons, k);
    const Grid got_r = spatial_mean_variance(vr, e.seasons, k);
    double acc_mvd = 0.0;
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        double acc = 0.0;
        int cnt = 0;
        for (int i = 0; i < S; ++i) {
          if (e.seasons[i] != k) continue;
          acc += brute[(static_cast<std::size_t>(i) * H + y) * W + x];
          ++cnt;
        }
        worst = std::max(worst, std::abs(got(y, x) - acc / cnt));
        acc_mvd += std::abs(got(y, x) - got_r(y, x));
      }
    }
    worst = std::max(worst, std::abs(mvd(got, got_r) - acc_mvd / (H * W)));
  }

  bool axioms = true;
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    Grid a(H, W), b(H, W), c(H, W);
    for (auto* g : {&a, &b, &c}) {
      for (auto& x : g->data()) x = u(rng);
    }
    axioms = axioms && mvd(a, b) == mvd(b, a) && mvd(a, a) == 0.0 && mvd(a, b) > 0.0 &&
             mvd(a, c) <= mvd(a, b) + mvd(b, c) + 1e-15;
  }
  return {worst <= 1e-12 && axioms,
          fmt::format("max deviation from loop oracles {:.2e}; MVD axioms hold: {}", worst, axioms)};
}

Outcome criterion8(const Context& ctx) {
  const std::vector<int> candidates = {2, 4, 8, 16, 32};
  std::string detail;
  bool pass = true;

  {
    const Schedule s = unit_schedule();
    const GaussianOracle o = profile_oracle(s);
    const std::vector<std::vector<double>> conds(32);
    EnsembleSet ref = generate_ensemble_set(o, s, oracle_config(8, 10, 9, ctx.threads), conds);
    for (int i = 0; i < ref.samples; ++i) ref.seasons.push_back(kSeasons[i % 4]);
    const auto report =
        calibrate_steps(o, s, ref, conds, candidates, oracle_config(2, 10, 9, ctx.threads));
    write_text(ctx.dir / "criterion8_oracle.csv", report.to_csv());
    pass = pass && report.best_global == 8 && report.best_mvd == 8;
    detail += fmt::format("oracle: global {}, mvd {}", report.best_global, report.best_mvd);
  }
  {
    const ToyTask task = train_toy();
    const EnsembleSet ref = toy_ensemble(task, 8, 10, 9, ctx.threads);
    const auto conds =
        make_conditions(task.test, task.net.normalization(), task.net.schedule().lambda());
    const auto report = calibrate_steps(task.net, task.net.schedule(), ref, conds, candidates,
                                        sampler_for(task.net, 2, 10, 9, ctx.threads));
    write_text(ctx.dir / "criterion8_toy.csv", report.to_csv());
    pass = pass && report.best_global == 8 && report.best_mvd == 8;
    detail += fmt::format("; toy: global {}, mvd {}", report.best_global, report.best_mvd);
  }
  return {pass, detail};
}

Outcome criterion9(const Context& ctx) {
  const ToyTask task = train_toy();
  const Standardizer& norm = task.net.normalization().target;
  std::vector<Grid> truth, bil;
  for (std::size_t i = 0; i < task.test.size(); ++i) {
    truth.push_back(norm.apply(task.test.hi[i]));
    bil.push_back(norm.apply(bilinear_resize(task.test.lo[i], kSize, kSize)));
  }
  const double range = data_range(truth);
  double bm = 0.0, bs = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    bm += mse(bil[i], truth[i]) / truth.size();
    bs += ssim(bil[i], truth[i], range) / truth.size();
  }
  const auto [dm, ds] = mean_skill(task, toy_ensemble(task, 8, 10, 11, ctx.threads));
  write_text(ctx.dir / "criterion9.csv",
             fmt::format("method,MSE,SSIM\nbilinear,{},{}\nddim_ensemble_mean,{},{}\n", e9(bm),
                         e9(bs), e9(dm), e9(ds)));
  return {dm < bm && ds > bs, fmt::format("ensemble mean MSE {:.4f} vs bilinear {:.4f}; "
                                          "SSIM {:.4f} vs {:.4f}", dm, bm, ds, bs)};
}

Outcome criterion10(const Context& ctx) {
  const ToyTask task = train_toy();
  std::string csv = "N_steps,MSE,SSIM\n";
  double lo = 1e300, hi = 0.0;
  for (int steps : {2, 4, 8, 16}) {
    const auto [m, q] = mean_skill(task, toy_ensemble(task, steps, 10, 11, ctx.threads));
    lo = std::min(lo, m);
    hi = std::max(hi, m);
    csv += fmt::format("{},{},{}\n", steps, e9(m), e9(q));
  }
  write_text(ctx.dir / "criterion10.csv", csv);
  const double spread = (hi - lo) / lo;
  return {spread < 0.10, fmt::format("MSE range [{:.4f}, {:.4f}], relative spread {:.1f}%", lo, hi,
                                     100 * spread)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome criterion11(const Context& ctx) {
  std::vector<fs::path> dirs;
  for (int rep = 0; rep < 2; ++rep) {
    Context c{ctx.dir / fmt::format("run{}_threads{}", rep, rep == 0 ? 1 : 4), rep == 0 ? 1 : 4};
    fs::create_directories(c.dir);
    criterion3(c);
    criterion5(c);
    criterion8(c);
    dirs.push_back(c.dir);
  }
  bool same = true;
  std::string detail;
  for (const char* f : {"criterion3.csv", "criterion5.csv", "criterion8_oracle.csv",
                        "criterion8_toy.csv"}) {
    const std::string a = slurp(dirs[0] / f);
    const bool eq = !a.empty() && a == slurp(dirs[1] / f);
    same = same && eq;
    detail += fmt::format("{} {}; ", f, eq ? "identical" : "DIFFERS");
  }
  return {same, detail + "threads 1 vs 4"};
}

struct Criterion {
  std::function<Outcome(const Context&)> run;
  double budget_seconds;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int which = 0;
  Context ctx;
  std::string workdir = "acceptance_artifacts";
  app.add_option("criterion", which, "Criterion number (1-11)")->required()->check(CLI::Range(1, 11));
  app.add_option("--workdir", workdir, "Directory for CSV artifacts")->capture_default_str();
  app.add_option("--threads", ctx.threads, "Worker threads")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> table = {
      {criterion1, 1},   {criterion2, 1},   {criterion3, 300}, {criterion4, 10},
      {criterion5, 900}, {criterion6, 10},  {criterion7, 10},  {criterion8, 600},
      {criterion9, 1200}, {criterion10, 600}, {criterion11, 1800},
  };
  ctx.dir = fs::path(workdir) / fmt::format("criterion{}", which);
  fs::create_directories(ctx.dir);

  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = table[which - 1].run(ctx);
  } catch (const std::exception& e) {
    out = {false, fmt::format("exception: {}", e.what())};
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double budget = table[which - 1].budget_seconds;
  const bool in_time = elapsed <= budget;
  const bool pass = out.pass && in_time;
  std::cout << fmt::format("criterion {:2d}: {} | {} | {:.2f}s (budget {:.0f}s{})\n", which,
                           pass ? "PASS" : "FAIL", out.detail, elapsed, budget,
                           in_time ? "" : ", exceeded");
  return pass ? 0 : 1;
}
