#include "vardiff/cli.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vardiff/calibrate.hpp"
#include "vardiff/config.hpp"
#include "vardiff/errors.hpp"
#include "vardiff/grd_io.hpp"
#include "vardiff/pipeline.hpp"
#include "vardiff/plot.hpp"
#include "vardiff/sampler.hpp"
#include "vardiff/synthdata.hpp"
#include "vardiff/toy_net.hpp"
#include "vardiff/train.hpp"
#include "vardiff/variance_theory.hpp"

namespace vardiff {

namespace fs = std::filesystem;

namespace {

std::string opt_field(const std::optional<double>& v) {
  return v ? fmt::format("{:.9e}", *v) : std::string();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Schedule flags shared by the oracle paths and training.
struct ScheduleFlags {
  int T = 256;
  double sr_min = 0.02;
  double sr_max = 0.995;
  double lambda = 3.0;

  void add(CLI::App* app, bool with_lambda) {
    app->add_option("--T", T, "Total time subdivisions")->capture_default_str();
    app->add_option("--sr-min", sr_min, "Signal-rate clamp at the noise end")->capture_default_str();
    app->add_option("--sr-max", sr_max, "Signal-rate clamp at the data end")->capture_default_str();
    if (with_lambda) {
      app->add_option("--lambda", lambda, "Signal scaling factor")->capture_default_str();
    }
  }
  Schedule make(double lambda_override) const {
    return make_schedule(T, sr_min, sr_max, lambda_override);
  }
};

// Exact denoiser for the diagonal-profile synthetic field.
std::unique_ptr<GaussianOracle> make_oracle(int size, const Schedule& s) {
  const FieldSpec spec = diagonal_profile_spec(size, size);
  return std::make_unique<GaussianOracle>(spec.mean.data(), spec.variance.data(), s);
}

SamplerConfig oracle_sampler(int size, int steps, int members, std::uint64_t seed, int threads,
                             const Schedule& s) {
  SamplerConfig cfg;
  cfg.delta_t = delta_t_for_steps(s.T(), steps);
  cfg.members = members;
  cfg.base_seed = seed;
  cfg.threads = threads;
  cfg.height = size;
  cfg.width = size;
  return cfg;
}

// --- gen-data ------------------------------------------------------------

struct GenDataOptions {
  std::string out;
  int size = 16;
  int coarse_factor = 4;
  int samples = 64;
  std::uint64_t seed = 0;
  std::string kind = "smoothed";
  double length_scale = 3.0;
};

int cmd_gen_data(const GenDataOptions& o, std::ostream& out) {
  FieldSpec spec = parse_covariance_kind(o.kind) == CovarianceKind::DiagonalProfile
                       ? diagonal_profile_spec(o.size, o.size)
                       : default_field_spec(o.size, o.size);
  spec.kind = parse_covariance_kind(o.kind);
  if (spec.kind != CovarianceKind::DiagonalProfile) spec.length_scale = o.length_scale;
  const PairedDataset data = make_dataset(spec, o.samples, o.coarse_factor, o.seed);
  save_dataset(o.out, data);
  write_text(fs::path(o.out) / "spec.txt",
             fmt::format("size = {}\ncoarse_factor = {}\nsamples = {}\nseed = {}\nkind = {}\n"
                         "length_scale = {}\n",
                         o.size, o.coarse_factor, o.samples, o.seed,
                         covariance_kind_name(spec.kind), spec.length_scale));
  out << fmt::format("wrote {} samples ({}x{} hi, {}x{} lo) to {}\n", data.size(), o.size, o.size,
                     o.size / o.coarse_factor, o.size / o.coarse_factor, o.out);
  return 0;
}

// --- train ---------------------------------------------------------------

struct TrainOptions {
  std::string data;
  std::string out;
  std::string config;
  ScheduleFlags schedule;
  ToyNetConfig net;
  TrainConfig train;
};

int cmd_train(TrainOptions o, const CLI::App& sub, std::ostream& out) {
  if (!o.config.empty()) {
    // Flags given explicitly on the command line win over the config file.
    const ExperimentConfig cfg = load_config(o.config);
    auto unset = [&](const char* flag) { return sub.count(flag) == 0; };
    if (unset("--T")) o.schedule.T = cfg.schedule.T;
    if (unset("--sr-min")) o.schedule.sr_min = cfg.schedule.sr_min;
    if (unset("--sr-max")) o.schedule.sr_max = cfg.schedule.sr_max;
    if (unset("--lambda")) o.schedule.lambda = cfg.schedule.lambda;
    if (unset("--hidden")) o.net.hidden = cfg.net.hidden;
    if (unset("--blocks")) o.net.blocks = cfg.net.blocks;
    if (unset("--freqs")) o.net.freqs = cfg.net.freqs;
    if (unset("--epochs")) o.train.epochs = cfg.train.epochs;
    if (unset("--batch")) o.train.batch = cfg.train.batch;
    if (unset("--lr")) o.train.learning_rate = cfg.train.learning_rate;
    if (unset("--weight-decay")) o.train.weight_decay = cfg.train.weight_decay;
    if (unset("--seed")) o.train.seed = cfg.train.seed;
  }
  const PairedDataset data = load_dataset(o.data);
  o.net.height = data.hi.front().height();
  o.net.width = data.hi.front().width();
  const Schedule s = o.schedule.make(o.schedule.lambda);
  ToyDenoiser net(o.net, s, o.train.seed);
  const ModelNormalization norm = fit_normalization(data);
  net.set_normalization(norm);
  const TrainResult result = train(net, make_training_set(data, norm), o.train);
  net.save(o.out);
  std::string curve = "epoch,mae\n";
  for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
    curve += fmt::format("{},{:.9e}\n", e + 1, result.epoch_loss[e]);
  }
  write_text(o.out + ".loss.csv", curve);
  out << fmt::format("trained {} ({} parameters), final epoch MAE {:.5f}\n", net.id(),
                     net.parameter_count(), result.epoch_loss.back());
  return 0;
}

}  // namespace

StatsRow compute_stats(const EnsembleSet& ensemble, int steps,
                       const std::optional<EnsembleSet>& reference,
                       const std::optional<std::vector<Grid>>& truth, const Standardizer& norm) {
  StatsRow row;
  row.steps = steps;
  const VarianceMaps v = pixelwise_variance(ensemble);
  row.mu_v = global_mean_variance(v);
  if (reference) {
    if (reference->samples != ensemble.samples || reference->height != ensemble.height ||
        reference->width != ensemble.width) {
      throw ShapeError("stats: reference ensemble shape differs from the evaluated ensemble");
    }
    const VarianceMaps rv = pixelwise_variance(*reference);
    row.mvd_yearly = mvd(spatial_mean_variance(v), spatial_mean_variance(rv));
    auto covered = [&](Season k) {
      return std::find(ensemble.seasons.begin(), ensemble.seasons.end(), k) !=
             ensemble.seasons.end();
    };
    if (ensemble.seasons.size() == static_cast<std::size_t>(ensemble.samples) &&
        std::all_of(kSeasons.begin(), kSeasons.end(), covered)) {
      std::array<double, 4> per{};
      for (Season k : kSeasons) {
        per[static_cast<int>(k)] = mvd(spatial_mean_variance(v, ensemble.seasons, k),
                                       spatial_mean_variance(rv, ensemble.seasons, k));
      }
      row.mvd_season = per;
    }
  }
  if (truth) {
    if (truth->size() != static_cast<std::size_t>(ensemble.samples)) {
      throw ShapeError(fmt::format("stats: {} truth fields for {} ensemble samples",
                                   truth->size(), ensemble.samples));
    }
    std::vector<Grid> truth_std;
    for (const auto& g : *truth) truth_std.push_back(norm.apply(g));
    const double range = data_range(truth_std);
    double err = 0.0;
    double sim = 0.0;
    for (int i = 0; i < ensemble.samples; ++i) {
      const Grid mean = norm.apply(ensemble.member_mean(i));
      err += mse(mean, truth_std[i]);
      sim += ssim(mean, truth_std[i], range);
    }
    row.mse = err / ensemble.samples;
    row.ssim = sim / ensemble.samples;
  }
  return row;
}

std::string stats_csv_header() {
  return "N_steps,mu_V,MVD_yearly,MVD_JFM,MVD_AMJ,MVD_JAS,MVD_OND,MSE,SSIM\n";
}

std::string stats_csv_row(const StatsRow& r) {
  std::string out = fmt::format("{},{:.9e},{}", r.steps, r.mu_v, opt_field(r.mvd_yearly));
  for (int k = 0; k < 4; ++k) {
    out += ",";
    if (r.mvd_season) out += fmt::format("{:.9e}", (*r.mvd_season)[k]);
  }
  out += fmt::format(",{},{}\n", opt_field(r.mse), opt_field(r.ssim));
  return out;
}

namespace {

// --- sample --------------------------------------------------------------

struct SampleOptions {
  std::string model;
  bool oracle = false;
  int size = 16;
  int samples = 1;
  ScheduleFlags schedule;
  std::string data;
  int steps = 0;
  int delta_t = 0;
  int members = 10;
  std::uint64_t seed = 0;
  std::string out;
  std::string stats;
};

int resolve_steps(int T, int steps, int delta_t) {
  if (delta_t > 0) {
    time_grid(T, delta_t);
    return T / delta_t;
  }
  delta_t_for_steps(T, steps);
  return steps;
}

int cmd_sample(const SampleOptions& o, int threads, std::ostream& out) {
  EnsembleSet ens;
  std::optional<std::vector<Grid>> truth;
  Standardizer norm;
  int steps = 0;
  if (o.oracle) {
    const Schedule s = o.schedule.make(1.0);
    steps = resolve_steps(s.T(), o.steps, o.delta_t);
    const auto oracle = make_oracle(o.size, s);
    const SamplerConfig cfg = oracle_sampler(o.size, steps, o.members, o.seed, threads, s);
    const std::vector<std::vector<double>> conds(static_cast<std::size_t>(o.samples));
    ens = generate_ensemble_set(*oracle, s, cfg, conds);
    for (int i = 0; i < o.samples; ++i) ens.seasons.push_back(kSeasons[i % 4]);
  } else {
    if (o.model.empty() || o.data.empty()) {
      throw ParameterError("sample: --model and --data are required unless --oracle is given");
    }
    const ToyDenoiser net = ToyDenoiser::load(o.model);
    steps = resolve_steps(net.schedule().T(), o.steps, o.delta_t);
    const PairedDataset data = load_dataset(o.data);
    const SamplerConfig cfg = sampler_for(net, steps, o.members, o.seed, threads);
    ens = generate_ensemble_set(net, net.schedule(), cfg,
                                make_conditions(data, net.normalization(), net.schedule().lambda()));
    ens.seasons = data.seasons;
    truth = data.hi;
    norm = net.normalization().target;
  }
  write_grd(o.out, to_tensor(ens));
  if (!o.stats.empty()) {
    const StatsRow row = compute_stats(ens, steps, std::nullopt, truth, norm);
    write_text(o.stats, stats_csv_header() + stats_csv_row(row));
  }
  out << fmt::format("wrote ensemble {}x{}x{}x{} (N = {}) to {}\n", ens.samples, ens.members,
                     ens.height, ens.width, steps, o.out);
  return 0;
}

// --- stats ---------------------------------------------------------------

struct StatsOptions {
  std::string ensemble;
  std::string reference;
  std::string truth;
  std::string seasons;
  std::string model;
  int steps = 0;
  std::string out;
};

int cmd_stats(const StatsOptions& o, std::ostream& out) {
  EnsembleSet ens = tensor_to_ensemble(read_grd(o.ensemble));
  if (!o.seasons.empty()) {
    ens.seasons = read_seasons_csv(o.seasons);
    if (ens.seasons.size() != static_cast<std::size_t>(ens.samples)) {
      throw FormatError(fmt::format("stats: {} season labels for {} samples", ens.seasons.size(),
                                    ens.samples));
    }
  }
  std::optional<EnsembleSet> reference;
  if (!o.reference.empty()) reference = tensor_to_ensemble(read_grd(o.reference));
  std::optional<std::vector<Grid>> truth;
  Standardizer norm;
  if (!o.truth.empty()) {
    truth = tensor_to_grids(read_grd(o.truth));
    norm = o.model.empty() ? fit_standardizer(*truth)
                           : ToyDenoiser::load(o.model).normalization().target;
  }
  const StatsRow row = compute_stats(ens, o.steps, reference, truth, norm);
  const std::string csv = stats_csv_header() + stats_csv_row(row);
  if (o.out.empty()) {
    out << csv;
  } else {
    write_text(o.out, csv);
    out << fmt::format("mu_V = {:.6e}\n", row.mu_v);
  }
  return 0;
}

// --- predict-var ---------------------------------------------------------

struct PredictVarOptions {
  std::string model;
  bool oracle = false;
  int size = 16;
  ScheduleFlags schedule;
  std::string data;
  int sample_index = 0;
  int steps = 8;
  std::string method = "closed";
  double fd_step = 1e-3;
  std::string out;
  std::string csv;
};

int cmd_predict_var(const PredictVarOptions& o, std::ostream& out) {
  if (o.method != "closed" && o.method != "recursive") {
    throw ParameterError(fmt::format("predict-var: unknown method '{}'", o.method));
  }
  std::unique_ptr<Denoiser> d;
  std::optional<Schedule> s;
  std::vector<double> cond;
  std::size_t dim = 0;
  int h = 0;
  int w = 0;
  double lambda = 1.0;
  Standardizer out_norm;
  if (o.oracle) {
    s = o.schedule.make(1.0);
    d = make_oracle(o.size, *s);
    h = w = o.size;
  } else {
    if (o.model.empty() || o.data.empty()) {
      throw ParameterError("predict-var: --model and --data are required unless --oracle is given");
    }
    auto net = std::make_unique<ToyDenoiser>(ToyDenoiser::load(o.model));
    s = net->schedule();
    const PairedDataset data = load_dataset(o.data);
    if (o.sample_index < 0 || static_cast<std::size_t>(o.sample_index) >= data.size()) {
      throw ParameterError(fmt::format("predict-var: sample index {} outside dataset of {}",
                                       o.sample_index, data.size()));
    }
    h = net->config().height;
    w = net->config().width;
    cond = prepare_condition(data.lo[o.sample_index], net->normalization().cond, h, w,
                             s->lambda());
    lambda = s->lambda();
    out_norm = net->normalization().target;
    d = std::move(net);
  }
  dim = static_cast<std::size_t>(h) * w;
  const int dt = delta_t_for_steps(s->T(), o.steps);
  const JacobianOptions jopt{o.fd_step};
  const VariancePrediction p = o.method == "closed"
                                   ? predict_variance_closed(*d, *s, dt, cond, dim, jopt)
                                   : predict_variance_recursive(*d, *s, dt, cond, dim, jopt);
  // Variance of the sampler output: x * lambda, then * std when destandardizing.
  const double scale = lambda * lambda * out_norm.std * out_norm.std;
  Grid map(h, w);
  for (std::size_t i = 0; i < dim; ++i) map.data()[i] = p.v_T[i] * scale;
  if (!o.out.empty()) write_grd(o.out, to_tensor(map));
  double mean = 0.0;
  for (double v : map.values()) mean += v;
  mean /= static_cast<double>(dim);
  const std::string csv = fmt::format("N_steps,delta_t,mean_v_T,clamp_count\n{},{},{:.9e},{}\n",
                                      o.steps, dt, mean, p.clamp_count);
  if (o.csv.empty()) {
    out << csv;
  } else {
    write_text(o.csv, csv);
  }
  return 0;
}

// --- calibrate -----------------------------------------------------------

struct CalibrateOptions {
  std::string model;
  bool oracle = false;
  int size = 16;
  ScheduleFlags schedule;
  std::string data;
  std::string reference;
  std::string seasons;
  std::vector<int> candidates = {2, 4, 8, 16, 32};
  std::string criterion = "mvd";
  int members = 10;
  std::uint64_t seed = 0;
  std::string out;
  std::string svg;
  bool with_runtime = false;
};

int cmd_calibrate(const CalibrateOptions& o, int threads, std::ostream& out) {
  const CalibrationCriterion criterion = parse_criterion(o.criterion);
  EnsembleSet reference = tensor_to_ensemble(read_grd(o.reference));
  std::unique_ptr<Denoiser> d;
  std::optional<Schedule> s;
  std::vector<std::vector<double>> conds;
  SamplerConfig cfg;
  if (o.oracle) {
    s = o.schedule.make(1.0);
    for (int n : o.candidates) delta_t_for_steps(s->T(), n);
    d = make_oracle(o.size, *s);
    cfg = oracle_sampler(o.size, o.candidates.front(), o.members, o.seed, threads, *s);
    conds.resize(static_cast<std::size_t>(reference.samples));
    if (o.seasons.empty()) {
      for (int i = 0; i < reference.samples; ++i) reference.seasons.push_back(kSeasons[i % 4]);
    }
  } else {
    if (o.model.empty() || o.data.empty()) {
      throw ParameterError("calibrate: --model and --data are required unless --oracle is given");
    }
    auto net = std::make_unique<ToyDenoiser>(ToyDenoiser::load(o.model));
    s = net->schedule();
    for (int n : o.candidates) delta_t_for_steps(s->T(), n);
    const PairedDataset data = load_dataset(o.data);
    conds = make_conditions(data, net->normalization(), s->lambda());
    cfg = sampler_for(*net, o.candidates.front(), o.members, o.seed, threads);
    reference.seasons = data.seasons;
    d = std::move(net);
  }
  if (!o.seasons.empty()) reference.seasons = read_seasons_csv(o.seasons);
  const CalibrationReport report = calibrate_steps(*d, *s, reference, conds, o.candidates, cfg);
  write_text(o.out, report.to_csv(o.with_runtime));
  if (!o.svg.empty()) {
    LineSeries gen{"ensemble mu_V", {}, {}};
    LineSeries ref{"reference mu_V", {}, {}};
    for (const auto& r : report.rows) {
      gen.x.push_back(r.steps);
      gen.y.push_back(r.mu_v);
      ref.x.push_back(r.steps);
      ref.y.push_back(report.reference_mu_v);
    }
    write_text(o.svg, line_plot_svg({gen, ref}, "Global mean variance vs steps", "N (steps)",
                                    "mu_V", true));
  }
  out << fmt::format("best N: {} (criterion {}); global {}, mvd {}\n", report.best(criterion),
                     o.criterion, report.best_global, report.best_mvd);
  return 0;
}

// --- eval ----------------------------------------------------------------

struct EvalOptions {
  std::string model;
  std::string data;
  std::string train_data;
  int steps = 2;
  int members = 10;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_eval(const EvalOptions& o, int threads, std::ostream& out) {
  const ToyDenoiser net = ToyDenoiser::load(o.model);
  const PairedDataset data = load_dataset(o.data);
  const Standardizer& norm = net.normalization().target;
  const int h = net.config().height;
  const int w = net.config().width;

  std::vector<Grid> truth;
  for (const auto& g : data.hi) truth.push_back(norm.apply(g));
  const double range = data_range(truth);
  auto score = [&](const std::vector<Grid>& pred) {
    double e = 0.0, q = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      e += mse(pred[i], truth[i]);
      q += ssim(pred[i], truth[i], range);
    }
    return std::pair{e / pred.size(), q / pred.size()};
  };

  std::string csv = "method,N_steps,MSE,SSIM\n";
  std::vector<Grid> bilinear;
  for (const auto& lo : data.lo) bilinear.push_back(norm.apply(bilinear_resize(lo, h, w)));
  const auto [bm, bs] = score(bilinear);
  csv += fmt::format("bilinear,,{:.9e},{:.9e}\n", bm, bs);

  if (!o.train_data.empty()) {
    const LinearBaseline baseline = LinearBaseline::fit(load_dataset(o.train_data));
    std::vector<Grid> reg;
    for (const auto& lo : data.lo) reg.push_back(norm.apply(baseline.predict(lo)));
    const auto [rm, rs] = score(reg);
    csv += fmt::format("linear_regression,,{:.9e},{:.9e}\n", rm, rs);
  }

  const SamplerConfig cfg = sampler_for(net, o.steps, o.members, o.seed, threads);
  const EnsembleSet ens = generate_ensemble_set(
      net, net.schedule(), cfg, make_conditions(data, net.normalization(), net.schedule().lambda()));
  std::vector<Grid> means;
  for (int i = 0; i < ens.samples; ++i) means.push_back(norm.apply(ens.member_mean(i)));
  const auto [dm, ds] = score(means);
  csv += fmt::format("ddim_ensemble_mean,{},{:.9e},{:.9e}\n", o.steps, dm, ds);

  if (o.out.empty()) {
    out << csv;
  } else {
    write_text(o.out, csv);
    out << csv;
  }
  return 0;
}

// --- plot ----------------------------------------------------------------

struct PlotOptions {
  std::string csv;
  std::string x = "N_steps";
  std::vector<std::string> y = {"mu_V"};
  std::string grd;
  int index = 0;
  std::string title;
  bool log_x = false;
  std::string out;
};

int cmd_plot(const PlotOptions& o, std::ostream& out) {
  if (o.csv.empty() == o.grd.empty()) {
    throw ParameterError("plot: give exactly one of --csv or --grd");
  }
  if (!o.grd.empty()) {
    const GrdTensor t = read_grd(o.grd);
    Grid g;
    if (t.dims.size() == 2) {
      g = tensor_to_grid(t);
    } else if (t.dims.size() == 3) {
      const auto grids = tensor_to_grids(t);
      if (o.index < 0 || static_cast<std::size_t>(o.index) >= grids.size()) {
        throw ParameterError(fmt::format("plot: index {} outside {} maps", o.index, grids.size()));
      }
      g = grids[o.index];
    } else {
      throw ParameterError("plot: heatmaps need a rank-2 or rank-3 GRD1 file");
    }
    write_text(o.out, heatmap_svg(g, o.title.empty() ? o.grd : o.title));
  } else {
    std::ifstream in(o.csv);
    if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", o.csv));
    std::string line;
    std::getline(in, line);
    const auto header = split_csv_line(line);
    auto column = [&](const std::string& name) {
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
      }
      throw ParameterError(fmt::format("plot: column '{}' not in {}", name, o.csv));
    };
    const std::size_t xc = column(o.x);
    std::vector<LineSeries> series;
    std::vector<std::size_t> ycols;
    for (const auto& name : o.y) {
      ycols.push_back(column(name));
      series.push_back({name, {}, {}});
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto cells = split_csv_line(line);
      for (std::size_t k = 0; k < ycols.size(); ++k) {
        if (cells.at(ycols[k]).empty()) continue;
        series[k].x.push_back(std::stod(cells.at(xc)));
        series[k].y.push_back(std::stod(cells.at(ycols[k])));
      }
    }
    write_text(o.out, line_plot_svg(series, o.title.empty() ? o.csv : o.title, o.x,
                                    o.y.size() == 1 ? o.y.front() : "value", o.log_x));
  }
  out << fmt::format("wrote {}\n", o.out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Step-count-controlled DDIM ensembles and their variance"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "Worker cap; results do not depend on it")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  GenDataOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate a synthetic paired dataset");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--size", gen.size, "High-resolution side length")->capture_default_str();
  gen_cmd->add_option("--coarse-factor", gen.coarse_factor, "Coarsening factor")->capture_default_str();
  gen_cmd->add_option("--samples", gen.samples, "Number of samples")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--kind", gen.kind, "white | diagonal | smoothed")->capture_default_str();
  gen_cmd->add_option("--length-scale", gen.length_scale, "Smoothing length in pixels")
      ->capture_default_str();

  TrainOptions tr;
  auto* train_cmd = app.add_subcommand("train", "Train the toy denoiser");
  train_cmd->add_option("--data", tr.data, "Dataset directory")->required();
  train_cmd->add_option("--out", tr.out, "Checkpoint path")->required();
  train_cmd->add_option("--config", tr.config, "Experiment config (key = value)");
  tr.schedule.add(train_cmd, true);
  train_cmd->add_option("--hidden", tr.net.hidden, "Hidden width")->capture_default_str();
  train_cmd->add_option("--blocks", tr.net.blocks, "Residual blocks")->capture_default_str();
  train_cmd->add_option("--freqs", tr.net.freqs, "Time-embedding frequencies")->capture_default_str();
  train_cmd->add_option("--epochs", tr.train.epochs, "Epochs")->capture_default_str();
  train_cmd->add_option("--batch", tr.train.batch, "Batch size")->capture_default_str();
  train_cmd->add_option("--lr", tr.train.learning_rate, "Learning rate")->capture_default_str();
  train_cmd->add_option("--weight-decay", tr.train.weight_decay, "Decoupled weight decay")
      ->capture_default_str();
  train_cmd->add_option("--seed", tr.train.seed, "Random seed")->capture_default_str();

  SampleOptions so;
  auto* sample_cmd = app.add_subcommand("sample", "Generate an ensemble");
  sample_cmd->add_option("--model", so.model, "Checkpoint path");
  sample_cmd->add_flag("--oracle", so.oracle, "Use the exact Gaussian denoiser (lambda = 1)");
  sample_cmd->add_option("--size", so.size, "Oracle field side length")->capture_default_str();
  sample_cmd->add_option("--samples", so.samples, "Oracle sample count")->capture_default_str();
  so.schedule.add(sample_cmd, false);
  sample_cmd->add_option("--data", so.data, "Dataset directory (conditioning)");
  auto* steps_opt = sample_cmd->add_option("--steps", so.steps, "Number of reverse steps N");
  sample_cmd->add_option("--delta-t", so.delta_t, "Step size (alternative to --steps)")
      ->excludes(steps_opt);
  sample_cmd->add_option("--members", so.members, "Ensemble members")->capture_default_str();
  sample_cmd->add_option("--seed", so.seed, "Base seed")->capture_default_str();
  sample_cmd->add_option("--out", so.out, "Ensemble GRD1 output")->required();
  sample_cmd->add_option("--stats", so.stats, "Also write stats.csv for the ensemble");

  StatsOptions st;
  auto* stats_cmd = app.add_subcommand("stats", "Ensemble variance and skill statistics");
  stats_cmd->add_option("--ensemble", st.ensemble, "Ensemble GRD1 (S x M x h x w)")->required();
  stats_cmd->add_option("--reference", st.reference, "Reference ensemble for MVD");
  stats_cmd->add_option("--truth", st.truth, "Truth fields (S x h x w) for MSE/SSIM");
  stats_cmd->add_option("--seasons", st.seasons, "seasons.csv for seasonal MVD");
  stats_cmd->add_option("--model", st.model, "Checkpoint whose standardizer is used for MSE/SSIM");
  stats_cmd->add_option("--steps", st.steps, "Value of the N_steps column")->capture_default_str();
  stats_cmd->add_option("--out", st.out, "stats.csv path (stdout when omitted)");

  PredictVarOptions pv;
  auto* pv_cmd = app.add_subcommand("predict-var", "Closed-form ensemble variance prediction");
  pv_cmd->add_option("--model", pv.model, "Checkpoint path");
  pv_cmd->add_flag("--oracle", pv.oracle, "Use the exact Gaussian denoiser (lambda = 1)");
  pv_cmd->add_option("--size", pv.size, "Oracle field side length")->capture_default_str();
  pv.schedule.add(pv_cmd, false);
  pv_cmd->add_option("--data", pv.data, "Dataset directory (conditioning)");
  pv_cmd->add_option("--sample-index", pv.sample_index, "Conditioning sample")->capture_default_str();
  pv_cmd->add_option("--steps", pv.steps, "Number of reverse steps N")->capture_default_str();
  pv_cmd->add_option("--method", pv.method, "closed | recursive")->capture_default_str();
  pv_cmd->add_option("--fd-step", pv.fd_step, "Finite-difference step")->capture_default_str();
  pv_cmd->add_option("--out", pv.out, "Variance map GRD1 output");
  pv_cmd->add_option("--csv", pv.csv, "Summary CSV (stdout when omitted)");

  CalibrateOptions cal;
  auto* cal_cmd = app.add_subcommand("calibrate", "Select N against a reference ensemble");
  cal_cmd->add_option("--model", cal.model, "Checkpoint path");
  cal_cmd->add_flag("--oracle", cal.oracle, "Use the exact Gaussian denoiser (lambda = 1)");
  cal_cmd->add_option("--size", cal.size, "Oracle field side length")->capture_default_str();
  cal.schedule.add(cal_cmd, false);
  cal_cmd->add_option("--data", cal.data, "Dataset directory (conditioning)");
  cal_cmd->add_option("--reference", cal.reference, "Reference ensemble GRD1")->required();
  cal_cmd->add_option("--seasons", cal.seasons, "seasons.csv overriding the dataset labels");
  cal_cmd->add_option("--candidates", cal.candidates, "Candidate step counts")
      ->delimiter(',')
      ->capture_default_str();
  cal_cmd->add_option("--criterion", cal.criterion, "global | mvd")->capture_default_str();
  cal_cmd->add_option("--members", cal.members, "Ensemble members")->capture_default_str();
  cal_cmd->add_option("--seed", cal.seed, "Base seed")->capture_default_str();
  cal_cmd->add_option("--out", cal.out, "calibration.csv path")->required();
  cal_cmd->add_option("--svg", cal.svg, "Line plot of mu_V against N");
  cal_cmd->add_flag("--with-runtime", cal.with_runtime,
                    "Add a wall-clock column (makes the CSV non-reproducible)");

  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "Compare ensemble mean with bilinear baselines");
  eval_cmd->add_option("--model", ev.model, "Checkpoint path")->required();
  eval_cmd->add_option("--data", ev.data, "Evaluation dataset directory")->required();
  eval_cmd->add_option("--train-data", ev.train_data, "Training dataset for the regression baseline");
  eval_cmd->add_option("--steps", ev.steps, "Number of reverse steps N")->capture_default_str();
  eval_cmd->add_option("--members", ev.members, "Ensemble members")->capture_default_str();
  eval_cmd->add_option("--seed", ev.seed, "Base seed")->capture_default_str();
  eval_cmd->add_option("--out", ev.out, "eval.csv path");

  PlotOptions pl;
  auto* plot_cmd = app.add_subcommand("plot", "Render a CSV column or GRD1 map as SVG");
  plot_cmd->add_option("--csv", pl.csv, "CSV input");
  plot_cmd->add_option("--x", pl.x, "x column")->capture_default_str();
  plot_cmd->add_option("--y", pl.y, "y column(s)")->delimiter(',');
  plot_cmd->add_option("--grd", pl.grd, "GRD1 map input (rank 2 or 3)");
  plot_cmd->add_option("--index", pl.index, "Map index for rank-3 input")->capture_default_str();
  plot_cmd->add_option("--title", pl.title, "Plot title");
  plot_cmd->add_flag("--log-x", pl.log_x, "Logarithmic x axis");
  plot_cmd->add_option("--out", pl.out, "SVG output")->required();

  std::vector<std::string> argv_store;
  argv_store.emplace_back("vardiff");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*gen_cmd) return cmd_gen_data(gen, out);
    if (*train_cmd) return cmd_train(tr, *train_cmd, out);
    if (*sample_cmd) return cmd_sample(so, threads, out);
    if (*stats_cmd) return cmd_stats(st, out);
    if (*pv_cmd) return cmd_predict_var(pv, out);
    if (*cal_cmd) return cmd_calibrate(cal, threads, out);
    if (*eval_cmd) return cmd_eval(ev, threads, out);
    if (*plot_cmd) return cmd_plot(pl, out);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace vardiff
