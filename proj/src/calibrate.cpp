#include "vardiff/calibrate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "vardiff/errors.hpp"

namespace vardiff {

CalibrationCriterion parse_criterion(std::string_view name) {
  if (name == "global") return CalibrationCriterion::Global;
  if (name == "mvd") return CalibrationCriterion::Mvd;
  throw ParameterError(fmt::format("unknown criterion '{}' (expected global or mvd)", name));
}

namespace {

bool has_all_seasons(std::span<const Season> labels) {
  std::array<bool, 4> seen{};
  for (Season k : labels) seen[static_cast<int>(k)] = true;
  return seen[0] && seen[1] && seen[2] && seen[3];
}

}  // namespace

std::string CalibrationReport::to_csv(bool with_runtime) const {
  std::string out = "N_steps,mu_V,mu_V_ref,MVD_yearly,MVD_JFM,MVD_AMJ,MVD_JAS,MVD_OND,MSE_ref_mean";
  out += with_runtime ? ",runtime_s\n" : "\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{:.9e},{:.9e},{:.9e}", r.steps, r.mu_v, reference_mu_v, r.mvd_yearly);
    for (int k = 0; k < 4; ++k) {
      out += r.mvd_season ? fmt::format(",{:.9e}", (*r.mvd_season)[k]) : std::string(",");
    }
    out += fmt::format(",{:.9e}", r.mse_to_reference_mean);
    out += with_runtime ? fmt::format(",{:.3f}\n", r.runtime_seconds) : "\n";
  }
  return out;
}

CalibrationReport calibrate_steps(const Denoiser& d, const Schedule& s,
                                  const EnsembleSet& reference,
                                  std::span<const std::vector<double>> conds,
                                  std::span<const int> candidates, const SamplerConfig& cfg) {
  if (candidates.empty()) throw ParameterError("calibrate_steps: no candidate step counts");
  for (int n : candidates) delta_t_for_steps(s.T(), n);
  if (reference.members < 2) {
    throw ParameterError("calibrate_steps: reference ensemble needs at least 2 members");
  }
  if (conds.size() != static_cast<std::size_t>(reference.samples)) {
    throw ShapeError(fmt::format("calibrate_steps: {} conditioning fields for {} samples",
                                 conds.size(), reference.samples));
  }

  const VarianceMaps ref_v = pixelwise_variance(reference);
  const Grid ref_yearly = spatial_mean_variance(ref_v);
  const bool seasonal = reference.seasons.size() == static_cast<std::size_t>(reference.samples) &&
                        has_all_seasons(reference.seasons);
  std::array<Grid, 4> ref_season;
  if (seasonal) {
    for (Season k : kSeasons) {
      ref_season[static_cast<int>(k)] = spatial_mean_variance(ref_v, reference.seasons, k);
    }
  }

  CalibrationReport report;
  report.reference_mu_v = global_mean_variance(ref_v);
  for (int n : candidates) {
    const auto start = std::chrono::steady_clock::now();
    SamplerConfig c = cfg;
    c.delta_t = delta_t_for_steps(s.T(), n);
    EnsembleSet gen = generate_ensemble_set(d, s, c, conds);
    if (gen.height != reference.height || gen.width != reference.width) {
      throw ShapeError("calibrate_steps: generated fields do not match the reference shape");
    }
    gen.seasons = reference.seasons;
    const VarianceMaps v = pixelwise_variance(gen);

    CalibrationRow row;
    row.steps = n;
    row.mu_v = global_mean_variance(v);
    row.mvd_yearly = mvd(spatial_mean_variance(v), ref_yearly);
    if (seasonal) {
      std::array<double, 4> per{};
      for (Season k : kSeasons) {
        per[static_cast<int>(k)] =
            mvd(spatial_mean_variance(v, gen.seasons, k), ref_season[static_cast<int>(k)]);
      }
      row.mvd_season = per;
    }
    double err = 0.0;
    for (int i = 0; i < gen.samples; ++i) err += mse(gen.member_mean(i), reference.member_mean(i));
    row.mse_to_reference_mean = err / gen.samples;
    row.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.rows.push_back(row);
  }

  // Strict '<' over candidates sorted ascending keeps the smaller N on ties.
  std::vector<const CalibrationRow*> sorted;
  for (const auto& r : report.rows) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto* a, const auto* b) { return a->steps < b->steps; });
  const CalibrationRow* best_g = sorted.front();
  const CalibrationRow* best_m = sorted.front();
  for (const auto* r : sorted) {
    if (std::abs(r->mu_v - report.reference_mu_v) <
        std::abs(best_g->mu_v - report.reference_mu_v)) {
      best_g = r;
    }
    if (r->mvd_yearly < best_m->mvd_yearly) best_m = r;
  }
  report.best_global = best_g->steps;
  report.best_mvd = best_m->steps;
  return report;
}

}  // namespace vardiff
