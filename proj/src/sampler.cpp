#include "vardiff/sampler.hpp"

#include <cmath>

#include <fmt/format.h>

#include "vardiff/errors.hpp"
#include "vardiff/parallel.hpp"
#include "vardiff/rng.hpp"

namespace vardiff {

std::vector<double> ddim_step(std::span<const double> x_prev, int t, int delta_t,
                              const Denoiser& d, const Schedule& s,
                              std::span<const double> cond) {
  const double ratio = s.step_ratio(t, delta_t);
  const double c = s.step_coefficient(t, delta_t);
  const std::vector<double> eps = d.predict(x_prev, t - delta_t, cond);
  if (eps.size() != x_prev.size()) {
    throw ShapeError(fmt::format("ddim_step: denoiser returned {} values for a {}-value state",
                                 eps.size(), x_prev.size()));
  }
  std::vector<double> out(x_prev.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(eps[i])) {
      throw NumericalError(fmt::format(
          "ddim_step: denoiser output not finite at coordinate {} (t = {})", i, t - delta_t));
    }
    out[i] = ratio * x_prev[i] + c * eps[i];
  }
  return out;
}

Grid generate(const Denoiser& d, const Schedule& s, const SamplerConfig& cfg,
              std::span<const double> cond, std::uint64_t stream_seed) {
  const TimeGrid grid = time_grid(s.T(), cfg.delta_t);
  const auto n = static_cast<std::size_t>(cfg.height) * cfg.width;
  if (!cond.empty() && cond.size() != n) {
    throw ShapeError(fmt::format("generate: conditioning has {} values, state has {}",
                                 cond.size(), n));
  }
  Rng rng(stream_seed);
  std::vector<double> x = normal_vector(rng, n);
  for (std::size_t k = 1; k < grid.points.size(); ++k) {
    x = ddim_step(x, grid.points[k], grid.delta_t, d, s, cond);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(std::abs(x[i]) <= cfg.divergence_limit)) {
        throw NumericalError(fmt::format(
            "generate: state diverged at step {} of {} (t = {}, |x| = {:g} at coordinate {})", k,
            grid.steps(), grid.points[k], std::abs(x[i]), i));
      }
    }
  }
  Grid out(cfg.height, cfg.width);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = x[i] * s.lambda();
    out.data()[i] = cfg.output ? cfg.output->invert(v) : v;
  }
  const int oh = cfg.out_height > 0 ? cfg.out_height : cfg.height;
  const int ow = cfg.out_width > 0 ? cfg.out_width : cfg.width;
  if (oh != cfg.height || ow != cfg.width) out = crop(out, oh, ow);
  return out;
}

std::uint64_t member_seed(const SamplerConfig& cfg, int sample, int member) {
  return derive_seed(cfg.base_seed, static_cast<std::uint64_t>(sample),
                     static_cast<std::uint64_t>(member));
}

std::vector<Grid> generate_ensemble(const Denoiser& d, const Schedule& s,
                                    const SamplerConfig& cfg, std::span<const double> cond,
                                    int sample_index) {
  if (cfg.members < 1) throw ParameterError("generate_ensemble: need at least one member");
  time_grid(s.T(), cfg.delta_t);
  std::vector<Grid> members(static_cast<std::size_t>(cfg.members));
  parallel_for(members.size(), cfg.threads, [&](std::size_t j) {
    try {
      members[j] = generate(d, s, cfg, cond, member_seed(cfg, sample_index, static_cast<int>(j)));
    } catch (const NumericalError& e) {
      throw NumericalError(fmt::format("member {}: {}", j, e.what()));
    }
  });
  return members;
}

EnsembleSet generate_ensemble_set(const Denoiser& d, const Schedule& s, const SamplerConfig& cfg,
                                  std::span<const std::vector<double>> conds) {
  if (cfg.members < 1) throw ParameterError("generate_ensemble_set: need at least one member");
  time_grid(s.T(), cfg.delta_t);
  const int oh = cfg.out_height > 0 ? cfg.out_height : cfg.height;
  const int ow = cfg.out_width > 0 ? cfg.out_width : cfg.width;
  EnsembleSet out(static_cast<int>(conds.size()), cfg.members, oh, ow);
  const std::size_t total = conds.size() * static_cast<std::size_t>(cfg.members);
  parallel_for(total, cfg.threads, [&](std::size_t k) {
    const int i = static_cast<int>(k / cfg.members);
    const int j = static_cast<int>(k % cfg.members);
    try {
      out.set_member(i, j, generate(d, s, cfg, conds[i], member_seed(cfg, i, j)));
    } catch (const NumericalError& e) {
      throw NumericalError(fmt::format("sample {} member {}: {}", i, j, e.what()));
    }
  });
  return out;
}

std::vector<double> prepare_condition(const Grid& lo, const Standardizer& cond_norm, int h, int w,
                                      double lambda) {
  const Grid up = bilinear_resize(cond_norm.apply(lo), h, w);
  std::vector<double> out(up.data());
  for (auto& v : out) v /= lambda;
  return out;
}

}  // namespace vardiff
