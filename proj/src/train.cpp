#include "vardiff/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "vardiff/errors.hpp"
#include "vardiff/rng.hpp"

namespace vardiff {

namespace {

using Matrix = ToyDenoiser::Matrix;

struct Batch {
  Matrix noisy;
  Matrix cond;
  Matrix noise;
  std::vector<int> t;
};

Batch draw_batch(const ToyDenoiser& net, const TrainingSet& data,
                 std::span<const std::size_t> indices, Rng& rng) {
  const Schedule& s = net.schedule();
  const int n = net.config().pixels();
  const auto b = static_cast<Eigen::Index>(indices.size());
  const double inv_lambda = 1.0 / s.lambda();
  std::uniform_int_distribution<int> time_dist(0, s.T());
  std::normal_distribution<double> normal(0.0, 1.0);
  Batch out{Matrix(n, b), Matrix(n, b), Matrix(n, b), std::vector<int>(indices.size())};
  for (Eigen::Index j = 0; j < b; ++j) {
    const auto& x = data.targets[indices[j]];
    const auto& c = data.conds[indices[j]];
    const int t = time_dist(rng);
    out.t[j] = t;
    const double sr = s.signal_rate(t);
    const double nr = s.noise_rate(t);
    for (int i = 0; i < n; ++i) {
      const double e = normal(rng);
      out.noise(i, j) = static_cast<float>(e);
      out.noisy(i, j) = static_cast<float>(sr * x[i] * inv_lambda + nr * e);
      out.cond(i, j) = static_cast<float>(c[i] * inv_lambda);
    }
  }
  return out;
}

void check_data(const ToyDenoiser& net, const TrainingSet& data) {
  if (data.size() == 0) throw ParameterError("train: empty training set");
  if (data.conds.size() != data.targets.size()) {
    throw ShapeError("train: targets and conditioning differ in count");
  }
  const auto n = static_cast<std::size_t>(net.config().pixels());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.targets[i].size() != n || data.conds[i].size() != n) {
      throw ShapeError(fmt::format("train: sample {} does not have {} pixels", i, n));
    }
  }
}

}  // namespace

TrainResult train(ToyDenoiser& net, const TrainingSet& data, const TrainConfig& cfg) {
  if (cfg.epochs < 1 || cfg.batch < 1 || !(cfg.learning_rate > 0.0) || cfg.weight_decay < 0.0) {
    throw ParameterError(fmt::format("train: invalid hyperparameters epochs={} batch={} lr={} wd={}",
                                     cfg.epochs, cfg.batch, cfg.learning_rate, cfg.weight_decay));
  }
  check_data(net, data);

  constexpr double beta1 = 0.9;
  constexpr double beta2 = 0.999;
  constexpr double adam_eps = 1e-8;
  auto theta = net.parameters();
  std::vector<double> m(theta.size(), 0.0);
  std::vector<double> v(theta.size(), 0.0);
  std::vector<float> grad;

  Rng rng = make_stream(cfg.seed, 0x7A41, 0);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  long step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_sum = 0.0;
    int epoch_batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch);
      const Batch b = draw_batch(net, data, std::span(order).subspan(start, stop - start), rng);
      const double scale = 1.0 / static_cast<double>(b.noise.size());
      double loss = 0.0;
      auto loss_grad = [&](const Matrix& eps) -> Matrix {
        const Matrix diff = eps - b.noise;
        loss = diff.cast<double>().cwiseAbs().sum() * scale;
        return diff.unaryExpr([&](float d) {
          return static_cast<float>(d > 0.0f ? scale : (d < 0.0f ? -scale : 0.0));
        });
      };
      net.forward_backward(b.noisy, b.cond, b.t, loss_grad, grad);
      if (!std::isfinite(loss)) {
        throw NumericalError(fmt::format(
            "train: loss became non-finite at step {} (epoch {}); lower the learning rate "
            "(currently {:g}) or check the input standardization",
            step, epoch, cfg.learning_rate));
      }
      ++step;
      const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
      for (std::size_t i = 0; i < theta.size(); ++i) {
        const double g = grad[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * g;
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
        double p = theta[i];
        p -= cfg.learning_rate * cfg.weight_decay * p;
        p -= cfg.learning_rate * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + adam_eps);
        theta[i] = static_cast<float>(p);
      }
      result.step_loss.push_back(loss);
      epoch_sum += loss;
      ++epoch_batches;
    }
    result.epoch_loss.push_back(epoch_sum / epoch_batches);
  }
  return result;
}

double evaluate_loss(const ToyDenoiser& net, const TrainingSet& data, int batches, int batch,
                     std::uint64_t seed) {
  check_data(net, data);
  Rng rng = make_stream(seed, 0xE7A1, 0);
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  double total = 0.0;
  for (int k = 0; k < batches; ++k) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(batch));
    for (auto& i : idx) i = pick(rng);
    const Batch b = draw_batch(net, data, idx, rng);
    const Matrix eps = net.forward(b.noisy, b.cond, b.t);
    total += (eps - b.noise).cast<double>().cwiseAbs().mean();
  }
  return total / batches;
}

}  // namespace vardiff
