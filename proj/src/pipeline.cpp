#include "vardiff/pipeline.hpp"

#include <fmt/format.h>

#include "vardiff/errors.hpp"
#include "vardiff/grd_io.hpp"

namespace vardiff {

ModelNormalization fit_normalization(const PairedDataset& data) {
  return ModelNormalization{fit_standardizer(data.hi), fit_standardizer(data.lo)};
}

TrainingSet make_training_set(const PairedDataset& data, const ModelNormalization& norm) {
  TrainingSet set;
  for (std::size_t i = 0; i < data.size(); ++i) {
    set.targets.push_back(norm.target.apply(data.hi[i]).data());
    set.conds.push_back(
        prepare_condition(data.lo[i], norm.cond, data.hi[i].height(), data.hi[i].width(), 1.0));
  }
  return set;
}

std::vector<std::vector<double>> make_conditions(const PairedDataset& data,
                                                 const ModelNormalization& norm, double lambda) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.push_back(prepare_condition(data.lo[i], norm.cond, data.hi[i].height(),
                                    data.hi[i].width(), lambda));
  }
  return out;
}

SamplerConfig sampler_for(const ToyDenoiser& net, int steps, int members, std::uint64_t seed,
                          int threads) {
  SamplerConfig cfg;
  cfg.delta_t = delta_t_for_steps(net.schedule().T(), steps);
  cfg.members = members;
  cfg.base_seed = seed;
  cfg.threads = threads;
  cfg.height = net.config().height;
  cfg.width = net.config().width;
  cfg.output = net.normalization().target;
  return cfg;
}

void save_dataset(const std::filesystem::path& dir, const PairedDataset& data) {
  std::filesystem::create_directories(dir);
  write_grd(dir / "hi.grd", to_tensor(data.hi));
  write_grd(dir / "lo.grd", to_tensor(data.lo));
  write_seasons_csv(dir / "seasons.csv", data.seasons);
}

PairedDataset load_dataset(const std::filesystem::path& dir) {
  PairedDataset d;
  d.hi = tensor_to_grids(read_grd(dir / "hi.grd"));
  d.lo = tensor_to_grids(read_grd(dir / "lo.grd"));
  d.seasons = read_seasons_csv(dir / "seasons.csv");
  if (d.hi.size() != d.lo.size() || d.hi.size() != d.seasons.size()) {
    throw FormatError(fmt::format("dataset '{}': hi/lo/seasons counts differ ({}/{}/{})",
                                  dir.string(), d.hi.size(), d.lo.size(), d.seasons.size()));
  }
  if (d.lo.front().height() == 0 || d.hi.front().height() % d.lo.front().height() != 0) {
    throw FormatError(fmt::format("dataset '{}': lo grid does not tile hi grid", dir.string()));
  }
  d.coarse_factor = d.hi.front().height() / d.lo.front().height();
  return d;
}

LinearBaseline LinearBaseline::fit(const PairedDataset& train, double ridge) {
  if (train.size() == 0) throw ParameterError("linear baseline: empty training set");
  const auto in = static_cast<Eigen::Index>(train.lo.front().size()) + 1;
  const auto out = static_cast<Eigen::Index>(train.hi.front().size());
  const auto n = static_cast<Eigen::Index>(train.size());
  Eigen::MatrixXd X(n, in);
  Eigen::MatrixXd Y(n, out);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j + 1 < in; ++j) X(i, j) = train.lo[i].data()[j];
    X(i, in - 1) = 1.0;
    for (Eigen::Index j = 0; j < out; ++j) Y(i, j) = train.hi[i].data()[j];
  }
  Eigen::MatrixXd gram = X.transpose() * X;
  gram.diagonal().array() += ridge * n;
  LinearBaseline b;
  b.h_ = train.hi.front().height();
  b.w_ = train.hi.front().width();
  b.weights_ = gram.ldlt().solve(X.transpose() * Y);
  return b;
}

Grid LinearBaseline::predict(const Grid& lo) const {
  Eigen::RowVectorXd x(weights_.rows());
  if (static_cast<Eigen::Index>(lo.size()) + 1 != x.size()) {
    throw ShapeError("linear baseline: conditioning shape differs from the fitted one");
  }
  for (std::size_t j = 0; j < lo.size(); ++j) x[static_cast<Eigen::Index>(j)] = lo.data()[j];
  x[x.size() - 1] = 1.0;
  const Eigen::RowVectorXd y = x * weights_;
  return Grid(h_, w_, std::vector<double>(y.data(), y.data() + y.size()));
}

}  // namespace vardiff
