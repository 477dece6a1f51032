#include "vardiff/toy_net.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <fmt/format.h>

#include "binary_io.hpp"
#include "vardiff/errors.hpp"
#include "vardiff/rng.hpp"

namespace vardiff {

namespace {

using Matrix = ToyDenoiser::Matrix;
using MatrixMap = Eigen::Map<Eigen::MatrixXf>;
using ConstMatrixMap = Eigen::Map<const Eigen::MatrixXf>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXf>;

Matrix silu(const Matrix& a) {
  return a.unaryExpr([](float v) { return v / (1.0f + std::exp(-v)); });
}

Matrix silu_grad(const Matrix& a) {
  return a.unaryExpr([](float v) {
    const float s = 1.0f / (1.0f + std::exp(-v));
    return s * (1.0f + v * (1.0f - s));
  });
}

constexpr char kMagic[4] = {'V', 'D', 'M', 'W'};

}  // namespace

struct ToyDenoiser::Layout {
  struct Dense {
    std::size_t w = 0;  // offset of the rows x cols weight block
    std::size_t b = 0;  // offset of the bias
    int rows = 0;
    int cols = 0;
  };
  Dense stem;
  std::vector<std::pair<Dense, Dense>> blocks;
  Dense head;
  Dense gate;
  std::size_t total = 0;
};

ToyDenoiser::Layout ToyDenoiser::layout() const {
  Layout l;
  std::size_t off = 0;
  auto dense = [&off](int rows, int cols) {
    Layout::Dense d{off, off + static_cast<std::size_t>(rows) * cols, rows, cols};
    off = d.b + rows;
    return d;
  };
  l.stem = dense(cfg_.hidden, cfg_.input_dim());
  for (int i = 0; i < cfg_.blocks; ++i) {
    auto first = dense(cfg_.hidden, cfg_.hidden);
    auto second = dense(cfg_.hidden, cfg_.hidden);
    l.blocks.emplace_back(first, second);
  }
  l.head = dense(cfg_.pixels(), cfg_.hidden);
  l.gate = dense(2, cfg_.embed_dim());
  l.total = off;
  return l;
}

ToyDenoiser::ToyDenoiser(ToyNetConfig cfg, Schedule schedule, std::uint64_t init_seed)
    : cfg_(cfg), schedule_(std::move(schedule)) {
  if (cfg.height < 1 || cfg.width < 1 || cfg.hidden < 1 || cfg.blocks < 0 || cfg.freqs < 1) {
    throw ParameterError(fmt::format(
        "toy denoiser: invalid architecture {}x{} hidden={} blocks={} freqs={}", cfg.height,
        cfg.width, cfg.hidden, cfg.blocks, cfg.freqs));
  }
  const Layout l = layout();
  theta_.assign(l.total, 0.0f);
  Rng rng = make_stream(init_seed, 0x7E57, 0);
  auto init = [&](const Layout::Dense& d) {
    const float bound = 1.0f / std::sqrt(static_cast<float>(d.cols));
    std::uniform_real_distribution<float> dist(-bound, bound);
    for (std::size_t i = d.w; i < d.b + d.rows; ++i) theta_[i] = dist(rng);
  };
  init(l.stem);
  for (const auto& [a, b] : l.blocks) {
    init(a);
    init(b);
  }
  init(l.head);
  init(l.gate);
}

std::string ToyDenoiser::id() const {
  return fmt::format("toy-mlp-{}x{}-h{}-b{}", cfg_.height, cfg_.width, cfg_.hidden,
                     cfg_.blocks);
}

Eigen::VectorXf ToyDenoiser::time_features(int t) const {
  const double frac = static_cast<double>(t) / schedule_.T();
  Eigen::VectorXf e(cfg_.embed_dim());
  for (int f = 0; f < cfg_.freqs; ++f) {
    const double angle = frac * std::ldexp(1.0, f) * std::numbers::pi / 2.0;
    e[f] = static_cast<float>(std::sin(angle));
    e[cfg_.freqs + f] = static_cast<float>(std::cos(angle));
  }
  return e;
}

Matrix ToyDenoiser::forward(const Matrix& x, const Matrix& cond, std::span<const int> t) const {
  return run(x, cond, t, nullptr, nullptr);
}

Matrix ToyDenoiser::forward_backward(const Matrix& x, const Matrix& cond,
                                     std::span<const int> t,
                                     const std::function<Matrix(const Matrix&)>& loss_grad,
                                     std::vector<float>& grad) const {
  return run(x, cond, t, &loss_grad, &grad);
}

Matrix ToyDenoiser::run(const Matrix& x, const Matrix& cond, std::span<const int> t,
                        const std::function<Matrix(const Matrix&)>* loss_grad,
                        std::vector<float>* grad) const {
  const int n = cfg_.pixels();
  const auto batch = static_cast<Eigen::Index>(t.size());
  if (x.rows() != n || x.cols() != batch || cond.rows() != n || cond.cols() != batch) {
    throw ShapeError(fmt::format("toy denoiser: batch shapes {}x{} / {}x{} do not match {}x{}",
                                 x.rows(), x.cols(), cond.rows(), cond.cols(), n, batch));
  }
  const Layout l = layout();
  auto W = [&](const Layout::Dense& d) {
    return ConstMatrixMap(theta_.data() + d.w, d.rows, d.cols);
  };
  auto B = [&](const Layout::Dense& d) { return ConstVectorMap(theta_.data() + d.b, d.rows); };

  Matrix emb(cfg_.embed_dim(), batch);
  Eigen::VectorXf sr(batch), nr(batch);
  for (Eigen::Index j = 0; j < batch; ++j) {
    emb.col(j) = time_features(t[j]);
    sr[j] = static_cast<float>(schedule_.signal_rate(t[j]));
    nr[j] = static_cast<float>(schedule_.noise_rate(t[j]));
  }
  Matrix in(cfg_.input_dim(), batch);
  in << x, cond, emb;

  Matrix h = (W(l.stem) * in).colwise() + B(l.stem);
  std::vector<Matrix> block_in;
  std::vector<Matrix> block_mid;
  for (const auto& [first, second] : l.blocks) {
    Matrix a1 = (W(first) * silu(h)).colwise() + B(first);
    Matrix branch = (W(second) * silu(a1)).colwise() + B(second);
    if (grad) {
      block_in.push_back(h);
      block_mid.push_back(a1);
    }
    h += branch;
  }
  const Matrix z = silu(h);
  Matrix d = (W(l.head) * z).colwise() + B(l.head);
  const Matrix g = (W(l.gate) * emb).colwise() + B(l.gate);
  for (Eigen::Index j = 0; j < batch; ++j) {
    d.col(j) += g(0, j) * x.col(j) + g(1, j) * cond.col(j);
  }
  Matrix eps(n, batch);
  for (Eigen::Index j = 0; j < batch; ++j) eps.col(j) = (x.col(j) - sr[j] * d.col(j)) / nr[j];

  if (!grad) return eps;

  grad->assign(theta_.size(), 0.0f);
  auto gW = [&](const Layout::Dense& dd) { return MatrixMap(grad->data() + dd.w, dd.rows, dd.cols); };
  auto gB = [&](const Layout::Dense& dd) {
    return Eigen::Map<Eigen::VectorXf>(grad->data() + dd.b, dd.rows);
  };

  const Matrix d_eps = (*loss_grad)(eps);
  Matrix d_d(n, batch);
  for (Eigen::Index j = 0; j < batch; ++j) d_d.col(j) = -(sr[j] / nr[j]) * d_eps.col(j);

  Matrix d_g(2, batch);
  for (Eigen::Index j = 0; j < batch; ++j) {
    d_g(0, j) = d_d.col(j).dot(x.col(j));
    d_g(1, j) = d_d.col(j).dot(cond.col(j));
  }
  gW(l.gate) = d_g * emb.transpose();
  gB(l.gate) = d_g.rowwise().sum();

  gW(l.head) = d_d * z.transpose();
  gB(l.head) = d_d.rowwise().sum();
  Matrix d_h = (W(l.head).transpose() * d_d).cwiseProduct(silu_grad(h));

  for (std::size_t k = l.blocks.size(); k-- > 0;) {
    const auto& [first, second] = l.blocks[k];
    const Matrix& h_in = block_in[k];
    const Matrix& a1 = block_mid[k];
    const Matrix u = silu(h_in);
    gW(second) = d_h * silu(a1).transpose();
    gB(second) = d_h.rowwise().sum();
    const Matrix d_a1 = (W(second).transpose() * d_h).cwiseProduct(silu_grad(a1));
    gW(first) = d_a1 * u.transpose();
    gB(first) = d_a1.rowwise().sum();
    d_h += (W(first).transpose() * d_a1).cwiseProduct(silu_grad(h_in));
  }
  gW(l.stem) = d_h * in.transpose();
  gB(l.stem) = d_h.rowwise().sum();
  return eps;
}

std::vector<double> ToyDenoiser::predict(std::span<const double> x, int t,
                                         std::span<const double> cond) const {
  std::vector<std::vector<double>> one{std::vector<double>(x.begin(), x.end())};
  return std::move(predict_batch(one, t, cond).front());
}

std::vector<std::vector<double>> ToyDenoiser::predict_batch(
    std::span<const std::vector<double>> xs, int t, std::span<const double> cond) const {
  const int n = cfg_.pixels();
  if (!cond.empty() && cond.size() != static_cast<std::size_t>(n)) {
    throw ShapeError(fmt::format("toy denoiser: conditioning has {} entries, expected {}",
                                 cond.size(), n));
  }
  const auto batch = static_cast<Eigen::Index>(xs.size());
  Matrix x(n, batch);
  Matrix c = Matrix::Zero(n, batch);
  for (Eigen::Index j = 0; j < batch; ++j) {
    if (xs[j].size() != static_cast<std::size_t>(n)) {
      throw ShapeError(fmt::format("toy denoiser: input has {} entries, expected {}",
                                   xs[j].size(), n));
    }
    for (int i = 0; i < n; ++i) {
      x(i, j) = static_cast<float>(xs[j][i]);
      if (!cond.empty()) c(i, j) = static_cast<float>(cond[i]);
    }
  }
  const std::vector<int> ts(static_cast<std::size_t>(batch), t);
  const Matrix eps = forward(x, c, ts);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(batch), std::vector<double>(n));
  for (Eigen::Index j = 0; j < batch; ++j) {
    for (int i = 0; i < n; ++i) out[j][i] = eps(i, j);
  }
  return out;
}

void ToyDenoiser::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  using detail::write_le;
  out.write(kMagic, 4);
  write_le<std::uint16_t>(out, kCheckpointVersion);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(cfg_.height));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(cfg_.width));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(cfg_.hidden));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(cfg_.blocks));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(cfg_.freqs));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(schedule_.T()));
  write_le<double>(out, schedule_.sr_min());
  write_le<double>(out, schedule_.sr_max());
  write_le<double>(out, schedule_.lambda());
  write_le<double>(out, norm_.target.mean);
  write_le<double>(out, norm_.target.std);
  write_le<double>(out, norm_.cond.mean);
  write_le<double>(out, norm_.cond.std);
  write_le<std::uint64_t>(out, theta_.size());
  detail::write_f32_payload(out, theta_);
  if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path.string()));
}

ToyDenoiser ToyDenoiser::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open model '{}'", path.string()));
  const std::string what = fmt::format("model '{}'", path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError(what + ": bad magic (expected VDMW)");
  }
  using detail::read_le;
  const auto version = read_le<std::uint16_t>(in, what);
  if (version != kCheckpointVersion) {
    throw FormatError(fmt::format("{}: unsupported checkpoint version {} (expected {})", what,
                                  version, kCheckpointVersion));
  }
  ToyNetConfig cfg;
  cfg.height = static_cast<int>(read_le<std::uint32_t>(in, what));
  cfg.width = static_cast<int>(read_le<std::uint32_t>(in, what));
  cfg.hidden = static_cast<int>(read_le<std::uint32_t>(in, what));
  cfg.blocks = static_cast<int>(read_le<std::uint32_t>(in, what));
  cfg.freqs = static_cast<int>(read_le<std::uint32_t>(in, what));
  ScheduleConfig sc;
  sc.T = static_cast<int>(read_le<std::uint32_t>(in, what));
  sc.sr_min = read_le<double>(in, what);
  sc.sr_max = read_le<double>(in, what);
  sc.lambda = read_le<double>(in, what);
  ModelNormalization norm;
  norm.target.mean = read_le<double>(in, what);
  norm.target.std = read_le<double>(in, what);
  norm.cond.mean = read_le<double>(in, what);
  norm.cond.std = read_le<double>(in, what);
  const auto count = read_le<std::uint64_t>(in, what);

  ToyDenoiser net(cfg, Schedule(sc), 0);
  if (count != net.theta_.size()) {
    throw FormatError(fmt::format("{}: {} weights stored but architecture needs {}", what, count,
                                  net.theta_.size()));
  }
  detail::read_f32_payload(in, net.theta_, what);
  net.norm_ = norm;
  return net;
}

}  // namespace vardiff
