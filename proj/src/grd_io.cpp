#include "vardiff/grd_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "binary_io.hpp"
#include "vardiff/errors.hpp"

namespace vardiff {

namespace {

constexpr char kMagic[4] = {'G', 'R', 'D', '1'};

void expect_rank(const GrdTensor& t, std::size_t rank, const char* what) {
  if (t.dims.size() != rank) {
    throw FormatError(fmt::format("{}: expected a rank-{} GRD1 tensor, got rank {}", what, rank,
                                  t.dims.size()));
  }
}

}  // namespace

std::size_t GrdTensor::element_count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

void write_grd(const std::filesystem::path& path, const GrdTensor& t) {
  if (t.data.size() != t.element_count()) {
    throw ShapeError(fmt::format("write_grd: {} values for dims of {} elements", t.data.size(),
                                 t.element_count()));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(kMagic, 4);
  detail::write_le<std::uint16_t>(out, kGrdVersion);
  detail::write_le<std::uint16_t>(out, static_cast<std::uint16_t>(t.dims.size()));
  for (auto d : t.dims) detail::write_le<std::uint32_t>(out, d);
  detail::write_f32_payload(out, t.data);
  if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path.string()));
}

GrdTensor read_grd(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
  const std::string what = fmt::format("GRD1 file '{}'", path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError(what + ": bad magic (expected GRD1)");
  }
  const auto version = detail::read_le<std::uint16_t>(in, what);
  if (version != kGrdVersion) {
    throw FormatError(
        fmt::format("{}: unsupported version {} (expected {})", what, version, kGrdVersion));
  }
  const auto rank = detail::read_le<std::uint16_t>(in, what);
  GrdTensor t;
  for (std::uint16_t i = 0; i < rank; ++i) t.dims.push_back(detail::read_le<std::uint32_t>(in, what));
  // Reject absurd dims before allocating.
  const auto start = in.tellg();
  in.seekg(0, std::ios::end);
  const auto remaining = static_cast<std::uint64_t>(in.tellg() - start);
  in.seekg(start);
  if (remaining != static_cast<std::uint64_t>(t.element_count()) * 4) {
    throw FormatError(fmt::format("{}: payload is {} bytes but dims declare {}", what, remaining,
                                  static_cast<std::uint64_t>(t.element_count()) * 4));
  }
  t.data.resize(t.element_count());
  detail::read_f32_payload(in, t.data, what);
  return t;
}

GrdTensor to_tensor(const Grid& g) {
  GrdTensor t{{static_cast<std::uint32_t>(g.height()), static_cast<std::uint32_t>(g.width())}, {}};
  t.data.assign(g.values().begin(), g.values().end());
  return t;
}

GrdTensor to_tensor(std::span<const Grid> grids) {
  if (grids.empty()) throw ShapeError("to_tensor: no grids");
  const Grid& first = grids.front();
  GrdTensor t{{static_cast<std::uint32_t>(grids.size()), static_cast<std::uint32_t>(first.height()),
               static_cast<std::uint32_t>(first.width())},
              {}};
  t.data.reserve(t.element_count());
  for (const auto& g : grids) {
    if (!g.same_shape(first)) throw ShapeError("to_tensor: grids differ in shape");
    for (double v : g.values()) t.data.push_back(static_cast<float>(v));
  }
  return t;
}

GrdTensor to_tensor(const EnsembleSet& e) {
  return GrdTensor{{static_cast<std::uint32_t>(e.samples), static_cast<std::uint32_t>(e.members),
                    static_cast<std::uint32_t>(e.height), static_cast<std::uint32_t>(e.width)},
                   e.values};
}

GrdTensor to_tensor(const VarianceMaps& v) {
  GrdTensor t{{static_cast<std::uint32_t>(v.samples), static_cast<std::uint32_t>(v.height),
               static_cast<std::uint32_t>(v.width)},
              {}};
  t.data.assign(v.values.begin(), v.values.end());
  return t;
}

Grid tensor_to_grid(const GrdTensor& t) {
  expect_rank(t, 2, "tensor_to_grid");
  return Grid(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]),
              std::vector<double>(t.data.begin(), t.data.end()));
}

std::vector<Grid> tensor_to_grids(const GrdTensor& t) {
  expect_rank(t, 3, "tensor_to_grids");
  const std::size_t px = static_cast<std::size_t>(t.dims[1]) * t.dims[2];
  std::vector<Grid> out;
  for (std::uint32_t i = 0; i < t.dims[0]; ++i) {
    out.emplace_back(static_cast<int>(t.dims[1]), static_cast<int>(t.dims[2]),
                     std::vector<double>(t.data.begin() + static_cast<std::ptrdiff_t>(i * px),
                                         t.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * px)));
  }
  return out;
}

EnsembleSet tensor_to_ensemble(const GrdTensor& t) {
  expect_rank(t, 4, "tensor_to_ensemble");
  EnsembleSet e;
  e.samples = static_cast<int>(t.dims[0]);
  e.members = static_cast<int>(t.dims[1]);
  e.height = static_cast<int>(t.dims[2]);
  e.width = static_cast<int>(t.dims[3]);
  e.values = t.data;
  return e;
}

void write_seasons_csv(const std::filesystem::path& path, std::span<const Season> seasons) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  out << "sample,season\n";
  for (std::size_t i = 0; i < seasons.size(); ++i) out << i << ',' << season_name(seasons[i]) << '\n';
}

std::vector<Season> read_seasons_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
  std::string line;
  std::getline(in, line);
  if (line != "sample,season") {
    throw FormatError(fmt::format("'{}': expected header 'sample,season'", path.string()));
  }
  std::vector<Season> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw FormatError(fmt::format("'{}': malformed row '{}'", path.string(), line));
    }
    if (std::stoul(line.substr(0, comma)) != out.size()) {
      throw FormatError(fmt::format("'{}': rows out of order at '{}'", path.string(), line));
    }
    out.push_back(parse_season(line.substr(comma + 1)));
  }
  return out;
}

}  // namespace vardiff
