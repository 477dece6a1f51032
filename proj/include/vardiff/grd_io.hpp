#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "vardiff/ensemble_stats.hpp"
#include "vardiff/fields.hpp"

namespace vardiff {

/// GRD1 container: "GRD1", u16 version, u16 rank, rank x u32 dims, then
/// product(dims) f32 values, row-major with the last dimension fastest.
/// All integers and floats are little-endian.
struct GrdTensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;

  std::size_t element_count() const;
  friend bool operator==(const GrdTensor&, const GrdTensor&) = default;
};

inline constexpr std::uint16_t kGrdVersion = 1;

void write_grd(const std::filesystem::path& path, const GrdTensor& t);
GrdTensor read_grd(const std::filesystem::path& path);

GrdTensor to_tensor(const Grid& g);
GrdTensor to_tensor(std::span<const Grid> grids);  // rank 3
GrdTensor to_tensor(const EnsembleSet& e);         // rank 4
GrdTensor to_tensor(const VarianceMaps& v);        // rank 3

Grid tensor_to_grid(const GrdTensor& t);
std::vector<Grid> tensor_to_grids(const GrdTensor& t);
EnsembleSet tensor_to_ensemble(const GrdTensor& t);

void write_seasons_csv(const std::filesystem::path& path, std::span<const Season> seasons);
std::vector<Season> read_seasons_csv(const std::filesystem::path& path);

}  // namespace vardiff
