#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vardiff/ensemble_stats.hpp"
#include "vardiff/fields.hpp"

namespace vardiff {

/// Entry point of the `vardiff` command line tool.
///
/// Exit codes: 0 success, 1 runtime failure (I/O, malformed files, numerical
/// breakdown), 2 usage error (bad flags, invalid parameters such as a step
/// count that does not divide T).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One row of stats.csv.
struct StatsRow {
  int steps = 0;
  double mu_v = 0.0;
  std::optional<double> mvd_yearly;
  std::optional<std::array<double, 4>> mvd_season;
  std::optional<double> mse;
  std::optional<double> ssim;
};

/// Ensemble statistics: global mean variance, MVD against an optional
/// reference ensemble (seasonal rows need labels), and ensemble-mean MSE /
/// SSIM against optional truth fields after standardization with `norm`.
StatsRow compute_stats(const EnsembleSet& ensemble, int steps,
                       const std::optional<EnsembleSet>& reference,
                       const std::optional<std::vector<Grid>>& truth, const Standardizer& norm);

std::string stats_csv_header();
std::string stats_csv_row(const StatsRow& row);

}  // namespace vardiff
