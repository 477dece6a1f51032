#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "vardiff/schedule.hpp"
#include "vardiff/toy_net.hpp"
#include "vardiff/train.hpp"

namespace vardiff {

/// Flat `key = value` experiment description. Lines starting with '#' and
/// blank lines are ignored; unknown keys are rejected.
struct ExperimentConfig {
  ScheduleConfig schedule;
  int delta_t = 0;  // 0 means "derive from steps"
  int steps = 8;
  int members = 10;
  std::uint64_t seed = 0;
  std::string data_dir;
  std::string model_path;
  ToyNetConfig net;
  TrainConfig train;

  /// Step size implied by delta_t / steps, validated against T.
  int resolved_delta_t() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&);
};

ExperimentConfig parse_config(std::string_view text);
/// Canonical form: fixed key order, shortest round-tripping number format.
std::string serialize_config(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

}  // namespace vardiff
