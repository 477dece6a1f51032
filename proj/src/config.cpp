#include "vardiff/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "vardiff/errors.hpp"

namespace vardiff {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ParameterError(fmt::format("config: '{}' has invalid value '{}'", key, value));
  }
  return out;
}

struct Field {
  std::function<void(ExperimentConfig&, std::string_view, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
Field number(T ExperimentConfig::*member) {
  return {[member](ExperimentConfig& c, std::string_view k, std::string_view v) {
            c.*member = parse_number<T>(k, v);
          },
          [member](const ExperimentConfig& c) { return fmt::format("{}", c.*member); }};
}

template <typename Outer, typename T>
Field nested(Outer ExperimentConfig::*outer, T Outer::*member) {
  return {[outer, member](ExperimentConfig& c, std::string_view k, std::string_view v) {
            c.*outer.*member = parse_number<T>(k, v);
          },
          [outer, member](const ExperimentConfig& c) { return fmt::format("{}", c.*outer.*member); }};
}

Field text(std::string ExperimentConfig::*member) {
  return {[member](ExperimentConfig& c, std::string_view, std::string_view v) {
            c.*member = std::string(v);
          },
          [member](const ExperimentConfig& c) { return c.*member; }};
}

// Canonical order of keys in serialized configs.
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"T", nested(&ExperimentConfig::schedule, &ScheduleConfig::T)},
      {"sr_min", nested(&ExperimentConfig::schedule, &ScheduleConfig::sr_min)},
      {"sr_max", nested(&ExperimentConfig::schedule, &ScheduleConfig::sr_max)},
      {"lambda", nested(&ExperimentConfig::schedule, &ScheduleConfig::lambda)},
      {"delta_t", number(&ExperimentConfig::delta_t)},
      {"steps", number(&ExperimentConfig::steps)},
      {"members", number(&ExperimentConfig::members)},
      {"seed", number(&ExperimentConfig::seed)},
      {"data_dir", text(&ExperimentConfig::data_dir)},
      {"model_path", text(&ExperimentConfig::model_path)},
      {"height", nested(&ExperimentConfig::net, &ToyNetConfig::height)},
      {"width", nested(&ExperimentConfig::net, &ToyNetConfig::width)},
      {"hidden", nested(&ExperimentConfig::net, &ToyNetConfig::hidden)},
      {"blocks", nested(&ExperimentConfig::net, &ToyNetConfig::blocks)},
      {"freqs", nested(&ExperimentConfig::net, &ToyNetConfig::freqs)},
      {"epochs", nested(&ExperimentConfig::train, &TrainConfig::epochs)},
      {"batch", nested(&ExperimentConfig::train, &TrainConfig::batch)},
      {"learning_rate", nested(&ExperimentConfig::train, &TrainConfig::learning_rate)},
      {"weight_decay", nested(&ExperimentConfig::train, &TrainConfig::weight_decay)},
      {"train_seed", nested(&ExperimentConfig::train, &TrainConfig::seed)},
  };
  return table;
}

}  // namespace

int ExperimentConfig::resolved_delta_t() const {
  if (delta_t > 0) {
    time_grid(schedule.T, delta_t);
    return delta_t;
  }
  return delta_t_for_steps(schedule.T, steps);
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

ExperimentConfig parse_config(std::string_view input) {
  ExperimentConfig cfg;
  std::size_t line_no = 0;
  while (!input.empty()) {
    const auto nl = input.find('\n');
    const std::string_view line = trim(input.substr(0, nl));
    input = nl == std::string_view::npos ? std::string_view{} : input.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParameterError(fmt::format("config line {}: expected key = value", line_no));
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    bool found = false;
    for (const auto& [name, field] : fields()) {
      if (name == key) {
        field.set(cfg, key, value);
        found = true;
        break;
      }
    }
    if (!found) throw ParameterError(fmt::format("config line {}: unknown key '{}'", line_no, key));
  }
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [name, field] : fields()) out += fmt::format("{} = {}\n", name, field.get(cfg));
  return out;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open config '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace vardiff
