#pragma once

// Batch experiments driven by JSON configs. Results are computed in memory
// first; files are written only once the whole run has finished.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fockbound/weights.hpp"

namespace fockbound {

enum class ExperimentKind { kernel_diag, verify_bound, constants, equivalence, potential, mean_value, sweep };

std::string experiment_name(ExperimentKind kind);
ExperimentKind experiment_from_name(const std::string& name);

enum ExitStatus : int {
  exit_ok = 0,
  exit_config_error = 2,
  exit_numeric_failure = 3,
  exit_certificate_failure = 4,
};

constexpr int kMaxDegree = 64;
constexpr int kMaxResolution = 4096;

struct GridSpec {
  enum class Kind { disk, polar, random, points };
  Kind kind = Kind::disk;
  std::complex<double> center{0.0, 0.0};
  double radius = 2.0;
  double spacing = 0.1;
  int rings = 0;
  int angles = 0;
  int count = 0;
  std::vector<std::complex<double>> points;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kernel_diag;
  WeightFunction weight = WeightFunction::gaussian(1.0);
  std::optional<WeightFunction> weight_b;
  int N = 40;
  int resolution = 256;
  std::optional<double> M;  // default: declared upper Laplacian bound
  std::optional<GridSpec> grid;
  double tolerance = 1e-4;
  std::uint64_t seed = 0;
  int samples = 10;
  int sample_degree = 10;
  std::vector<double> s_values{0.3, 0.9};
  int b_resolution = 128;
  int b_grid = 17;
  std::string label;
  std::filesystem::path output = "out";
  std::vector<ExperimentConfig> entries;
};

/// Parses and range-checks a config; any unknown key or out-of-range knob is
/// a ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct ExperimentResult {
  ExitStatus status = exit_ok;
  std::string message;
  std::vector<Table> tables;
  nlohmann::ordered_json summary;  // deterministic content only
};

/// Runs the experiment in memory. Numeric and certificate failures are
/// reported through the status; config errors throw.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// "# fockbound-csv v1 <name>" followed by the column header and rows.
std::string render_csv(const Table& table);

/// Writes <output>/<table>.csv for each table and <output>/summary.json, the
/// latter carrying the only timestamp.
void write_result(const ExperimentResult& result, const std::filesystem::path& output);

/// run_experiment + write_result; returns the exit status.
int run(const ExperimentConfig& config);

}  // namespace fockbound
