#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fqsd/master.hpp"

namespace fqsd {

struct SweepSpec {
  std::string pointer;  // JSON pointer into the model or kernel block
  std::vector<double> values;
};

/// Parsed and validated run configuration. `raw` keeps the original document
/// for sweep patching and for the manifest echo.
struct RunConfig {
  nlohmann::json raw;
  ModelSpec model;
  std::optional<CorrelationKernel> kernel;
  double T = 0, h = 0;
  CoeffSource source = CoeffSource::Grid;
  Mat rho0;
  std::filesystem::path out_dir = "out";
  std::string prefix = "run";
  std::vector<std::string> observables;
  int stored_samples = 2001;
  std::optional<SweepSpec> sweep;
};

/// Validates the whole document; every violation raises ConfigError with a
/// message naming the offending field.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

/// Read and parse a JSON document; missing file or malformed JSON raise
/// ConfigError naming the path.
nlohmann::json load_json_file(const std::filesystem::path& path);

struct FileRecord {
  std::string path;  // relative to the output directory
  std::string hash;  // fnv1a64 of the bytes written
};

struct RunResult {
  std::vector<FileRecord> files;
  std::filesystem::path out_dir;
  bool numerical_failure = false;
  std::string message;
  double max_trace_err = 0, max_herm_err = 0;
  double min_eig = 1.0;
};

/// Runs the configured simulation (or sweep), writing trajectory,
/// observable, and coefficient CSVs plus a manifest with a content hash for
/// every file. FQSD_OUTPUT_DIR overrides the configured output directory.
/// Sweep entries execute concurrently on distinct files.
RunResult execute_run(const RunConfig& cfg);

/// Coefficient column labels for the model's operator basis (X1..., or F1...
/// for the two-qubit basis).
std::vector<std::string> coefficient_names(const ModelSpec& model);

/// The configured directory unless FQSD_OUTPUT_DIR is set.
std::filesystem::path resolve_output_dir(const std::filesystem::path& configured);

}  // namespace fqsd
