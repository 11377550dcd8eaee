#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fqsd/config.hpp"

namespace fqsd {

/// Settings shared by the figure-data exports: horizon, step, destination,
/// and (where a figure sweeps a parameter) the value list. Fields left unset
/// fall back to per-figure defaults.
struct FigConfig {
  nlohmann::json raw;
  double T = 0, h = 0;
  std::filesystem::path out_dir = "out";
  std::string prefix;
  std::vector<double> values;
};

FigConfig parse_fig_config(const nlohmann::json& j);
FigConfig load_fig_config(const std::filesystem::path& path);

/// fig1: two-qubit concurrence under the zero-temperature ohmic kernel,
///       one column per cutoff frequency (default {0.5, 1, 2}).
/// fig2: |F_i| coefficient traces of the symmetric two-qubit model.
/// fig3: QBM <q> under Ornstein-Uhlenbeck kernels, one column per gamma
///       (default {0.5, 2, 8}), Omega = pi/2, omega_m = 1.
/// fig4: fermionic vs bosonic coefficient magnitudes at omega_1 = 2,
///       omega_2 = 1, OU{gamma = 0.4, Omega = pi/4}.
RunResult run_figdata(const std::string& fig, const FigConfig& cfg);

}  // namespace fqsd
