#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "fqsd/config.hpp"
#include "fqsd/csv.hpp"
#include "fqsd/master.hpp"

using namespace fqsd;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json base_config() {
  return json{
      {"model", {{"kind", "one_qubit"}, {"omega", 1.0}}},
      {"kernel", {{"type", "single_mode"}, {"g", 0.8}, {"omega_b", 1.5}}},
      {"integrator", {{"T", 2.0}, {"h", 0.01}, {"coeff_source", "direct"}}},
      {"outputs",
       {{"prefix", "t"}, {"observables", json::array({"rho21"})},
        {"stored_samples", 21}}}};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const char* leaf) {
  const fs::path d = fs::temp_directory_path() / leaf;
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("config validation rejects malformed input") {
  auto expect_error = [](json j, const char* needle) {
    try {
      parse_run_config(j);
      FAIL_CHECK("expected ConfigError containing '" << needle << "'");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  json j = base_config();
  j["integrator"]["h"] = 0.5;
  expect_error(j, "T/10");

  j = base_config();
  j["integrator"]["h"] = 0.0301;
  expect_error(j, "integer multiple");

  j = base_config();
  j["outputs"]["observables"].push_back("magnetization");
  expect_error(j, "unknown observable");

  j = base_config();
  j["outputs"]["observables"] = json::array({"concurrence"});
  expect_error(j, "two_qubit");

  j = base_config();
  j["outputs"]["prefix"] = "bad/prefix";
  expect_error(j, "prefix");

  j = base_config();
  j["sweep"] = {{"parameter", "/integrator/h"}, {"values", {0.01}}};
  expect_error(j, "sweep.parameter");

  j = base_config();
  j["sweep"] = {{"parameter", "/kernel/gamma"}, {"values", {1.0}}};
  expect_error(j, "does not exist");

  j = base_config();
  j["kernel"] = {{"type", "ohmic"}, {"Gamma", 0.1}, {"omega_c", 1.0}};
  expect_error(j, "grid only");

  j = base_config();
  j["initial_state"] = {{"type", "vector"}, {"amplitudes", {1.0, 1.0}}};
  expect_error(j, "norm");

  j = base_config();
  j["model"] = {{"kind", "n_boson"}, {"omega_1", 1.0}, {"omega_2", 2.0}};
  j["outputs"]["observables"] = json::array();
  j["integrator"] = {{"T", 30.0}, {"h", 0.01}};
  expect_error(j, "capped");
}

TEST_CASE("reruns are byte-identical") {
  const fs::path dir = fresh_dir("fqsd_determinism");
  json j = base_config();
  j["outputs"]["dir"] = dir.string();
  const auto first = execute_run(parse_run_config(j));
  std::map<std::string, std::string> hashes;
  for (const auto& f : first.files) hashes[f.path] = f.hash;
  const auto second = execute_run(parse_run_config(j));
  REQUIRE(second.files.size() == first.files.size());
  for (const auto& f : second.files) {
    REQUIRE(hashes.count(f.path) == 1);
    CHECK(hashes[f.path] == f.hash);
  }
  fs::remove_all(dir);
}

TEST_CASE("manifest records every artifact with its hash") {
  const fs::path dir = fresh_dir("fqsd_manifest");
  json j = base_config();
  j["outputs"]["dir"] = dir.string();
  const auto res = execute_run(parse_run_config(j));
  REQUIRE_FALSE(res.numerical_failure);

  const fs::path manifest_path = dir / "t_manifest.json";
  REQUIRE(fs::exists(manifest_path));
  const json manifest = json::parse(slurp(manifest_path));
  CHECK(manifest["tool"] == "fqsd");
  CHECK(manifest["config"] == j);
  REQUIRE(manifest["files"].is_array());
  CHECK_FALSE(manifest["files"].empty());
  for (const auto& f : manifest["files"]) {
    const fs::path p = dir / f["path"].get<std::string>();
    REQUIRE(fs::exists(p));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(slurp(p))));
    CHECK(f["fnv1a64"].get<std::string>() == buf);
  }
  fs::remove_all(dir);
}

TEST_CASE("sweep runs produce per-value and combined artifacts") {
  const fs::path dir = fresh_dir("fqsd_sweep");
  json j = base_config();
  j["outputs"]["dir"] = dir.string();
  j["outputs"]["observables"] = json::array({"rho21"});
  j["sweep"] = {{"parameter", "/kernel/omega_b"}, {"values", {1.0, 1.5, 2.0}}};
  const auto res = execute_run(parse_run_config(j));
  // 3 runs x (trajectory, coefficients, observables) + combined + manifest.
  CHECK(res.files.size() == 11);
  int combined = 0;
  for (const auto& f : res.files)
    if (f.path.find("rho21_sweep") != std::string::npos) ++combined;
  CHECK(combined == 1);
  fs::remove_all(dir);
}

TEST_CASE("FQSD_OUTPUT_DIR overrides the configured directory") {
  const fs::path dir = fresh_dir("fqsd_envdir");
  setenv("FQSD_OUTPUT_DIR", dir.c_str(), 1);
  json j = base_config();
  j["outputs"]["dir"] = (fs::temp_directory_path() / "fqsd_ignored").string();
  const auto res = execute_run(parse_run_config(j));
  unsetenv("FQSD_OUTPUT_DIR");
  REQUIRE_FALSE(res.files.empty());
  CHECK(fs::path(res.out_dir) == dir);
  for (const auto& f : res.files) CHECK(fs::exists(dir / f.path));
  CHECK_FALSE(fs::exists(fs::temp_directory_path() / "fqsd_ignored"));
  fs::remove_all(dir);
}

TEST_CASE("trajectory CSV round-trips rho21 at t = pi") {
  const fs::path dir = fresh_dir("fqsd_pi");
  json j = base_config();
  j["kernel"] = {{"type", "single_mode"}, {"g", 1.0}, {"omega_b", 1.0}};
  j["integrator"] = {{"T", 4.0}, {"h", 0.001}, {"coeff_source", "closed_form"}};
  j["outputs"] = {{"dir", dir.string()}, {"prefix", "res"},
                  {"observables", json::array({"rho21"})},
                  {"stored_samples", 4001}};
  execute_run(parse_run_config(j));

  std::ifstream in(dir / "res_observables.csv");
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);  // header: t,re_rho21,im_rho21
  double t0 = 0, re0 = 0, im0 = 0;
  cplx interp;
  while (std::getline(in, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double t, re, im;
    ss >> t >> re >> im;
    if (t0 < std::numbers::pi && t >= std::numbers::pi) {
      const double w = (std::numbers::pi - t0) / (t - t0);
      interp = cplx(re0 + w * (re - re0), im0 + w * (im - im0));
      break;
    }
    t0 = t;
    re0 = re;
    im0 = im;
  }
  // rho21(pi) = 0.5 e^{i pi} cos(pi) = 0.5.
  CHECK(std::abs(interp - cplx(0.5)) < 1e-6);
  fs::remove_all(dir);
}

TEST_CASE("value formatting survives a round trip") {
  for (double v : {0.1, 1.0 / 3.0, std::numbers::pi, 1e-300, 6.02214076e23}) {
    CHECK(std::stod(format_value(v)) == v);
    CHECK(std::stod(format_value(-v)) == -v);
  }
  CHECK(format_value(0.0) == "0");
}

TEST_CASE("CSV serialization layout") {
  CsvTable tb;
  tb.header = {"a", "b"};
  tb.rows = {{"1", "2"}, {"3", "4"}};
  CHECK(to_csv(tb) == "a,b\n1,2\n3,4\n");
}

TEST_CASE("FNV-1a 64 test vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("coefficient names follow the model basis") {
  CHECK(coefficient_names(build_one_qubit(1.0)) ==
        std::vector<std::string>{"X1"});
  CHECK(coefficient_names(build_two_qubit(TwoQubitParams{})).size() == 4);
  CHECK(coefficient_names(build_qbm(1.0, 10)) ==
        (std::vector<std::string>{"X1", "X2"}));
}
