#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "fqsd/config.hpp"
#include "fqsd/figdata.hpp"
#include "fqsd/types.hpp"
#include "fqsd/verify.hpp"

namespace {

void apply_overrides(nlohmann::json& j, double T, double h) {
  if (T > 0) j["integrator"]["T"] = T;
  if (h > 0) j["integrator"]["h"] = h;
}

int report_result(const fqsd::RunResult& res) {
  for (const auto& f : res.files)
    std::printf("wrote %s  fnv1a64=%s\n", (res.out_dir / f.path).string().c_str(),
                f.hash.c_str());
  if (res.max_trace_err > 0 || res.max_herm_err > 0)
    std::printf("invariants: max_trace_err=%.3e max_herm_err=%.3e min_eig=%.3e\n",
                res.max_trace_err, res.max_herm_err, res.min_eig);
  if (res.numerical_failure) {
    std::fprintf(stderr, "numerical failure: %s\n", res.message.c_str());
    return 3;
  }
  return 0;
}

int cmd_run(const std::string& path, double T, double h) {
  nlohmann::json j = fqsd::load_json_file(path);
  apply_overrides(j, T, h);
  return report_result(fqsd::execute_run(fqsd::parse_run_config(j)));
}

int cmd_verify(const std::string& suite) {
  const auto reports = fqsd::run_verify(suite);
  std::fputs(fqsd::suites_to_json(reports).c_str(), stdout);
  for (const auto& r : reports)
    if (!r.all_passed()) return 1;
  return 0;
}

int cmd_figdata(const std::string& fig, const std::string& path, double T, double h) {
  nlohmann::json j = fqsd::load_json_file(path);
  apply_overrides(j, T, h);
  return report_result(fqsd::run_figdata(fig, fqsd::parse_fig_config(j)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fqsd: open-system dynamics with fermionic baths"};
  app.require_subcommand(1);

  std::string config_path, suite, fig;
  double T = 0, h = 0;

  auto* run = app.add_subcommand("run", "Run a simulation or sweep from a JSON config");
  run->set_help_flag("--help", "print help");  // frees -h/--h for the step override
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--T", T, "override integrator.T");
  run->add_option("--h", h, "override integrator.h");

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite, "novikov|recovery|oracle|chain|symmetry|markov|all")
      ->required();

  auto* figdata = app.add_subcommand("figdata", "Emit figure-data CSVs");
  figdata->set_help_flag("--help", "print help");
  figdata->add_option("fig", fig, "fig1|fig2|fig3|fig4")->required();
  figdata->add_option("config", config_path, "config file")->required();
  figdata->add_option("--T", T, "override integrator.T");
  figdata->add_option("--h", h, "override integrator.h");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, T, h);
    if (verify->parsed()) return cmd_verify(suite);
    return cmd_figdata(fig, config_path, T, h);
  } catch (const fqsd::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const fqsd::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
