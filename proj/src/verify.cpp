#include "fqsd/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <json.hpp>

#include "fqsd/grassmann.hpp"
#include "fqsd/master.hpp"
#include "fqsd/models.hpp"
#include "fqsd/oracle.hpp"
#include "fqsd/qops.hpp"
#include "fqsd/types.hpp"

namespace fqsd {

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void add_check(SuiteReport& r, std::string name, double measured, double tol) {
  r.checks.push_back({std::move(name), measured, tol, measured <= tol});
}

const Mat& traj_state_at(const Trajectory& traj, double t) {
  auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t - 1e-9);
  if (it == traj.times.end()) --it;
  return traj.states[std::size_t(it - traj.times.begin())];
}

Mat pure_density(const Vec& psi) { return psi * psi.adjoint(); }

/// Max trace distance between the master-equation trajectory and the exact
/// composite-evolution oracle, compared on the oracle's sample grid.
double master_vs_oracle(const ModelSpec& model, const std::vector<Mode>& modes,
                        double T, double h, double sample_h) {
  auto kernel = CorrelationKernel::discrete_modes(modes);
  Vec psi0 = model.default_state();

  IntegrateOptions opts;
  opts.max_stored_samples = static_cast<int>(std::llround(T / h)) + 1;
  auto traj = integrate(model, kernel, pure_density(psi0), T, h, opts);

  CompositeSpec comp{model, modes};
  auto orc = exact_evolve(comp, compose_with_vacuum(comp, psi0), T, sample_h);

  double worst = 0;
  for (std::size_t i = 0; i < orc.times.size(); ++i)
    worst = std::max(worst, trace_distance(traj_state_at(traj, orc.times[i]), orc.rho[i]));
  return worst;
}

/// Max entrywise deviation between the Berezin-mean reduced density of the
/// Grassmann micro propagation and the oracle partial trace.
double recovery_deviation(const std::vector<Mode>& modes, double T, double h) {
  auto model = build_one_qubit(1.0);
  Vec psi0 = model.default_state();

  std::vector<double> samples;
  for (double t = 0.25; t <= T + 1e-9; t += 0.25) samples.push_back(t);
  auto states = micro_qsd_propagate(model, modes, psi0, T, h, samples);

  CompositeSpec comp{model, modes};
  auto orc = exact_evolve(comp, compose_with_vacuum(comp, psi0), T, 0.25);

  double worst = 0;
  for (const auto& st : states) {
    Mat rho = reduced_density(st, static_cast<int>(modes.size()));
    std::size_t k = static_cast<std::size_t>(std::llround(st.t / 0.25));
    worst = std::max(worst, (rho - orc.rho[k]).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

bool SuiteReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

SuiteReport verify_novikov() {
  SuiteReport r{.suite = "novikov"};
  double t0 = now_s();

  auto model = build_one_qubit(1.0);
  std::vector<Mode> modes{{cplx(1.0, 0.0), 1.0}};
  std::vector<double> samples{0.25, 0.5, 1.0};
  auto rep = novikov_check(model, modes, 1e-3, samples);

  r.times = rep.times;
  add_check(r, "identity_1_max_residual", rep.max_residual_1, 1e-8);
  add_check(r, "identity_2_max_residual", rep.max_residual_2, 1e-8);
  r.extra.emplace_back("novikov_max",
                       std::max(rep.max_residual_1, rep.max_residual_2));
  r.runtime_s = now_s() - t0;
  return r;
}

SuiteReport verify_recovery() {
  SuiteReport r{.suite = "recovery"};
  double t0 = now_s();

  std::vector<Mode> one{{cplx(0.8, 0.0), 1.5}};
  std::vector<Mode> two{{cplx(0.6, 0.0), 1.0}, {cplx(0.5, 0.0), 1.8}};
  double d1 = recovery_deviation(one, 1.0, 1e-3);
  double d2 = recovery_deviation(two, 1.0, 1e-3);

  for (double t = 0.25; t <= 1.0 + 1e-9; t += 0.25) r.times.push_back(t);
  add_check(r, "one_mode_max_entry_deviation", d1, 1e-6);
  add_check(r, "two_mode_max_entry_deviation", d2, 1e-6);
  r.extra.emplace_back("recovery_max", std::max(d1, d2));
  r.runtime_s = now_s() - t0;
  return r;
}

SuiteReport verify_oracle() {
  SuiteReport r{.suite = "oracle"};
  double t0 = now_s();

  auto model = build_one_qubit(1.0);
  std::vector<Mode> single{{cplx(0.8, 0.0), 1.5}};
  std::vector<Mode> three{{cplx(0.5, 0.0), 0.5},
                          {cplx(0.4, 0.0), 1.0},
                          {cplx(0.3, 0.0), 2.0}};
  add_check(r, "single_mode_trace_distance",
            master_vs_oracle(model, single, 3.0, 1e-3, 0.01), 1e-4);
  add_check(r, "three_mode_trace_distance",
            master_vs_oracle(model, three, 3.0, 1e-3, 0.01), 1e-4);
  r.runtime_s = now_s() - t0;
  return r;
}

SuiteReport verify_chain() {
  SuiteReport r{.suite = "chain"};
  double t0 = now_s();

  for (int N : {2, 4, 8})
    add_check(r, "fermionized_chain_spectrum_N" + std::to_string(N),
              chain_equivalence(N), 1e-10);
  add_check(r, "single_excitation_block_N8",
            chain_single_excitation_deviation(8), 1e-10);
  r.runtime_s = now_s() - t0;
  return r;
}

SuiteReport verify_symmetry() {
  SuiteReport r{.suite = "symmetry"};
  double t0 = now_s();

  TwoQubitParams p;
  p.omega_A = p.omega_B = 1.0;
  p.kappa_A = p.kappa_B = 1.0;
  p.J_xy = 0.5;
  p.J_z = 0.25;
  auto model = build_two_qubit(p);
  auto kernel = CorrelationKernel::ohmic_zero_t(0.1, 1.0);
  auto series = solve_two_qubit_zeroth(model, kernel, 10.0, 2e-3);

  double d12 = 0, d34 = 0;
  for (int k = 0; k < series.coeffs.cols(); ++k) {
    d12 = std::max(d12, std::abs(std::abs(series.coeffs(0, k)) -
                                 std::abs(series.coeffs(1, k))));
    d34 = std::max(d34, std::abs(std::abs(series.coeffs(2, k)) -
                                 std::abs(series.coeffs(3, k))));
  }
  add_check(r, "abs_F1_minus_abs_F2", d12, 1e-10);
  add_check(r, "abs_F3_minus_abs_F4", d34, 1e-10);
  r.runtime_s = now_s() - t0;
  return r;
}

SuiteReport verify_markov() {
  SuiteReport r{.suite = "markov"};
  double t0 = now_s();

  auto model = build_one_qubit(1.0);
  Mat rho0 = pure_density(model.default_state());
  double d100 = markov_limit_check(model, 100.0, rho0, 5.0);
  double d1000 = markov_limit_check(model, 1000.0, rho0, 5.0);

  add_check(r, "trace_distance_gamma100", d100, 1e-2);
  r.checks.push_back({"gamma1000_below_gamma100", d1000, d100, d1000 < d100});
  r.extra.emplace_back("trace_distance_gamma1000", d1000);
  r.runtime_s = now_s() - t0;
  return r;
}

std::vector<SuiteReport> run_verify(const std::string& suite) {
  if (suite == "all")
    return {verify_novikov(), verify_recovery(), verify_oracle(),
            verify_chain(),   verify_symmetry(), verify_markov()};
  if (suite == "novikov") return {verify_novikov()};
  if (suite == "recovery") return {verify_recovery()};
  if (suite == "oracle") return {verify_oracle()};
  if (suite == "chain") return {verify_chain()};
  if (suite == "symmetry") return {verify_symmetry()};
  if (suite == "markov") return {verify_markov()};
  throw ConfigError("unknown verify suite '" + suite +
                    "' (expected novikov|recovery|oracle|chain|symmetry|markov|all)");
}

std::string suites_to_json(const std::vector<SuiteReport>& reports) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : reports) {
    nlohmann::json js;
    js["suite"] = s.suite;
    js["passed"] = s.all_passed();
    js["runtime_s"] = s.runtime_s;
    js["checks"] = nlohmann::json::array();
    for (const auto& c : s.checks)
      js["checks"].push_back({{"name", c.name},
                              {"measured", c.measured},
                              {"tolerance", c.tolerance},
                              {"passed", c.passed}});
    if (!s.times.empty()) js["times"] = s.times;
    for (const auto& [key, value] : s.extra) js[key] = value;
    out.push_back(js);
  }
  return out.dump(2) + "\n";
}

}  // namespace fqsd
