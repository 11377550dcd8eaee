#include "fqsd/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>

#include "fqsd/csv.hpp"
#include "fqsd/observables.hpp"
#include "fqsd/qops.hpp"

namespace fqsd {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

const json& need(const json& j, const char* key, const char* block) {
  auto it = j.find(key);
  if (it == j.end())
    fail(std::string(block) + "." + key + ": required field is missing");
  return *it;
}

double as_num(const json& v, const std::string& what) {
  if (!v.is_number()) fail(what + ": expected a number");
  return v.get<double>();
}

double num_field(const json& j, const char* block, const char* key) {
  return as_num(need(j, key, block), std::string(block) + "." + key);
}

double num_field_or(const json& j, const char* block, const char* key, double fb) {
  auto it = j.find(key);
  return it == j.end() ? fb : as_num(*it, std::string(block) + "." + key);
}

int int_field_or(const json& j, const char* block, const char* key, int fb) {
  auto it = j.find(key);
  if (it == j.end()) return fb;
  const double v = as_num(*it, std::string(block) + "." + key);
  if (v != std::floor(v))
    fail(std::string(block) + "." + key + ": expected an integer");
  return static_cast<int>(v);
}

cplx cplx_field(const json& v, const std::string& what) {
  if (v.is_number()) return cplx(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return cplx(v[0].get<double>(), v[1].get<double>());
  fail(what + ": expected a number or a [re, im] pair");
}

std::string str_field(const json& j, const char* block, const char* key) {
  const json& v = need(j, key, block);
  if (!v.is_string()) fail(std::string(block) + "." + key + ": expected a string");
  return v.get<std::string>();
}

ModelSpec parse_model(const json& j) {
  if (!j.is_object()) fail("model: expected an object");
  const std::string kind = str_field(j, "model", "kind");
  if (kind == "one_qubit") return build_one_qubit(num_field_or(j, "model", "omega", 1.0));
  if (kind == "two_qubit") {
    TwoQubitParams p;
    p.omega_A = num_field_or(j, "model", "omega_A", 1.0);
    p.omega_B = num_field_or(j, "model", "omega_B", 1.0);
    p.J_xy = num_field_or(j, "model", "J_xy", 0.0);
    p.J_z = num_field_or(j, "model", "J_z", 0.0);
    p.kappa_A = num_field_or(j, "model", "kappa_A", 1.0);
    p.kappa_B = num_field_or(j, "model", "kappa_B", 1.0);
    return build_two_qubit(p);
  }
  if (kind == "qbm") {
    const double wm = num_field_or(j, "model", "omega_m", 1.0);
    if (wm < 0) fail("model.omega_m: must be >= 0");
    const int n_max = int_field_or(j, "model", "n_max", 30);
    if (n_max < 2 || n_max > 200) fail("model.n_max: expected 2 <= n_max <= 200");
    return build_qbm(wm, n_max);
  }
  if (kind == "n_fermion") {
    const json& fr = need(j, "frequencies", "model");
    if (!fr.is_array() || fr.empty() || fr.size() > 10)
      fail("model.frequencies: expected an array of 1..10 numbers");
    std::vector<double> A;
    for (const auto& v : fr) A.push_back(as_num(v, "model.frequencies[]"));
    return build_n_fermion(A);
  }
  if (kind == "n_boson")
    return build_n_boson(num_field(j, "model", "omega_1"),
                         num_field(j, "model", "omega_2"));
  fail("model.kind: unknown kind '" + kind +
       "' (expected one_qubit|two_qubit|qbm|n_fermion|n_boson)");
}

CorrelationKernel parse_kernel(const json& j) {
  if (!j.is_object()) fail("kernel: expected an object");
  const std::string type = str_field(j, "kernel", "type");
  if (type == "single_mode")
    return CorrelationKernel::single_mode(cplx_field(need(j, "g", "kernel"), "kernel.g"),
                                          num_field(j, "kernel", "omega_b"));
  if (type == "discrete_modes") {
    const json& ms = need(j, "modes", "kernel");
    if (!ms.is_array() || ms.empty() || ms.size() > 64)
      fail("kernel.modes: expected an array of 1..64 {g, omega} entries");
    std::vector<Mode> modes;
    for (const auto& m : ms)
      modes.push_back({cplx_field(need(m, "g", "kernel.modes[]"), "kernel.modes[].g"),
                       as_num(need(m, "omega", "kernel.modes[]"), "kernel.modes[].omega")});
    return CorrelationKernel::discrete_modes(std::move(modes));
  }
  if (type == "ornstein_uhlenbeck") {
    const double gamma = num_field(j, "kernel", "gamma");
    if (!(gamma > 0)) fail("kernel.gamma: must be > 0");
    return CorrelationKernel::ornstein_uhlenbeck(gamma,
                                                 num_field_or(j, "kernel", "Omega", 0.0));
  }
  if (type == "ohmic") {
    const double Gamma = num_field(j, "kernel", "Gamma");
    const double omega_c = num_field(j, "kernel", "omega_c");
    if (!(Gamma > 0)) fail("kernel.Gamma: must be > 0");
    if (!(omega_c > 0)) fail("kernel.omega_c: must be > 0");
    return CorrelationKernel::ohmic_zero_t(Gamma, omega_c);
  }
  fail("kernel.type: unknown type '" + type +
       "' (expected single_mode|discrete_modes|ornstein_uhlenbeck|ohmic)");
}

Mat parse_initial_state(const json& j, const ModelSpec& model) {
  Vec psi;
  auto it = j.find("initial_state");
  if (it == j.end() || (it->is_object() &&
                        str_field(*it, "initial_state", "type") == "default")) {
    if (model.kind == ModelKind::NBoson) return Mat();
    psi = model.default_state();
  } else {
    if (model.kind == ModelKind::NBoson)
      fail("initial_state: n_boson runs emit coefficient traces only and take no state");
    const std::string type = str_field(*it, "initial_state", "type");
    if (type != "vector")
      fail("initial_state.type: expected 'default' or 'vector'");
    const json& amps = need(*it, "amplitudes", "initial_state");
    if (!amps.is_array() || static_cast<int>(amps.size()) != model.dim)
      fail("initial_state.amplitudes: expected " + std::to_string(model.dim) +
           " entries for this model");
    psi = Vec::Zero(model.dim);
    for (int i = 0; i < model.dim; ++i)
      psi(i) = cplx_field(amps[std::size_t(i)], "initial_state.amplitudes[]");
    const double nrm = psi.norm();
    if (std::abs(nrm - 1.0) > 1e-6)
      fail("initial_state.amplitudes: norm is " + std::to_string(nrm) +
           ", expected a normalized state");
    psi /= nrm;
  }
  if (psi.size() == 0) return Mat();
  return psi * psi.adjoint();
}

void validate_observables(const std::vector<std::string>& obs, const ModelSpec& model) {
  for (const auto& name : obs) {
    if (name == "rho21" || name == "populations") continue;
    if (name == "concurrence") {
      if (model.kind != ModelKind::TwoQubit)
        fail("outputs.observables: 'concurrence' requires a two_qubit model");
      continue;
    }
    if (name == "mean_q" || name == "mean_p") {
      if (model.kind != ModelKind::QBM)
        fail("outputs.observables: '" + name + "' requires a qbm model");
      continue;
    }
    fail("outputs.observables: unknown observable '" + name +
         "' (expected rho21|populations|concurrence|mean_q|mean_p)");
  }
  if (model.kind == ModelKind::NBoson && !obs.empty())
    fail("outputs.observables: n_boson runs emit coefficient traces only");
}

bool filesystem_safe(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

/// Everything run_single produces, kept in memory long enough to assemble
/// sweep-combined CSVs and the manifest.
struct SingleOut {
  std::vector<FileRecord> files;
  json run_entry;
  bool numerical_failure = false;
  std::string message;
  double max_trace_err = 0, max_herm_err = 0;
  double min_eig = 1.0;
  std::vector<double> times;
  std::vector<std::pair<std::string, std::vector<double>>> obs_cols;
};

CsvTable coefficients_table(const ModelSpec& model, const QbarSeries& s) {
  const auto names = coefficient_names(model);
  CsvTable tb;
  tb.header.push_back("t");
  for (const auto& n : names) {
    tb.header.push_back("re_" + n);
    tb.header.push_back("im_" + n);
    tb.header.push_back("abs_" + n);
  }
  tb.header.push_back("singular");
  const int nc = static_cast<int>(names.size());
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    std::vector<std::string> row;
    row.push_back(format_value(s.times[k]));
    for (int i = 0; i < nc; ++i) {
      const cplx v = s.coeffs(i, static_cast<int>(k));
      row.push_back(format_value(v.real()));
      row.push_back(format_value(v.imag()));
      row.push_back(format_value(std::abs(v)));
    }
    row.push_back(s.singular[k] ? "1" : "0");
    tb.rows.push_back(std::move(row));
  }
  return tb;
}

CsvTable trajectory_table(const Trajectory& traj) {
  const int d = traj.states.empty() ? 0 : static_cast<int>(traj.states[0].rows());
  CsvTable tb;
  tb.header.push_back("t");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      tb.header.push_back("re_rho_" + std::to_string(i) + "_" + std::to_string(j));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      tb.header.push_back("im_rho_" + std::to_string(i) + "_" + std::to_string(j));
  tb.header.insert(tb.header.end(), {"trace_err", "herm_err", "min_eig"});
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    std::vector<std::string> row;
    row.reserve(tb.header.size());
    row.push_back(format_value(traj.times[k]));
    const Mat& rho = traj.states[k];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) row.push_back(format_value(rho(i, j).real()));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) row.push_back(format_value(rho(i, j).imag()));
    row.push_back(format_value(traj.trace_err[k]));
    row.push_back(format_value(traj.herm_err[k]));
    row.push_back(format_value(traj.min_eig[k]));
    tb.rows.push_back(std::move(row));
  }
  return tb;
}

void build_observable_columns(const RunConfig& cfg, const Trajectory& traj,
                              SingleOut& out) {
  const auto& states = traj.states;
  auto add = [&](const std::string& name, std::vector<double> col) {
    out.obs_cols.emplace_back(name, std::move(col));
  };
  for (const auto& name : cfg.observables) {
    std::vector<double> a, b;
    a.reserve(states.size());
    if (name == "rho21") {
      b.reserve(states.size());
      for (const Mat& r : states) {
        a.push_back(r(1, 0).real());
        b.push_back(r(1, 0).imag());
      }
      add("re_rho21", std::move(a));
      add("im_rho21", std::move(b));
    } else if (name == "populations") {
      for (int i = 0; i < cfg.model.dim; ++i) {
        std::vector<double> pop;
        pop.reserve(states.size());
        for (const Mat& r : states) pop.push_back(r(i, i).real());
        add("pop_" + std::to_string(i), std::move(pop));
      }
    } else if (name == "concurrence") {
      for (const Mat& r : states) a.push_back(concurrence(r));
      add("concurrence", std::move(a));
    } else if (name == "mean_q") {
      for (const Mat& r : states)
        a.push_back(expectation(r, cfg.model.q_basis[0]).real());
      add("mean_q", std::move(a));
    } else if (name == "mean_p") {
      for (const Mat& r : states)
        a.push_back(expectation(r, cfg.model.q_basis[1]).real());
      add("mean_p", std::move(a));
    }
  }
}

SingleOut run_single(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  SingleOut out;
  json inv;

  if (cfg.model.kind == ModelKind::NBoson) {
    const QbarSeries series =
        solve_coefficients(cfg.model, *cfg.kernel, cfg.T, cfg.h);
    const auto path = out_dir / (cfg.prefix + "_coefficients.csv");
    out.files.push_back({cfg.prefix + "_coefficients.csv",
                         write_text_file(path, to_csv(coefficients_table(cfg.model, series)))});
    const int ks = series.first_singular();
    inv["singular_steps"] =
        static_cast<int>(std::count(series.singular.begin(), series.singular.end(), 1));
    if (ks >= 0) {
      out.numerical_failure = true;
      out.message = "coefficient divergence flagged at t = " +
                    std::to_string(series.times[std::size_t(ks)]);
    }
    out.run_entry["invariants"] = inv;
    out.run_entry["numerical_failure"] = out.numerical_failure;
    return out;
  }

  IntegrateOptions opts;
  opts.source = cfg.source;
  opts.max_stored_samples = cfg.stored_samples;
  const Trajectory traj =
      integrate(cfg.model, *cfg.kernel, cfg.rho0, cfg.T, cfg.h, opts);

  auto write = [&](const std::string& stem, const CsvTable& tb) {
    out.files.push_back(
        {stem, write_text_file(out_dir / stem, to_csv(tb))});
  };
  write(cfg.prefix + "_trajectory.csv", trajectory_table(traj));
  write(cfg.prefix + "_coefficients.csv", coefficients_table(cfg.model, traj.series));

  out.times = traj.times;
  build_observable_columns(cfg, traj, out);
  if (!cfg.observables.empty()) {
    CsvTable tb;
    tb.header.push_back("t");
    for (const auto& [name, col] : out.obs_cols) tb.header.push_back(name);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      std::vector<std::string> row;
      row.push_back(format_value(traj.times[k]));
      for (const auto& [name, col] : out.obs_cols)
        row.push_back(format_value(col[k]));
      tb.rows.push_back(std::move(row));
    }
    write(cfg.prefix + "_observables.csv", tb);
  }

  out.numerical_failure = traj.truncated;
  out.message = traj.note;
  out.max_trace_err = traj.max_trace_err;
  out.max_herm_err = traj.max_herm_err;
  out.min_eig = traj.min_eig_min;

  int trace_violations = 0, herm_violations = 0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    trace_violations += traj.trace_err[k] > 1e-10;
    herm_violations += traj.herm_err[k] > 1e-10;
  }
  inv["max_trace_err"] = traj.max_trace_err;
  inv["max_herm_err"] = traj.max_herm_err;
  inv["min_eig"] = traj.min_eig_min;
  inv["trace_violations"] = trace_violations;
  inv["herm_violations"] = herm_violations;
  inv["singular_steps"] = static_cast<int>(
      std::count(traj.series.singular.begin(), traj.series.singular.end(), 1));
  out.run_entry["invariants"] = inv;
  out.run_entry["numerical_failure"] = out.numerical_failure;
  if (!out.message.empty()) out.run_entry["note"] = out.message;
  return out;
}

std::string short_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::vector<std::string> coefficient_names(const ModelSpec& model) {
  if (model.kind == ModelKind::TwoQubit) return {"F1", "F2", "F3", "F4"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < model.q_init.size(); ++i)
    names.push_back("X" + std::to_string(i + 1));
  return names;
}

RunConfig parse_run_config(const nlohmann::json& j) {
  if (!j.is_object()) fail("config: expected a JSON object");
  RunConfig cfg;
  cfg.raw = j;
  cfg.model = parse_model(need(j, "model", "config"));
  cfg.kernel = parse_kernel(need(j, "kernel", "config"));

  const json& integ = need(j, "integrator", "config");
  cfg.T = num_field(integ, "integrator", "T");
  cfg.h = num_field(integ, "integrator", "h");
  if (!(cfg.T > 0)) fail("integrator.T: must be > 0");
  if (!(cfg.h > 0)) fail("integrator.h: must be > 0");
  if (cfg.h > cfg.T / 10.0 + 1e-15)
    fail("integrator.h: h = " + std::to_string(cfg.h) +
         " violates h <= T/10 (T = " + std::to_string(cfg.T) + ")");
  const double ratio = cfg.T / cfg.h;
  if (std::abs(ratio - std::llround(ratio)) > 1e-9 * std::max(1.0, ratio))
    fail("integrator: T must be an integer multiple of h");

  auto it = integ.find("coeff_source");
  const std::string src = it == integ.end() ? "grid" : it->get<std::string>();
  if (src == "grid") cfg.source = CoeffSource::Grid;
  else if (src == "direct") cfg.source = CoeffSource::Direct;
  else if (src == "closed_form") cfg.source = CoeffSource::ClosedForm;
  else fail("integrator.coeff_source: expected grid|direct|closed_form");
  if (cfg.source != CoeffSource::Grid && !cfg.kernel->has_exponential_form())
    fail("integrator.coeff_source: '" + src +
         "' needs an exponential-form kernel; the ohmic kernel supports grid only");
  if (cfg.source == CoeffSource::ClosedForm && cfg.model.kind != ModelKind::OneQubit)
    fail("integrator.coeff_source: closed_form applies to the one_qubit model only");
  if (cfg.model.kind == ModelKind::NBoson) {
    const int cap = SolveOptions{}.three_time_cap;
    if (ratio > cap)
      fail("integrator: n_boson coefficient runs are capped at " +
           std::to_string(cap) + " steps (T/h = " + std::to_string(ratio) + ")");
  }

  cfg.rho0 = parse_initial_state(j, cfg.model);

  if (auto out = j.find("outputs"); out != j.end()) {
    if (!out->is_object()) fail("outputs: expected an object");
    if (auto d = out->find("dir"); d != out->end()) cfg.out_dir = d->get<std::string>();
    if (auto p = out->find("prefix"); p != out->end()) cfg.prefix = p->get<std::string>();
    if (auto o = out->find("observables"); o != out->end()) {
      if (!o->is_array()) fail("outputs.observables: expected an array of names");
      for (const auto& v : *o) cfg.observables.push_back(v.get<std::string>());
    }
    cfg.stored_samples = int_field_or(*out, "outputs", "stored_samples", 2001);
    if (cfg.stored_samples < 2) fail("outputs.stored_samples: must be >= 2");
  }
  if (!filesystem_safe(cfg.prefix))
    fail("outputs.prefix: expected [A-Za-z0-9_-]+ characters only");
  validate_observables(cfg.observables, cfg.model);

  if (auto sw = j.find("sweep"); sw != j.end()) {
    SweepSpec spec;
    spec.pointer = str_field(*sw, "sweep", "parameter");
    if (spec.pointer.rfind("/model/", 0) != 0 && spec.pointer.rfind("/kernel/", 0) != 0)
      fail("sweep.parameter: expected a JSON pointer into /model or /kernel");
    if (!j.contains(nlohmann::json::json_pointer(spec.pointer)))
      fail("sweep.parameter: '" + spec.pointer + "' does not exist in the config");
    const json& vals = need(*sw, "values", "sweep");
    if (!vals.is_array() || vals.empty())
      fail("sweep.values: expected a nonempty array of numbers");
    for (const auto& v : vals) spec.values.push_back(as_num(v, "sweep.values[]"));
    cfg.sweep = std::move(spec);
  }
  return cfg;
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("config file not found: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail("config parse error in " + path.string() + ": " + e.what());
  }
  return j;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(load_json_file(path));
}

std::filesystem::path resolve_output_dir(const std::filesystem::path& configured) {
  if (const char* env = std::getenv("FQSD_OUTPUT_DIR"); env && *env) return env;
  return configured;
}

RunResult execute_run(const RunConfig& cfg) {
  const std::filesystem::path out_dir = resolve_output_dir(cfg.out_dir);

  std::vector<SingleOut> outs;
  std::vector<double> values;
  if (!cfg.sweep) {
    outs.push_back(run_single(cfg, out_dir));
    outs.back().run_entry["prefix"] = cfg.prefix;
  } else {
    const SweepSpec& sw = *cfg.sweep;
    values = sw.values;
    std::vector<RunConfig> subs;
    for (std::size_t i = 0; i < sw.values.size(); ++i) {
      json patched = cfg.raw;
      patched.erase("sweep");
      patched.at(nlohmann::json::json_pointer(sw.pointer)) = sw.values[i];
      patched["outputs"]["prefix"] = cfg.prefix + "_s" + std::to_string(i);
      subs.push_back(parse_run_config(patched));
    }
    std::vector<std::future<SingleOut>> futs;
    futs.reserve(subs.size());
    for (const RunConfig& sub : subs)
      futs.push_back(std::async(std::launch::async,
                                [&sub, &out_dir] { return run_single(sub, out_dir); }));
    for (std::size_t i = 0; i < futs.size(); ++i) {
      outs.push_back(futs[i].get());
      outs.back().run_entry["prefix"] = subs[i].prefix;
      outs.back().run_entry["value"] = sw.values[i];
    }
  }

  RunResult result;
  result.out_dir = out_dir;
  json manifest;
  manifest["tool"] = "fqsd";
  manifest["version"] = FQSD_VERSION;
  manifest["config"] = cfg.raw;
  manifest["runs"] = json::array();
  for (auto& o : outs) {
    manifest["runs"].push_back(o.run_entry);
    for (auto& f : o.files) result.files.push_back(f);
    if (o.numerical_failure) {
      result.numerical_failure = true;
      if (!result.message.empty()) result.message += "; ";
      result.message += o.message;
    }
    result.max_trace_err = std::max(result.max_trace_err, o.max_trace_err);
    result.max_herm_err = std::max(result.max_herm_err, o.max_herm_err);
    result.min_eig = std::min(result.min_eig, o.min_eig);
  }

  // Sweep-combined CSVs, one per scalar observable, one column per value.
  if (cfg.sweep && !outs.empty()) {
    static const std::map<std::string, std::vector<std::string>> combinable = {
        {"concurrence", {"concurrence"}},
        {"mean_q", {"mean_q"}},
        {"mean_p", {"mean_p"}},
        {"rho21", {"re_rho21", "im_rho21"}}};
    std::size_t n_rows = outs[0].times.size();
    for (const auto& o : outs) n_rows = std::min(n_rows, o.times.size());
    for (const auto& obs : cfg.observables) {
      auto entry = combinable.find(obs);
      if (entry == combinable.end()) continue;
      CsvTable tb;
      tb.header.push_back("t");
      std::vector<const std::vector<double>*> cols;
      for (std::size_t i = 0; i < outs.size(); ++i)
        for (const auto& cname : entry->second)
          for (const auto& [name, col] : outs[i].obs_cols)
            if (name == cname) {
              tb.header.push_back(cname + "_" + short_label(values[i]));
              cols.push_back(&col);
            }
      for (std::size_t k = 0; k < n_rows; ++k) {
        std::vector<std::string> row;
        row.push_back(format_value(outs[0].times[k]));
        for (const auto* col : cols) row.push_back(format_value((*col)[k]));
        tb.rows.push_back(std::move(row));
      }
      const std::string stem = cfg.prefix + "_" + obs + "_sweep.csv";
      result.files.push_back({stem, write_text_file(out_dir / stem, to_csv(tb))});
    }
  }

  manifest["files"] = json::array();
  for (const auto& f : result.files)
    manifest["files"].push_back({{"path", f.path}, {"fnv1a64", f.hash}});
  const std::string stem = cfg.prefix + "_manifest.json";
  const std::string bytes = manifest.dump(2) + "\n";
  result.files.push_back({stem, write_text_file(out_dir / stem, bytes)});
  return result;
}

}  // namespace fqsd
