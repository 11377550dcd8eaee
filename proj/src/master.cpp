#include "fqsd/master.hpp"

#include <cmath>

namespace fqsd {

namespace {

int step_count_checked(double T, double h) {
  if (!(T > 0) || !(h > 0)) throw ConfigError("integrate: require T > 0 and h > 0");
  const auto n = static_cast<int>(std::llround(T / h));
  if (n < 1 || std::abs(n * h - T) > 1e-9 * std::max(1.0, T))
    throw ConfigError("integrate: T must be an integer multiple of h");
  return n;
}

void check_initial_state(const ModelSpec& model, const Mat& rho0) {
  if (rho0.rows() != model.dim || rho0.cols() != model.dim)
    throw ConfigError("integrate: initial state dimension mismatch");
  if (std::abs(rho0.trace() - cplx(1.0)) > 1e-8)
    throw ConfigError("integrate: initial state must have unit trace");
  if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw ConfigError("integrate: initial state must be Hermitian");
}

struct InvariantTracker {
  Trajectory* traj;
  int stride, n;

  void record(int k, double t, const Mat& rho) {
    const double terr = std::abs(rho.trace() - cplx(1.0));
    const double herr = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    traj->max_trace_err = std::max(traj->max_trace_err, terr);
    traj->max_herm_err = std::max(traj->max_herm_err, herr);
    if (k % stride == 0 || k == n) {
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()));
      const double me = es.eigenvalues().minCoeff();
      traj->min_eig_min = std::min(traj->min_eig_min, me);
      traj->times.push_back(t);
      traj->states.push_back(rho);
      traj->trace_err.push_back(terr);
      traj->herm_err.push_back(herr);
      traj->min_eig.push_back(me);
    }
  }
};

Trajectory integrate_with_series(const ModelSpec& model, const QbarSeries& series,
                                 const Mat& rho0, double T, double h,
                                 const IntegrateOptions& opts) {
  const int n = step_count_checked(T, h);
  const int nq = static_cast<int>(model.q_init.size());
  if (series.n_coeff() < nq)
    throw ConfigError("integrate: coefficient series shorter than basis");

  Trajectory traj;
  traj.series = series;
  traj.min_eig_min = 1.0;
  const int stride = n <= opts.max_stored_samples - 1
                         ? 1
                         : (n + opts.max_stored_samples - 2) /
                               (opts.max_stored_samples - 1);
  InvariantTracker tracker{&traj, stride, n};

  // Integrate only while the coefficients are alive.
  int n_run = n;
  const int ksing = series.first_singular();
  if (ksing >= 0) {
    n_run = std::max(ksing - 1, 0);
    traj.truncated = true;
    traj.truncated_at = n_run * h;
    traj.note = "coefficient divergence flagged at t = " +
                std::to_string(series.times[ksing]);
  }

  auto qbar_at = [&](double t) -> Mat {
    const Vec X = series.at(t);
    Mat Q = Mat::Zero(model.dim, model.dim);
    for (int i = 0; i < nq; ++i) Q += X(i) * model.q_basis[i];
    return Q;
  };
  auto rhs = [&](double t, const Mat& rho) {
    return master_rhs(model, qbar_at(t), rho);
  };

  Mat rho = rho0;
  tracker.record(0, 0.0, rho);
  if (opts.observer) opts.observer(0.0, rho);
  for (int k = 0; k < n_run; ++k) {
    const double t = k * h;
    const Mat k1 = rhs(t, rho);
    const Mat k2 = rhs(t + 0.5 * h, rho + (0.5 * h) * k1);
    const Mat k3 = rhs(t + 0.5 * h, rho + (0.5 * h) * k2);
    const Mat k4 = rhs(t + h, rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!rho.allFinite())
      throw NumericalError("integrate: non-finite state at t = " +
                           std::to_string(t + h));
    tracker.record(k + 1, (k + 1) * h, rho);
    if (opts.observer) opts.observer((k + 1) * h, rho);
  }
  return traj;
}

// Amplitude representation of the one-qubit master equation. With
// A(t) = exp(-int_0^t X1) the solution is
//   rho_ee(t) = rho_ee(0) |A|^2,   rho_eg(t) = rho_eg(0) e^{-i w t} A(t),
// and A itself obeys the linear system
//   A' = -sum_m W_m,   W_m' = a_m A + (i w - b_m) W_m,
// which stays regular where X1 = sum W_m / A blows up.
Trajectory integrate_closed_form(const ModelSpec& model,
                                 const CorrelationKernel& kernel, const Mat& rho0,
                                 double T, double h, const IntegrateOptions& opts) {
  if (model.kind != ModelKind::OneQubit)
    throw ConfigError("closed_form coefficients exist only for the one_qubit model");
  const auto em = kernel.exponential_modes();  // rejects Ohmic
  const int M = static_cast<int>(em.size());
  const int n = step_count_checked(T, h);
  const double w = model.omega;

  Trajectory traj;
  traj.min_eig_min = 1.0;
  traj.series.times.resize(n + 1);
  traj.series.coeffs = Mat::Zero(1, n + 1);
  traj.series.singular.assign(n + 1, 0);

  const int stride = n <= opts.max_stored_samples - 1
                         ? 1
                         : (n + opts.max_stored_samples - 2) /
                               (opts.max_stored_samples - 1);
  InvariantTracker tracker{&traj, stride, n};

  using State = Eigen::VectorXcd;
  State y = State::Zero(M + 1);
  y(0) = 1.0;  // A(0) = 1, W_m(0) = 0
  auto rhs = [&](const State& s) {
    State d(M + 1);
    d(0) = -s.tail(M).sum();
    for (int m = 0; m < M; ++m)
      d(m + 1) = em[m].first * s(0) + (I * w - em[m].second) * s(m + 1);
    return d;
  };
  auto emit = [&](int k, double t, cplx A, const State& s) {
    Mat rho(2, 2);
    rho(0, 0) = rho0(0, 0) * std::norm(A);
    rho(0, 1) = rho0(0, 1) * std::exp(-I * w * t) * A;
    rho(1, 0) = rho0(1, 0) * std::exp(I * w * t) * std::conj(A);
    rho(1, 1) = 1.0 - rho(0, 0);
    tracker.record(k, t, rho);
    if (opts.observer) opts.observer(t, rho);
    traj.series.times[k] = t;
    const cplx X1 = s.tail(M).sum() / A;
    traj.series.coeffs(0, k) = X1;
    if (!std::isfinite(std::abs(X1)) || std::abs(X1) > opts.solve.divergence_threshold)
      traj.series.singular[k] = 1;
  };

  emit(0, 0.0, y(0), y);
  for (int k = 0; k < n; ++k) {
    const State k1 = rhs(y);
    const State k2 = rhs(y + (0.5 * h) * k1);
    const State k3 = rhs(y + (0.5 * h) * k2);
    const State k4 = rhs(y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!y.allFinite())
      throw NumericalError("integrate: non-finite amplitude at t = " +
                           std::to_string((k + 1) * h));
    emit(k + 1, (k + 1) * h, y(0), y);
  }
  return traj;
}

}  // namespace

Mat master_rhs(const ModelSpec& model, const Mat& Qbar, const Mat& rho) {
  const Mat rQd = rho * Qbar.adjoint();
  const Mat Qr = Qbar * rho;
  return -I * (model.H_s * rho - rho * model.H_s) + model.L * rQd -
         rQd * model.L + Qr * model.L.adjoint() - model.L.adjoint() * Qr;
}

Trajectory integrate(const ModelSpec& model, const CorrelationKernel& kernel,
                     const Mat& rho0, double T, double h,
                     const IntegrateOptions& opts) {
  check_initial_state(model, rho0);
  if (model.kind == ModelKind::NBoson)
    throw ConfigError(
        "integrate: the n_boson model has no noise-free master equation; "
        "use its coefficient traces instead");
  if (opts.source == CoeffSource::ClosedForm)
    return integrate_closed_form(model, kernel, rho0, T, h, opts);
  const CoeffMethod method = opts.source == CoeffSource::Direct
                                 ? CoeffMethod::Direct
                                 : CoeffMethod::Grid;
  const QbarSeries series =
      solve_coefficients(model, kernel, T, h, method, opts.solve);
  return integrate_with_series(model, series, rho0, T, h, opts);
}

Trajectory lindblad_reference(const ModelSpec& model, double gamma_f,
                              const Mat& rho0, double T, double h) {
  check_initial_state(model, rho0);
  const int n = step_count_checked(T, h);
  QbarSeries series;
  series.times.resize(n + 1);
  for (int k = 0; k <= n; ++k) series.times[k] = k * h;
  const int nq = static_cast<int>(model.q_init.size());
  series.coeffs = Mat::Zero(nq, n + 1);
  // Qbar = gamma_f L expressed in the operator basis through q_init.
  for (int i = 0; i < nq; ++i)
    series.coeffs.row(i).setConstant(gamma_f * model.q_init[i]);
  series.singular.assign(n + 1, 0);
  return integrate_with_series(model, series, rho0, T, h, {});
}

double trace_distance(const Mat& a, const Mat& b) {
  const Mat d = 0.5 * ((a - b) + (a - b).adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(d);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double markov_limit_check(const ModelSpec& model, double gamma, const Mat& rho0,
                          double T) {
  if (!(gamma > 0)) throw ConfigError("markov_limit_check: require gamma > 0");
  const auto kernel = CorrelationKernel::ornstein_uhlenbeck(gamma, 0.0);
  // Resolve the kernel transient (width 1/gamma) whatever gamma is.
  double h = std::min(1e-3, 0.05 / gamma);
  const int n = std::max(1, static_cast<int>(std::llround(T / h)));
  h = T / n;

  IntegrateOptions opts;
  opts.source = CoeffSource::Direct;
  const Trajectory nm = integrate(model, kernel, rho0, T, h, opts);
  const Trajectory lind = lindblad_reference(model, 0.5, rho0, T, h);
  double dist = 0;
  for (std::size_t i = 0; i < nm.states.size(); ++i)
    dist = std::max(dist, trace_distance(nm.states[i], lind.states[i]));
  return dist;
}

}  // namespace fqsd
