#include "fqsd/qops.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace fqsd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int step_count(double T, double h) {
  if (!(T > 0) || !(h > 0)) throw ConfigError("solver: require T > 0 and h > 0");
  const auto n = static_cast<int>(std::llround(T / h));
  if (n < 1 || std::abs(n * h - T) > 1e-9 * std::max(1.0, T))
    throw ConfigError("solver: T must be an integer multiple of h");
  return n;
}

// K(m h/2) for m = 0..2n: every stage offset tau - s_j falls on this lattice.
struct KernelTable {
  std::vector<cplx> vals;
  KernelTable(const CorrelationKernel& k, double h, int n) {
    vals.resize(2 * n + 1);
    for (int m = 0; m <= 2 * n; ++m) vals[m] = k.eval_tau(0.5 * h * m);
  }
};

// dx/dt(t,s) = A(X) x(t,s) with diagonal data x(t,t) = ic and
// X_i(t) = int_0^t K(t,s) x_i(t,s) ds.
struct LinearSystem {
  Vec ic;
  std::function<Mat(const Vec&)> matrix;
};

bool finite(const Vec& v) { return v.allFinite(); }

void flag_from(QbarSeries& s, int k) {
  const int n = static_cast<int>(s.singular.size());
  for (int j = k; j < n; ++j) s.singular[j] = 1;
  for (int j = k + 1; j < n; ++j) s.coeffs.col(j).setConstant(cplx(kNaN, kNaN));
}

// Trapezoid weights w_j K(tau - s_j) for j = 0..k at stage offset c2 (in units
// of h/2); empty integral when k = 0.
Eigen::VectorXcd weight_vector(const KernelTable& kt, double h, int k, int c2) {
  Eigen::VectorXcd wv = Eigen::VectorXcd::Zero(k + 1);
  if (k >= 1)
    for (int j = 0; j <= k; ++j) {
      const double w = (j == 0 || j == k) ? 0.5 * h : h;
      wv(j) = w * kt.vals[2 * (k - j) + c2];
    }
  return wv;
}

QbarSeries make_series(int nc, int n, double h) {
  QbarSeries out;
  out.times.resize(n + 1);
  for (int k = 0; k <= n; ++k) out.times[k] = k * h;
  out.coeffs = Mat::Zero(nc, n + 1);
  out.singular.assign(n + 1, 0);
  return out;
}

// Method-of-lines on the (t,s) grid. The memory integrals are refreshed at
// every RK4 stage from the stage-advanced field, plus the sliver
// [t_k, t_k + c h] closed with the diagonal value x(tau,tau) = ic, which
// keeps the scheme globally O(h^2).
QbarSeries solve_grid(const LinearSystem& sys, const CorrelationKernel& kernel,
                      double T, double h, const SolveOptions& opts) {
  const int n = step_count(T, h);
  const int nc = static_cast<int>(sys.ic.size());
  const KernelTable kt(kernel, h, n);

  Mat F(nc, n + 1), G(nc, n + 1), Kcur(nc, n + 1), Kacc(nc, n + 1);
  F.col(0) = sys.ic;
  QbarSeries out = make_series(nc, n, h);

  auto stage_X = [&](int k, int c2, const Eigen::Ref<const Mat>& S) -> Vec {
    Vec X = S.leftCols(k + 1) * weight_vector(kt, h, k, c2);
    if (c2 > 0) {
      const double ch = 0.5 * h * c2;  // tau - t_k
      X += (0.5 * ch) * (kt.vals[c2] * S.col(k) + kt.vals[0] * sys.ic);
    }
    return X;
  };

  for (int k = 0; k < n; ++k) {
    const auto Fb = F.leftCols(k + 1);
    auto Gb = G.leftCols(k + 1);
    auto Kc = Kcur.leftCols(k + 1);
    auto Ka = Kacc.leftCols(k + 1);

    Kc = sys.matrix(stage_X(k, 0, F)) * Fb;
    Ka = Kc;
    Gb = Fb + (0.5 * h) * Kc;
    Kc = sys.matrix(stage_X(k, 1, G)) * Gb;
    Ka += 2.0 * Kc;
    Gb = Fb + (0.5 * h) * Kc;
    Kc = sys.matrix(stage_X(k, 1, G)) * Gb;
    Ka += 2.0 * Kc;
    Gb = Fb + h * Kc;
    Kc = sys.matrix(stage_X(k, 2, G)) * Gb;
    Ka += Kc;

    F.leftCols(k + 1) += (h / 6.0) * Ka;
    F.col(k + 1) = sys.ic;

    const Vec Xn = F.leftCols(k + 2) * weight_vector(kt, h, k + 1, 0);
    out.coeffs.col(k + 1) = Xn;
    if (!finite(Xn) || Xn.cwiseAbs().maxCoeff() > opts.divergence_threshold) {
      flag_from(out, k + 1);
      break;
    }
  }
  return out;
}

// Exponential-kernel closure: with K(tau) = sum_m a_m exp(-b_m tau) the
// integrals Y_im(t) = int_0^t a_m exp(-b_m (t-s)) x_i(t,s) ds obey
//   dY_im/dt = a_m ic_i - b_m Y_im + [A(X) Y_.m]_i,   X_i = sum_m Y_im.
QbarSeries solve_direct(const LinearSystem& sys, const CorrelationKernel& kernel,
                        double T, double h, const SolveOptions& opts) {
  const auto em = kernel.exponential_modes();
  const int n = step_count(T, h);
  const int nc = static_cast<int>(sys.ic.size());
  const int M = static_cast<int>(em.size());

  auto rhs = [&](const Mat& Y) -> Mat {
    const Vec X = Y.rowwise().sum();
    Mat dY = sys.matrix(X) * Y;
    for (int m = 0; m < M; ++m)
      dY.col(m) += em[m].first * sys.ic - em[m].second * Y.col(m);
    return dY;
  };

  Mat Y = Mat::Zero(nc, M);
  QbarSeries out = make_series(nc, n, h);
  for (int k = 0; k < n; ++k) {
    const Mat k1 = rhs(Y);
    const Mat k2 = rhs(Y + (0.5 * h) * k1);
    const Mat k3 = rhs(Y + (0.5 * h) * k2);
    const Mat k4 = rhs(Y + h * k3);
    Y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const Vec Xn = Y.rowwise().sum();
    out.coeffs.col(k + 1) = Xn;
    if (!finite(Xn) || Xn.cwiseAbs().maxCoeff() > opts.divergence_threshold) {
      flag_from(out, k + 1);
      break;
    }
  }
  return out;
}

QbarSeries solve_linear(const LinearSystem& sys, const CorrelationKernel& kernel,
                        double T, double h, CoeffMethod method,
                        const SolveOptions& opts) {
  return method == CoeffMethod::Grid ? solve_grid(sys, kernel, T, h, opts)
                                     : solve_direct(sys, kernel, T, h, opts);
}

LinearSystem one_qubit_system(const ModelSpec& m) {
  LinearSystem s;
  s.ic = Vec::Ones(1);
  const double w = m.omega;
  s.matrix = [w](const Vec& X) {
    Mat A(1, 1);
    A(0, 0) = I * w + X(0);
    return A;
  };
  return s;
}

Mat two_qubit_matrix(const TwoQubitParams& p, const Vec& F) {
  const cplx i2wA = 2.0 * I * p.omega_A, i2wB = 2.0 * I * p.omega_B;
  const cplx iJ = I * p.J_xy, i2Jz = 2.0 * I * p.J_z;
  const double kA = p.kappa_A, kB = p.kappa_B;
  Mat A = Mat::Zero(4, 4);
  A(0, 0) = i2wA + kA * F(0) + kB * F(2);
  A(0, 2) = -iJ - kB * F(0) + kB * F(3);
  A(0, 3) = i2Jz + kB * F(2) + kA * F(3);
  A(1, 1) = i2wB + kB * F(1) + kA * F(3);
  A(1, 2) = i2Jz + kB * F(2) + kA * F(3);
  A(1, 3) = -iJ - kA * F(1) + kA * F(2);
  A(2, 0) = -iJ - kA * F(1) + kA * F(2);
  A(2, 1) = i2Jz + kA * F(3) + kB * F(2);
  A(2, 2) = i2wB + kB * F(1) + kA * F(3);
  A(3, 0) = i2Jz + kB * F(2) + kA * F(3);
  A(3, 1) = -iJ - kB * F(0) + kB * F(3);
  A(3, 3) = i2wA + kA * F(0) + kB * F(2);
  return A;
}

LinearSystem two_qubit_system(const ModelSpec& m) {
  LinearSystem s;
  s.ic = Vec::Zero(4);
  s.ic(0) = m.tq.kappa_A;
  s.ic(1) = m.tq.kappa_B;
  const TwoQubitParams p = m.tq;
  s.matrix = [p](const Vec& F) { return two_qubit_matrix(p, F); };
  return s;
}

LinearSystem qbm_system(const ModelSpec& m) {
  LinearSystem s;
  s.ic = Vec::Zero(2);
  s.ic(0) = 1;
  const double wm = m.omega_m;
  s.matrix = [wm](const Vec& X) {
    Mat A(2, 2);
    A(0, 0) = I * X(1);
    A(0, 1) = 2.0 * wm - 2.0 * I * X(0);
    A(1, 0) = -2.0 * wm;
    A(1, 1) = -I * X(1);
    return A;
  };
  return s;
}

LinearSystem n_fermion_system(const ModelSpec& m) {
  LinearSystem s;
  const int N = static_cast<int>(m.A_freqs.size());
  s.ic = Vec::Ones(N);
  const std::vector<double> A_freqs = m.A_freqs;
  s.matrix = [A_freqs, N](const Vec& X) {
    Mat A(N, N);
    for (int j = 0; j < N; ++j) A.row(j).setConstant(X(j));
    for (int j = 0; j < N; ++j) A(j, j) += I * A_freqs[j];
    return A;
  };
  return s;
}

void require_kind(const ModelSpec& m, ModelKind kind, const char* who) {
  if (m.kind != kind) throw ConfigError(std::string(who) + ": wrong model kind");
}

// Three-time systems share the shape
//   dx_i/dt   = [A(X) x]_i + vsrc_i X5(t, s'=s),            i = 1..4
//   dx5/dt    = D(X) x5(t,s,s') + (ucoef . x(t,s)) X5(t,s'),
//   x5(t,t,s') = 0,   x5(t,s,t) = bcoef . x(t,s),
// with X5(t,s') = int_0^t K(t,s) x5(t,s,s') ds.
struct ThreeTimeSpec {
  Vec ic;
  std::function<Mat(const Vec&)> matrix;
  std::function<cplx(const Vec&)> diag;
  Eigen::Vector4cd vsrc, ucoef, bcoef;
};

ThreeTimeResult solve_three_time(const ThreeTimeSpec& sp,
                                 const CorrelationKernel& kernel, double T,
                                 double h, const SolveOptions& opts) {
  const int n = step_count(T, h);
  if (n > opts.three_time_cap)
    throw ConfigError("three-time solver: " + std::to_string(n) +
                      " steps exceeds the cap of " +
                      std::to_string(opts.three_time_cap) +
                      "; increase h or the cap");
  const KernelTable kt(kernel, h, n);

  Mat F(4, n + 1), G(4, n + 1), Kc(4, n + 1), Ka(4, n + 1);
  F.col(0) = sp.ic;
  // x5 on the (s, s') lattice; rows are s, columns are s'.
  Mat F5 = Mat::Zero(n + 1, n + 1), G5 = Mat::Zero(n + 1, n + 1);
  Mat K5c = Mat::Zero(n + 1, n + 1), K5a = Mat::Zero(n + 1, n + 1);

  ThreeTimeResult res;
  res.series = make_series(4, n, h);
  res.X5.assign(n + 1, {});
  res.X5[0] = {cplx(0, 0)};

  auto stage = [&](int k, int c2, const Mat& S4, const Mat& S5, Mat& K4out,
                   Mat& K5out) {
    const Eigen::VectorXcd wv = weight_vector(kt, h, k, c2);
    Vec X = S4.leftCols(k + 1) * wv;
    Eigen::VectorXcd X5v =
        S5.topLeftCorner(k + 1, k + 1).transpose() * wv;
    if (c2 > 0) {
      const double ch = 0.5 * h * c2;
      X += (0.5 * ch) * (kt.vals[c2] * S4.col(k) + kt.vals[0] * sp.ic);
      // x5(tau, s=tau, s') = 0 closes the sliver with one term only.
      X5v += (0.5 * ch) * kt.vals[c2] *
             S5.row(k).head(k + 1).transpose();
    }
    K4out.leftCols(k + 1) = sp.matrix(X) * S4.leftCols(k + 1) +
                            sp.vsrc * X5v.transpose();
    const Eigen::VectorXcd u =
        S4.leftCols(k + 1).transpose() * sp.ucoef;
    K5out.topLeftCorner(k + 1, k + 1) =
        sp.diag(X) * S5.topLeftCorner(k + 1, k + 1) + u * X5v.transpose();
  };

  for (int k = 0; k < n; ++k) {
    const int w = k + 1;
    stage(k, 0, F, F5, Kc, K5c);
    Ka.leftCols(w) = Kc.leftCols(w);
    K5a.topLeftCorner(w, w) = K5c.topLeftCorner(w, w);
    G.leftCols(w) = F.leftCols(w) + (0.5 * h) * Kc.leftCols(w);
    G5.topLeftCorner(w, w) =
        F5.topLeftCorner(w, w) + (0.5 * h) * K5c.topLeftCorner(w, w);

    stage(k, 1, G, G5, Kc, K5c);
    Ka.leftCols(w) += 2.0 * Kc.leftCols(w);
    K5a.topLeftCorner(w, w) += 2.0 * K5c.topLeftCorner(w, w);
    G.leftCols(w) = F.leftCols(w) + (0.5 * h) * Kc.leftCols(w);
    G5.topLeftCorner(w, w) =
        F5.topLeftCorner(w, w) + (0.5 * h) * K5c.topLeftCorner(w, w);

    stage(k, 1, G, G5, Kc, K5c);
    Ka.leftCols(w) += 2.0 * Kc.leftCols(w);
    K5a.topLeftCorner(w, w) += 2.0 * K5c.topLeftCorner(w, w);
    G.leftCols(w) = F.leftCols(w) + h * Kc.leftCols(w);
    G5.topLeftCorner(w, w) =
        F5.topLeftCorner(w, w) + h * K5c.topLeftCorner(w, w);

    stage(k, 2, G, G5, Kc, K5c);
    Ka.leftCols(w) += Kc.leftCols(w);
    K5a.topLeftCorner(w, w) += K5c.topLeftCorner(w, w);

    F.leftCols(w) += (h / 6.0) * Ka.leftCols(w);
    F5.topLeftCorner(w, w) += (h / 6.0) * K5a.topLeftCorner(w, w);

    // births: new diagonal column for x, new s' column and zero s row for x5
    F.col(k + 1) = sp.ic;
    F5.col(k + 1).head(k + 1) =
        F.leftCols(k + 1).transpose() * sp.bcoef;
    F5.row(k + 1).head(k + 2).setZero();

    const Eigen::VectorXcd wn = weight_vector(kt, h, k + 1, 0);
    const Vec Xn = F.leftCols(k + 2) * wn;
    const Eigen::VectorXcd X5n =
        F5.topLeftCorner(k + 2, k + 2).transpose() * wn;
    res.series.coeffs.col(k + 1) = Xn;
    res.X5[k + 1].assign(X5n.data(), X5n.data() + k + 2);
    const double m5 = X5n.cwiseAbs().maxCoeff();
    res.max_abs_X5 = std::max(res.max_abs_X5, m5);
    if (!finite(Xn) || !X5n.allFinite() ||
        std::max(Xn.cwiseAbs().maxCoeff(), m5) > opts.divergence_threshold) {
      flag_from(res.series, k + 1);
      break;
    }
  }
  return res;
}

}  // namespace

int QbarSeries::first_singular() const {
  for (std::size_t k = 0; k < singular.size(); ++k)
    if (singular[k]) return static_cast<int>(k);
  return -1;
}

Vec QbarSeries::at(double t) const {
  const int n = static_cast<int>(times.size());
  if (n == 0) throw NumericalError("QbarSeries::at: empty series");
  if (n == 1 || t <= times.front()) return coeffs.col(0);
  if (t >= times.back()) return coeffs.col(n - 1);
  const double h = times[1] - times[0];
  int k = static_cast<int>(std::floor(t / h));
  if (k > n - 2) k = n - 2;
  const double w = (t - times[k]) / h;
  return (1.0 - w) * coeffs.col(k) + w * coeffs.col(k + 1);
}

QbarSeries solve_one_qubit(const ModelSpec& model, const CorrelationKernel& kernel,
                           double T, double h, CoeffMethod method,
                           const SolveOptions& opts) {
  require_kind(model, ModelKind::OneQubit, "solve_one_qubit");
  return solve_linear(one_qubit_system(model), kernel, T, h, method, opts);
}

QbarSeries solve_two_qubit_zeroth(const ModelSpec& model, const CorrelationKernel& kernel,
                                  double T, double h, CoeffMethod method,
                                  const SolveOptions& opts) {
  require_kind(model, ModelKind::TwoQubit, "solve_two_qubit_zeroth");
  return solve_linear(two_qubit_system(model), kernel, T, h, method, opts);
}

QbarSeries solve_qbm_zeroth(const ModelSpec& model, const CorrelationKernel& kernel,
                            double T, double h, CoeffMethod method,
                            const SolveOptions& opts) {
  require_kind(model, ModelKind::QBM, "solve_qbm_zeroth");
  return solve_linear(qbm_system(model), kernel, T, h, method, opts);
}

QbarSeries solve_n_fermion(const ModelSpec& model, const CorrelationKernel& kernel,
                           double T, double h, CoeffMethod method,
                           const SolveOptions& opts) {
  require_kind(model, ModelKind::NFermion, "solve_n_fermion");
  return solve_linear(n_fermion_system(model), kernel, T, h, method, opts);
}

ThreeTimeResult solve_two_qubit_exact(const ModelSpec& model,
                                      const CorrelationKernel& kernel, double T,
                                      double h, const SolveOptions& opts) {
  require_kind(model, ModelKind::TwoQubit, "solve_two_qubit_exact");
  const TwoQubitParams p = model.tq;
  ThreeTimeSpec sp;
  sp.ic = Vec::Zero(4);
  sp.ic(0) = p.kappa_A;
  sp.ic(1) = p.kappa_B;
  sp.matrix = [p](const Vec& F) { return two_qubit_matrix(p, F); };
  sp.diag = [p](const Vec& F) {
    return 2.0 * I * (p.omega_A + p.omega_B) + p.kappa_A * (F(0) + F(3)) +
           p.kappa_B * (F(1) + F(2));
  };
  sp.vsrc << -I * p.kappa_B, -I * p.kappa_A, -I * p.kappa_A, -I * p.kappa_B;
  sp.ucoef << p.kappa_A, p.kappa_B, -p.kappa_B, -p.kappa_A;
  // x5(t, s, s'=t) = i [kappa_A f2 + kappa_B f1](t, s)
  sp.bcoef << I * p.kappa_B, I * p.kappa_A, 0, 0;
  return solve_three_time(sp, kernel, T, h, opts);
}

ThreeTimeResult solve_bosonic_O(const ModelSpec& model,
                                const CorrelationKernel& kernel, double T,
                                double h, const SolveOptions& opts) {
  require_kind(model, ModelKind::NBoson, "solve_bosonic_O");
  if (model.A_freqs.size() != 2)
    throw ConfigError("solve_bosonic_O: exactly two system modes");
  const double wa = model.A_freqs[0], wb = model.A_freqs[1];
  ThreeTimeSpec sp;
  sp.ic = Vec::Zero(4);
  sp.ic(0) = 1;
  sp.ic(1) = 1;
  sp.matrix = [wa, wb](const Vec& X) {
    Mat A = Mat::Zero(4, 4);
    A(0, 0) = I * wa + X(0);
    A(0, 1) = X(0);
    A(1, 0) = X(1);
    A(1, 1) = I * wb + X(1);
    A(2, 1) = X(2) - X(3);
    A(2, 2) = I * wb + X(1) + X(2) - X(3);
    A(2, 3) = -X(1);
    A(3, 0) = X(3) - X(2);
    A(3, 2) = -X(0);
    A(3, 3) = I * wa + X(0) + X(2) - X(3);
    return A;
  };
  sp.diag = [wa, wb](const Vec& X) {
    return I * (wa + wb) + X(0) + X(1) + X(2) - X(3);
  };
  sp.vsrc << 0, 0, -I, -I;
  sp.ucoef << 1, 1, 0, 0;
  // i x5(t, s, s'=t) = 2 (x2 - x1) + x3 + x4
  sp.bcoef << 2.0 * I, -2.0 * I, -I, -I;
  return solve_three_time(sp, kernel, T, h, opts);
}

QbarSeries solve_coefficients(const ModelSpec& model, const CorrelationKernel& kernel,
                              double T, double h, CoeffMethod method,
                              const SolveOptions& opts) {
  switch (model.kind) {
    case ModelKind::OneQubit:
      return solve_one_qubit(model, kernel, T, h, method, opts);
    case ModelKind::TwoQubit:
      return solve_two_qubit_zeroth(model, kernel, T, h, method, opts);
    case ModelKind::QBM:
      return solve_qbm_zeroth(model, kernel, T, h, method, opts);
    case ModelKind::NFermion:
      return solve_n_fermion(model, kernel, T, h, method, opts);
    case ModelKind::NBoson:
      return solve_bosonic_O(model, kernel, T, h, opts).series;
  }
  throw ConfigError("solve_coefficients: unknown model kind");
}

}  // namespace fqsd
