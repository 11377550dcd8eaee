#include "fqsd/models.hpp"

#include <cmath>

namespace fqsd {

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat pauli_y() {
  Mat m(2, 2);
  m << 0, -I, I, 0;
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Mat sigma_minus() {
  Mat m = Mat::Zero(2, 2);
  m(1, 0) = 1;  // |g><e|
  return m;
}

Mat sigma_plus() {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = 1;  // |e><g|
  return m;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vec ModelSpec::default_state() const {
  switch (kind) {
    case ModelKind::OneQubit: {
      Vec v(2);
      v << 1, 1;  // (|e> + |g>)/sqrt(2)
      return v / std::sqrt(2.0);
    }
    case ModelKind::TwoQubit: {
      Vec v = Vec::Zero(4);
      v(0) = v(3) = 1.0 / std::sqrt(2.0);  // (|ee> + |gg>)/sqrt(2)
      return v;
    }
    case ModelKind::QBM:
      // Coherent state with <q> = 1.
      return coherent_state(1.0 / std::sqrt(2.0), n_max);
    case ModelKind::NFermion:
    case ModelKind::NBoson: {
      // Product (|1> + |0>)/sqrt(2) on every system mode.
      Vec v = Vec::Constant(dim, 1.0);
      return v / std::sqrt(static_cast<double>(dim));
    }
  }
  throw ConfigError("default_state: unknown model kind");
}

ModelSpec build_one_qubit(double omega) {
  if (!std::isfinite(omega)) throw ConfigError("one_qubit: non-finite omega");
  ModelSpec m;
  m.kind = ModelKind::OneQubit;
  m.dim = 2;
  m.omega = omega;
  m.H_s = 0.5 * omega * pauli_z();
  m.L = sigma_minus();
  m.q_basis = {sigma_minus()};
  m.q_init = {1.0};
  return m;
}

ModelSpec build_two_qubit(const TwoQubitParams& p) {
  if (!(p.kappa_A >= 0) || !(p.kappa_B >= 0))
    throw ConfigError("two_qubit: require kappa_A, kappa_B >= 0");
  const Mat id2 = Mat::Identity(2, 2);
  const Mat szA = kron(pauli_z(), id2), szB = kron(id2, pauli_z());
  const Mat smA = kron(sigma_minus(), id2), smB = kron(id2, sigma_minus());
  const Mat spA = kron(sigma_plus(), id2), spB = kron(id2, sigma_plus());

  ModelSpec m;
  m.kind = ModelKind::TwoQubit;
  m.dim = 4;
  m.tq = p;
  m.H_s = p.omega_A * szA + p.omega_B * szB +
          p.J_xy * (spA * smB + smA * spB) + p.J_z * szA * szB;
  m.L = p.kappa_A * smA + p.kappa_B * smB;
  m.q_basis = {smA, smB, szA * smB, szB * smA, 2.0 * smA * smB};
  m.q_init = {p.kappa_A, p.kappa_B, 0.0, 0.0};
  return m;
}

Mat boson_annihilation(int n_max) {
  if (n_max < 2) throw ConfigError("boson_annihilation: need n_max >= 2");
  Mat a = Mat::Zero(n_max, n_max);
  for (int n = 1; n < n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Vec coherent_state(cplx alpha, int n_max) {
  Vec v(n_max);
  cplx amp = 1.0;
  for (int n = 0; n < n_max; ++n) {
    v(n) = amp;
    amp *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return v / v.norm();
}

ModelSpec build_qbm(double omega_m, int n_max) {
  if (!std::isfinite(omega_m)) throw ConfigError("qbm: non-finite omega_m");
  const Mat a = boson_annihilation(n_max);
  const Mat ad = a.adjoint();
  const double rt2 = std::sqrt(2.0);
  ModelSpec m;
  m.kind = ModelKind::QBM;
  m.dim = n_max;
  m.omega_m = omega_m;
  m.n_max = n_max;
  const Mat q = (a + ad) / rt2;
  const Mat p = (a - ad) / (I * rt2);
  m.H_s = omega_m * (p * p + q * q);
  m.L = q;
  m.q_basis = {q, p};
  m.q_init = {1.0, 0.0};
  return m;
}

std::vector<Mat> jordan_wigner_annihilators(int n_sites) {
  if (n_sites < 1 || n_sites > 12)
    throw ConfigError("jordan_wigner_annihilators: need 1 <= n <= 12 sites");
  std::vector<Mat> ops;
  for (int j = 0; j < n_sites; ++j) {
    Mat op = Mat::Identity(1, 1);
    for (int k = 0; k < n_sites; ++k) {
      if (k < j)
        op = kron(op, pauli_z());
      else if (k == j)
        op = kron(op, sigma_minus());
      else
        op = kron(op, Mat::Identity(2, 2));
    }
    ops.push_back(op);
  }
  return ops;
}

ModelSpec build_n_fermion(const std::vector<double>& A) {
  const int n = static_cast<int>(A.size());
  if (n < 1 || n > 10)
    throw ConfigError("n_fermion: need 1 <= N_s <= 10 mode frequencies");
  const auto a = jordan_wigner_annihilators(n);
  ModelSpec m;
  m.kind = ModelKind::NFermion;
  m.dim = 1 << n;
  m.A_freqs = A;
  m.H_s = Mat::Zero(m.dim, m.dim);
  m.L = Mat::Zero(m.dim, m.dim);
  for (int j = 0; j < n; ++j) {
    m.H_s += A[j] * (a[j].adjoint() * a[j]);
    m.L += a[j];
    m.q_basis.push_back(a[j]);
    m.q_init.push_back(1.0);
  }
  return m;
}

ModelSpec build_n_boson(double omega_1, double omega_2) {
  ModelSpec m = build_n_fermion({omega_1, omega_2});
  m.kind = ModelKind::NBoson;
  const Mat a1 = m.q_basis[0], a2 = m.q_basis[1];
  // Bosonic-bath expansion closes on five operators instead of two; the
  // fifth is the noise channel whose coefficient stays a two-argument field.
  m.q_basis = {a1, a2, a1.adjoint() * a1 * a2, a2.adjoint() * a1 * a2, a1 * a2};
  m.q_init = {1.0, 1.0, 0.0, 0.0};
  return m;
}

std::vector<Mode> chain_bath_modes(int N, Boundary boundary) {
  if (N < 2 || N > 64) throw ConfigError("chain_bath_modes: need 2 <= N <= 64");
  std::vector<Mode> modes;
  if (boundary == Boundary::Periodic) {
    // phi_p = 2 pi p / N, p = 0..N-1: exactly N momenta.
    for (int p = 0; p < N; ++p) {
      const double phi = 2.0 * M_PI * p / N;
      modes.push_back({std::exp(I * phi) / std::sqrt(double(N)), 2.0 * std::cos(phi)});
    }
  } else {
    // Open chain: sine modes, coupling through site 1.
    for (int k = 1; k <= N; ++k) {
      const double phi = M_PI * k / (N + 1);
      modes.push_back({std::sqrt(2.0 / (N + 1)) * std::sin(phi), 2.0 * std::cos(phi)});
    }
  }
  return modes;
}

}  // namespace fqsd
