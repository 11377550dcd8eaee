#include "fqsd/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace fqsd {

namespace {

Mat partial_trace_bath(const Vec& psi, int ds, int db) {
  Mat rho = Mat::Zero(ds, ds);
  for (int i = 0; i < ds; ++i)
    for (int j = 0; j < ds; ++j) {
      cplx acc = 0;
      for (int b = 0; b < db; ++b)
        acc += psi(i * db + b) * std::conj(psi(j * db + b));
      rho(i, j) = acc;
    }
  return rho;
}

std::vector<double> sorted_eigs(const Mat& H) {
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  std::vector<double> ev(es.eigenvalues().data(),
                         es.eigenvalues().data() + H.rows());
  std::sort(ev.begin(), ev.end());
  return ev;
}

double max_sorted_deviation(const Mat& A, const Mat& B) {
  const auto ea = sorted_eigs(A), eb = sorted_eigs(B);
  double dev = 0;
  for (std::size_t i = 0; i < ea.size(); ++i)
    dev = std::max(dev, std::abs(ea[i] - eb[i]));
  return dev;
}

Mat mode_hamiltonian(const std::vector<Mode>& modes) {
  const int N = static_cast<int>(modes.size());
  const auto a = jordan_wigner_annihilators(N);
  Mat H = Mat::Zero(1 << N, 1 << N);
  for (int p = 0; p < N; ++p) H += modes[p].omega * (a[p].adjoint() * a[p]);
  return H;
}

}  // namespace

Mat composite_hamiltonian(const CompositeSpec& spec) {
  const int Nb = static_cast<int>(spec.bath_modes.size());
  if (Nb < 1) throw ConfigError("composite_hamiltonian: need bath modes");
  if (spec.total_dim() > 4096)
    throw ConfigError("composite_hamiltonian: total dimension " +
                      std::to_string(spec.total_dim()) + " exceeds 4096");
  const int ds = spec.system.dim, db = spec.bath_dim();
  const Mat id_s = Mat::Identity(ds, ds), id_b = Mat::Identity(db, db);
  const auto c = jordan_wigner_annihilators(Nb);

  Mat H = kron(spec.system.H_s, id_b);
  for (int i = 0; i < Nb; ++i) {
    const auto& m = spec.bath_modes[i];
    H += m.omega * kron(id_s, c[i].adjoint() * c[i]);
    H += std::conj(m.g) * kron(spec.system.L, c[i].adjoint()) +
         m.g * kron(spec.system.L.adjoint(), c[i]);
  }
  return H;
}

Vec compose_with_vacuum(const CompositeSpec& spec, const Vec& psi_system) {
  if (psi_system.size() != spec.system.dim)
    throw ConfigError("compose_with_vacuum: system state dimension mismatch");
  const int db = spec.bath_dim();
  Vec psi = Vec::Zero(spec.total_dim());
  // All bath sites in |g> (empty) is the last index of each bath block.
  for (int i = 0; i < spec.system.dim; ++i)
    psi(i * db + (db - 1)) = psi_system(i);
  return psi;
}

OracleResult exact_evolve(const CompositeSpec& spec, const Vec& psi0_total,
                          double T, double sample_h) {
  if (!(T > 0) || !(sample_h > 0))
    throw ConfigError("exact_evolve: require T > 0 and sample_h > 0");
  if (psi0_total.size() != spec.total_dim())
    throw ConfigError("exact_evolve: total state dimension mismatch");
  const auto n = static_cast<int>(std::llround(T / sample_h));
  if (n < 1 || std::abs(n * sample_h - T) > 1e-9 * std::max(1.0, T))
    throw ConfigError("exact_evolve: T must be an integer multiple of sample_h");

  const Mat H = composite_hamiltonian(spec);
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * H.cwiseAbs().maxCoeff())
    throw NumericalError("exact_evolve: composite Hamiltonian not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  const Mat& V = es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Vec proj = V.adjoint() * psi0_total;

  OracleResult out;
  const int ds = spec.system.dim, db = spec.bath_dim();
  for (int k = 0; k <= n; ++k) {
    const double t = k * sample_h;
    Vec phase(proj.size());
    for (int j = 0; j < proj.size(); ++j)
      phase(j) = std::exp(-I * lam(j) * t) * proj(j);
    const Vec psi = V * phase;
    Mat rho = partial_trace_bath(psi, ds, db);
    Eigen::SelfAdjointEigenSolver<Mat> er(0.5 * (rho + rho.adjoint()));
    out.min_eig = std::min(out.min_eig, er.eigenvalues().minCoeff());
    out.times.push_back(t);
    out.rho.push_back(std::move(rho));
  }
  return out;
}

double chain_equivalence(int N, Boundary boundary) {
  if (N < 2 || N > 10) throw ConfigError("chain_equivalence: need 2 <= N <= 10");
  const auto c = jordan_wigner_annihilators(N);
  Mat Hc = Mat::Zero(1 << N, 1 << N);
  const int last = boundary == Boundary::Periodic ? N : N - 1;
  for (int j = 0; j < last; ++j) {
    const Mat hop = c[j].adjoint() * c[(j + 1) % N];
    Hc += hop + hop.adjoint();
  }
  return max_sorted_deviation(Hc, mode_hamiltonian(chain_bath_modes(N, boundary)));
}

double chain_spin_full_deviation(int N) {
  if (N < 2 || N > 10)
    throw ConfigError("chain_spin_full_deviation: need 2 <= N <= 10");
  const int dim = 1 << N;
  Mat Hs = Mat::Zero(dim, dim);
  auto site_op = [N](const Mat& op, int j) {
    Mat out = Mat::Identity(1, 1);
    for (int k = 0; k < N; ++k)
      out = kron(out, k == j ? op : Mat::Identity(2, 2));
    return out;
  };
  for (int j = 0; j < N; ++j) {
    const Mat hop = site_op(sigma_plus(), j) * site_op(sigma_minus(), (j + 1) % N);
    Hs += hop + hop.adjoint();
  }
  return max_sorted_deviation(Hs, mode_hamiltonian(chain_bath_modes(N)));
}

double chain_single_excitation_deviation(int N) {
  if (N < 2) throw ConfigError("chain_single_excitation_deviation: need N >= 2");
  // One flipped spin: the chain acts as the cycle adjacency matrix.
  Mat adj = Mat::Zero(N, N);
  for (int j = 0; j < N; ++j) {
    adj(j, (j + 1) % N) += 1;
    adj((j + 1) % N, j) += 1;
  }
  auto ev = sorted_eigs(adj);
  std::vector<double> expect;
  for (const auto& m : chain_bath_modes(N)) expect.push_back(m.omega);
  std::sort(expect.begin(), expect.end());
  double dev = 0;
  for (int j = 0; j < N; ++j) dev = std::max(dev, std::abs(ev[j] - expect[j]));
  return dev;
}

}  // namespace fqsd
