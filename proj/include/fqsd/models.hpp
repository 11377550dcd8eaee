#pragma once

#include <vector>

#include "fqsd/kernels.hpp"
#include "fqsd/types.hpp"

namespace fqsd {

enum class ModelKind { OneQubit, TwoQubit, QBM, NFermion, NBoson };

struct TwoQubitParams {
  double omega_A = 1, omega_B = 1;
  double J_xy = 0, J_z = 0;
  double kappa_A = 1, kappa_B = 1;
};

/// A concrete open system: Hamiltonian, coupling operator, and the operator
/// basis {Q_i} in which the memory kernel of the coupling is expanded,
/// Qbar(t) = sum_i X_i(t) Q_i. q_init holds the boundary values x_i(t, s=t).
struct ModelSpec {
  ModelKind kind;
  int dim = 0;
  Mat H_s;
  Mat L;
  std::vector<Mat> q_basis;
  std::vector<cplx> q_init;

  // Parameters the coefficient solvers need beyond the matrices.
  double omega = 0;                   // OneQubit
  TwoQubitParams tq;                  // TwoQubit
  double omega_m = 0;                 // QBM
  int n_max = 0;                      // QBM truncation
  std::vector<double> A_freqs;        // NFermion / NBoson mode frequencies

  /// Default initial pure state used by the CLI when none is given.
  Vec default_state() const;
};

// Pauli matrices in the {|e>, |g>} basis and ladder operators
// (sigma_minus = |g><e|).
Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
Mat sigma_minus();
Mat sigma_plus();

/// ident(n) ⊗ ... convenience used throughout model construction.
Mat kron(const Mat& a, const Mat& b);

/// H_s = (omega/2) sigma_z, L = sigma_minus, basis {sigma_minus}.
ModelSpec build_one_qubit(double omega);

/// H_s = wA szA + wB szB + Jxy(s+A s-B + s-A s+B) + Jz szA szB,
/// L = kA s-A + kB s-B, basis {s-A, s-B, szA s-B, szB s-A, 2 s-A s-B}.
ModelSpec build_two_qubit(const TwoQubitParams& p);

/// Quantum Brownian motion: H_s = omega_m (p^2 + q^2), L = q, basis {q, p},
/// truncated at n_max Fock states.
ModelSpec build_qbm(double omega_m, int n_max = 30);

/// N_s fermionic system modes (Jordan-Wigner matrices):
/// H_s = sum_j A_j n_j, L = sum_j a_j, basis {a_1, ..., a_Ns}.
ModelSpec build_n_fermion(const std::vector<double>& A);

/// Two bosonic-bath-coupled fermionic modes; same H_s and L as
/// build_n_fermion({w1, w2}) but with the five-operator basis
/// {a1, a2, a1^dag a1 a2, a2^dag a1 a2, a1 a2} required by a bosonic bath.
ModelSpec build_n_boson(double omega_1, double omega_2);

/// Jordan-Wigner annihilators on an n-site register: a_j carries a sigma_z
/// string over the sites before it; occupied = |e> (first basis state).
std::vector<Mat> jordan_wigner_annihilators(int n_sites);

/// Truncated bosonic ladder operator, a|n> = sqrt(n)|n-1>.
Mat boson_annihilation(int n_max);
/// Coherent state |alpha> truncated to n_max levels and renormalized.
Vec coherent_state(cplx alpha, int n_max);

enum class Boundary { Periodic, Open };

/// Bath modes of the XX spin chain after Jordan-Wigner + Fourier:
/// g_p = exp(i phi_p)/sqrt(N), omega_p = 2 cos(phi_p), phi_p = 2 pi p / N.
std::vector<Mode> chain_bath_modes(int N, Boundary boundary = Boundary::Periodic);

}  // namespace fqsd
