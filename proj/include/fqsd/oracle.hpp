#pragma once

#include <vector>

#include "fqsd/kernels.hpp"
#include "fqsd/models.hpp"
#include "fqsd/types.hpp"

namespace fqsd {

/// System plus a finite fermionic bath register (Jordan-Wigner matrices on
/// the bath factor only, so system and bath operators commute as matrices).
struct CompositeSpec {
  ModelSpec system;
  std::vector<Mode> bath_modes;

  int bath_dim() const { return 1 << static_cast<int>(bath_modes.size()); }
  int total_dim() const { return system.dim * bath_dim(); }
};

/// H_tot = H_s x I + sum_i w_i n_i + sum_i (g_i^* c_i^dag L + g_i L^dag c_i).
Mat composite_hamiltonian(const CompositeSpec& spec);

/// |psi_system> x |bath vacuum> as a total-register state.
Vec compose_with_vacuum(const CompositeSpec& spec, const Vec& psi_system);

struct OracleResult {
  std::vector<double> times;
  std::vector<Mat> rho;    // reduced system states
  double min_eig = 1.0;    // most negative reduced eigenvalue seen
};

/// Exact evolution by full eigendecomposition, sampling the reduced system
/// density matrix every sample_h. Total dimension capped at 4096.
OracleResult exact_evolve(const CompositeSpec& spec, const Vec& psi0_total,
                          double T, double sample_h);

/// Max sorted-eigenvalue deviation between the Jordan-Wigner fermionized
/// hopping chain (boundary bond carries the parity string for the periodic
/// case) and the free-mode Hamiltonian sum_p 2 cos(phi_p) n_p. N <= 10.
double chain_equivalence(int N, Boundary boundary = Boundary::Periodic);

/// Same deviation for the plain periodic spin chain sum_i (s+_i s-_{i+1} +
/// h.c.) without the boundary string; informational, nonzero for N >= 4
/// because the even-parity sector sees antiperiodic momenta.
double chain_spin_full_deviation(int N);

/// Single-excitation block of the plain periodic spin chain against the
/// chain mode frequencies 2 cos(phi_p).
double chain_single_excitation_deviation(int N);

}  // namespace fqsd
