#pragma once

#include <cstdint>
#include <vector>

#include "fqsd/kernels.hpp"
#include "fqsd/models.hpp"
#include "fqsd/types.hpp"

namespace fqsd {

/// How the coefficient functions X_i(t) are obtained.
///  Grid:   method-of-lines on the (t,s) grid, trapezoid memory integrals,
///          RK4 in t with per-stage refresh of the integrals. Global O(h^2).
///  Direct: exact ODE closure of the memory integrals, available when the
///          kernel has a finite exponential-mode form. Global O(h^4).
enum class CoeffMethod { Grid, Direct };

struct SolveOptions {
  double divergence_threshold = 1e6;  ///< |X_i| above this flags the step singular
  int three_time_cap = 2000;          ///< max step count for the O(n^3) solvers
};

/// Coefficients X_i(t_k) on the uniform grid t_k = k h.
struct QbarSeries {
  std::vector<double> times;
  Mat coeffs;                      // n_coeff rows, one column per time
  std::vector<std::uint8_t> singular;

  int n_coeff() const { return static_cast<int>(coeffs.rows()); }
  int first_singular() const;      // index of first flagged step, -1 if none
  /// Coefficients at arbitrary t by linear interpolation (clamped ends).
  Vec at(double t) const;
};

/// ds x1/dt = [i omega + X1] x1, x1(t,t) = 1, X1 = int_0^t K(t,s) x1(t,s) ds.
QbarSeries solve_one_qubit(const ModelSpec& model, const CorrelationKernel& kernel,
                           double T, double h, CoeffMethod method = CoeffMethod::Grid,
                           const SolveOptions& opts = {});

/// Zeroth-order (noise-free) two-qubit coefficient system for
/// Qbar = F1 s-A + F2 s-B + F3 szA s-B + F4 szB s-A.
QbarSeries solve_two_qubit_zeroth(const ModelSpec& model, const CorrelationKernel& kernel,
                                  double T, double h, CoeffMethod method = CoeffMethod::Grid,
                                  const SolveOptions& opts = {});

/// Quantum Brownian motion coefficients, Qbar = X1 q + X2 p.
QbarSeries solve_qbm_zeroth(const ModelSpec& model, const CorrelationKernel& kernel,
                            double T, double h, CoeffMethod method = CoeffMethod::Grid,
                            const SolveOptions& opts = {});

/// N fermionic system modes, Qbar = sum_j X_j a_j.
QbarSeries solve_n_fermion(const ModelSpec& model, const CorrelationKernel& kernel,
                           double T, double h, CoeffMethod method = CoeffMethod::Grid,
                           const SolveOptions& opts = {});

/// Result of the three-time solvers: the four ordinary coefficients plus the
/// noise-channel kernel X5(t, s') (lower-triangular grid, X5[k][m], m <= k).
struct ThreeTimeResult {
  QbarSeries series;
  std::vector<std::vector<cplx>> X5;
  double max_abs_X5 = 0;
};

/// Exact two-qubit coefficient system including the F5 noise channel.
/// O(n^3) work, O(n^2) memory; step count capped by opts.three_time_cap.
ThreeTimeResult solve_two_qubit_exact(const ModelSpec& model, const CorrelationKernel& kernel,
                                      double T, double h, const SolveOptions& opts = {});

/// Bosonic-bath comparison system for two system modes (five-operator basis).
ThreeTimeResult solve_bosonic_O(const ModelSpec& model, const CorrelationKernel& kernel,
                                double T, double h, const SolveOptions& opts = {});

/// Dispatch on model kind to the zeroth-order solver family above.
/// NBoson models route to solve_bosonic_O and return its four-coefficient series.
QbarSeries solve_coefficients(const ModelSpec& model, const CorrelationKernel& kernel,
                              double T, double h, CoeffMethod method = CoeffMethod::Grid,
                              const SolveOptions& opts = {});

}  // namespace fqsd
