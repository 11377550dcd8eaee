#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fqsd/qops.hpp"

namespace fqsd {

/// Where the master equation gets its Qbar(t) coefficients from.
///  Grid / Direct : numeric X_i(t) series (see CoeffMethod)
///  ClosedForm    : one-qubit only; the density matrix is propagated through
///                  the exact amplitude representation, which stays smooth
///                  where X1 itself diverges (resonant tan law).
enum class CoeffSource { Grid, Direct, ClosedForm };

struct IntegrateOptions {
  CoeffSource source = CoeffSource::Grid;
  SolveOptions solve;
  int max_stored_samples = 2001;
  /// Called after every accepted step (and once at t=0) with (t, rho).
  std::function<void(double, const Mat&)> observer;
};

/// Density-matrix trajectory with invariant tracking. States are stored on a
/// deterministic stride when the step count exceeds max_stored_samples; the
/// invariant maxima cover every step regardless.
struct Trajectory {
  std::vector<double> times;
  std::vector<Mat> states;
  std::vector<double> trace_err, herm_err, min_eig;
  QbarSeries series;             // the coefficients that drove the run
  double max_trace_err = 0, max_herm_err = 0;
  double min_eig_min = 0;
  bool truncated = false;
  double truncated_at = 0;
  std::string note;
};

/// d rho/dt = -i[H_s, rho] + [L, rho Qbar^dag] + [Qbar rho, L^dag].
Mat master_rhs(const ModelSpec& model, const Mat& Qbar, const Mat& rho);

/// Integrate the noise-free master equation with RK4 on step h up to T.
/// rho0 must be Hermitian with unit trace. NBoson models are rejected (their
/// coefficient expansion carries an explicit noise channel).
Trajectory integrate(const ModelSpec& model, const CorrelationKernel& kernel,
                     const Mat& rho0, double T, double h,
                     const IntegrateOptions& opts = {});

/// Constant-rate Lindblad comparison dynamics with Qbar = gamma_f L.
Trajectory lindblad_reference(const ModelSpec& model, double gamma_f,
                              const Mat& rho0, double T, double h);

/// Max trace distance over the horizon between the non-Markovian evolution
/// under an Ornstein-Uhlenbeck kernel {gamma, Omega=0} and the Lindblad
/// reference with gamma_f = 1/2. Step size is refined with gamma so that the
/// initial kernel transient stays resolved.
double markov_limit_check(const ModelSpec& model, double gamma, const Mat& rho0,
                          double T);

/// 0.5 * trace norm of (a - b); inputs are Hermitized first.
double trace_distance(const Mat& a, const Mat& b);

}  // namespace fqsd
