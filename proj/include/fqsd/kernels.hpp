#pragma once

#include <span>
#include <utility>
#include <vector>

#include "fqsd/types.hpp"

namespace fqsd {

/// One bath mode: coupling g and frequency omega.
struct Mode {
  cplx g;
  double omega;
};

enum class Quadrature { Trapezoid };

/// Stationary bath correlation function K(t,s) = K(t-s) with
/// K(-tau) = conj(K(tau)).
///
/// Variants:
///   DiscreteModes      K(tau) = sum_i |g_i|^2 exp(-i w_i tau)
///   SingleMode         one-mode special case of the above
///   OrnsteinUhlenbeck  K(tau) = (gamma/2) exp(-(gamma + i Omega) tau), tau >= 0
///   OhmicZeroT         K(tau) = Gamma / (1/w_c + i tau)^2
class CorrelationKernel {
 public:
  enum class Type { DiscreteModes, SingleMode, OrnsteinUhlenbeck, OhmicZeroT };

  static CorrelationKernel discrete_modes(std::vector<Mode> modes);
  static CorrelationKernel single_mode(cplx g, double omega_b);
  static CorrelationKernel ornstein_uhlenbeck(double gamma, double Omega);
  static CorrelationKernel ohmic_zero_t(double Gamma, double omega_c);

  /// K(t,s); requires finite arguments.
  cplx eval(double t, double s) const;
  /// K(tau) with tau = t-s.
  cplx eval_tau(double tau) const;

  Type type() const { return type_; }

  /// True when K(tau) = sum_m a_m exp(-b_m tau) with finitely many modes
  /// (everything except OhmicZeroT). Such kernels admit exact ODE closures
  /// of the memory integrals.
  bool has_exponential_form() const { return type_ != Type::OhmicZeroT; }
  /// The (a_m, b_m) pairs of the exponential form.
  std::vector<std::pair<cplx, cplx>> exponential_modes() const;

  const std::vector<Mode>& modes() const { return modes_; }
  double gamma() const { return gamma_; }
  double Omega() const { return Omega_; }
  double Gamma_ohmic() const { return Gamma_; }
  double omega_c() const { return omega_c_; }

 private:
  CorrelationKernel() = default;
  Type type_ = Type::SingleMode;
  std::vector<Mode> modes_;     // DiscreteModes / SingleMode
  double gamma_ = 0, Omega_ = 0;   // OrnsteinUhlenbeck
  double Gamma_ = 0, omega_c_ = 0; // OhmicZeroT
};

/// Trapezoid approximation of int_0^t K(t,s) field(s) ds with field sampled
/// at s = 0, h, ..., t (t = (field.size()-1) h). Empty or single-sample
/// fields integrate to zero.
cplx weighted_integral(const CorrelationKernel& kernel,
                       std::span<const cplx> field, double h,
                       Quadrature rule = Quadrature::Trapezoid);

}  // namespace fqsd
