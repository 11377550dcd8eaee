#pragma once

#include <vector>

#include "fqsd/kernels.hpp"
#include "fqsd/models.hpp"
#include "fqsd/types.hpp"

namespace fqsd {

/// Dense element of the Grassmann algebra over n_gen anticommuting
/// generators: 2^n_gen monomial coefficients indexed by bitmask, generators
/// written in ascending index order inside each monomial.
///
/// For M bath modes the convention is gens 0..M-1 = xi_i and
/// gens M..2M-1 = xi_i^*.
class GrassmannElement {
 public:
  explicit GrassmannElement(int n_gen = 0)
      : n_(n_gen), c_(std::size_t(1) << n_gen, cplx(0)) {}
  static GrassmannElement scalar(int n_gen, cplx value);
  static GrassmannElement generator(int n_gen, int g);

  int n_gen() const { return n_; }
  cplx coeff(unsigned mask) const { return c_[mask]; }
  cplx& coeff(unsigned mask) { return c_[mask]; }
  std::size_t size() const { return c_.size(); }

  GrassmannElement& operator+=(const GrassmannElement& o);
  GrassmannElement& operator-=(const GrassmannElement& o);
  GrassmannElement& operator*=(cplx s);
  double max_abs() const;

 private:
  int n_;
  std::vector<cplx> c_;
};

GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b);
GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b);
GrassmannElement operator*(cplx s, GrassmannElement a);

/// Graded product; the sign of each monomial pair is the parity of the
/// inversions needed to merge the two ascending index lists.
GrassmannElement mul(const GrassmannElement& a, const GrassmannElement& b);

/// Left derivative d_l/d xi_g: anticommute xi_g to the front, then strip it.
GrassmannElement left_derivative(const GrassmannElement& a, int g);

/// Gaussian statistical mean <X>_s = int prod_i dxi_i^* dxi_i
/// exp(-sum_j xi_j^* xi_j) X over M generator pairs.
cplx statistical_mean(const GrassmannElement& x, int M);

/// State of the mode-level stochastic Schroedinger equation: one Grassmann
/// amplitude per system basis vector, all monomials over the xi^* generators.
struct GrassmannState {
  double t = 0;
  std::vector<GrassmannElement> amp;
};

/// Propagate d psi/dt = [-i H_s + L xi_t^* - i L^dag sum_i g_i e^{-i w_i t}
/// d_l/d xi_i^*] psi with xi_t^* = -i sum_i g_i^* e^{i w_i t} xi_i^*, from the
/// bath vacuum, sampling at the requested grid-aligned times.
std::vector<GrassmannState> micro_qsd_propagate(const ModelSpec& model,
                                                const std::vector<Mode>& modes,
                                                const Vec& psi0, double T, double h,
                                                const std::vector<double>& sample_times);

/// rho = < |psi(xi^*)><psi(-xi)| >_s for one sampled state.
Mat reduced_density(const GrassmannState& state, int M);

struct NovikovReport {
  std::vector<double> times;
  double max_residual_1 = 0;  // <P xi_t>_s + <Qbar P>_s
  double max_residual_2 = 0;  // <xi_t^* P>_s - <P Qbar^dag>_s
};

/// Check both Novikov identities for the one-qubit model against the
/// independently solved Qbar = X1 sigma_minus.
NovikovReport novikov_check(const ModelSpec& model, const std::vector<Mode>& modes,
                            double h, const std::vector<double>& sample_times);

}  // namespace fqsd
