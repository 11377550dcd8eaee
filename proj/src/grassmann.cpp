#include "fqsd/grassmann.hpp"

#include <bit>
#include <cmath>

#include "fqsd/qops.hpp"

namespace fqsd {

GrassmannElement GrassmannElement::scalar(int n_gen, cplx value) {
  GrassmannElement e(n_gen);
  e.c_[0] = value;
  return e;
}

GrassmannElement GrassmannElement::generator(int n_gen, int g) {
  if (g < 0 || g >= n_gen)
    throw ConfigError("GrassmannElement: generator index out of range");
  GrassmannElement e(n_gen);
  e.c_[1u << g] = 1;
  return e;
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& o) {
  for (std::size_t m = 0; m < c_.size(); ++m) c_[m] += o.c_[m];
  return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& o) {
  for (std::size_t m = 0; m < c_.size(); ++m) c_[m] -= o.c_[m];
  return *this;
}

GrassmannElement& GrassmannElement::operator*=(cplx s) {
  for (auto& c : c_) c *= s;
  return *this;
}

double GrassmannElement::max_abs() const {
  double m = 0;
  for (const auto& c : c_) m = std::max(m, std::abs(c));
  return m;
}

GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) {
  a += b;
  return a;
}

GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) {
  a -= b;
  return a;
}

GrassmannElement operator*(cplx s, GrassmannElement a) {
  a *= s;
  return a;
}

namespace {

// Parity of inversions when the ascending list A is concatenated with the
// ascending list B and re-sorted: pairs (a in A, b in B) with a > b.
int merge_sign(unsigned A, unsigned B) {
  int inv = 0;
  unsigned b = B;
  while (b) {
    const int g = std::countr_zero(b);
    inv += std::popcount(A >> (g + 1));
    b &= b - 1;
  }
  return (inv & 1) ? -1 : 1;
}

}  // namespace

GrassmannElement mul(const GrassmannElement& a, const GrassmannElement& b) {
  GrassmannElement out(a.n_gen());
  for (unsigned ma = 0; ma < a.size(); ++ma) {
    const cplx ca = a.coeff(ma);
    if (ca == cplx(0)) continue;
    for (unsigned mb = 0; mb < b.size(); ++mb) {
      if (ma & mb) continue;  // repeated generator
      const cplx cb = b.coeff(mb);
      if (cb == cplx(0)) continue;
      out.coeff(ma | mb) += double(merge_sign(ma, mb)) * ca * cb;
    }
  }
  return out;
}

GrassmannElement left_derivative(const GrassmannElement& a, int g) {
  GrassmannElement out(a.n_gen());
  const unsigned bit = 1u << g;
  const unsigned below = bit - 1;
  for (unsigned m = 0; m < a.size(); ++m) {
    if (!(m & bit)) continue;
    const int sgn = (std::popcount(m & below) & 1) ? -1 : 1;
    out.coeff(m ^ bit) += double(sgn) * a.coeff(m);
  }
  return out;
}

cplx statistical_mean(const GrassmannElement& x, int M) {
  if (x.n_gen() != 2 * M)
    throw ConfigError("statistical_mean: element needs 2M generators");
  // weight exp(-sum xi^* xi) = prod_i (1 - xi_i^* xi_i)
  GrassmannElement y = x;
  for (int i = 0; i < M; ++i) {
    GrassmannElement w = GrassmannElement::scalar(2 * M, 1.0);
    w -= mul(GrassmannElement::generator(2 * M, M + i),
             GrassmannElement::generator(2 * M, i));
    y = mul(y, w);
  }
  // int dxi_i^* dxi_i = d_l/d xi_i^* after d_l/d xi_i, mode pairs commute
  for (int i = 0; i < M; ++i)
    y = left_derivative(left_derivative(y, i), M + i);
  return y.coeff(0);
}

namespace {

// Amplitudes of the bra <psi(-xi)|: conjugate coefficients, generator-wise
// dagger in reversed order (xi_i^* -> xi_i), then substitute xi -> -xi.
GrassmannElement bra_amplitude(const GrassmannElement& a, int M) {
  GrassmannElement out(a.n_gen());
  for (unsigned m = 0; m < a.size(); ++m) {
    const cplx c = a.coeff(m);
    if (c == cplx(0)) continue;
    GrassmannElement term = GrassmannElement::scalar(a.n_gen(), std::conj(c));
    for (int g = a.n_gen() - 1; g >= 0; --g) {
      if (!(m & (1u << g))) continue;
      const int swapped = g >= M ? g - M : g + M;
      term = mul(term, GrassmannElement::generator(a.n_gen(), swapped));
      if (swapped < M) term *= -1.0;  // a xi generator picks up the -xi flip
    }
    out += term;
  }
  return out;
}

std::vector<GrassmannElement> qsd_rhs(const ModelSpec& model,
                                      const std::vector<Mode>& modes, double t,
                                      const std::vector<GrassmannElement>& psi) {
  const int dim = model.dim;
  const int M = static_cast<int>(modes.size());
  const int ng = 2 * M;

  // xi_t^* = -i sum_i g_i^* e^{+i w_i t} xi_i^*
  GrassmannElement xi_t_star(ng);
  for (int i = 0; i < M; ++i)
    xi_t_star.coeff(1u << (M + i)) =
        -I * std::conj(modes[i].g) * std::exp(I * modes[i].omega * t);

  std::vector<GrassmannElement> d(dim, GrassmannElement(ng));
  std::vector<GrassmannElement> noise(dim, GrassmannElement(ng));
  std::vector<GrassmannElement> deriv(dim, GrassmannElement(ng));
  for (int n = 0; n < dim; ++n) {
    noise[n] = mul(xi_t_star, psi[n]);
    for (int i = 0; i < M; ++i) {
      GrassmannElement dpsi = left_derivative(psi[n], M + i);
      dpsi *= -I * modes[i].g * std::exp(-I * modes[i].omega * t);
      deriv[n] += dpsi;
    }
  }
  const Mat Ld = model.L.adjoint();
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) {
      if (model.H_s(m, n) != cplx(0)) {
        GrassmannElement h = psi[n];
        h *= -I * model.H_s(m, n);
        d[m] += h;
      }
      if (model.L(m, n) != cplx(0)) {
        GrassmannElement l = noise[n];
        l *= model.L(m, n);
        d[m] += l;
      }
      if (Ld(m, n) != cplx(0)) {
        GrassmannElement dd = deriv[n];
        dd *= Ld(m, n);
        d[m] += dd;
      }
    }
  }
  return d;
}

}  // namespace

std::vector<GrassmannState> micro_qsd_propagate(const ModelSpec& model,
                                                const std::vector<Mode>& modes,
                                                const Vec& psi0, double T, double h,
                                                const std::vector<double>& sample_times) {
  const int M = static_cast<int>(modes.size());
  if (M < 1 || M > 2)
    throw ConfigError("micro_qsd_propagate: supports 1 or 2 bath modes");
  if (psi0.size() != model.dim)
    throw ConfigError("micro_qsd_propagate: initial state dimension mismatch");
  if (!(T > 0) || !(h > 0))
    throw ConfigError("micro_qsd_propagate: require T > 0 and h > 0");
  const auto n = static_cast<int>(std::llround(T / h));
  if (n < 1 || std::abs(n * h - T) > 1e-9 * std::max(1.0, T))
    throw ConfigError("micro_qsd_propagate: T must be an integer multiple of h");

  std::vector<int> sample_idx;
  for (double ts : sample_times) {
    const auto k = static_cast<int>(std::llround(ts / h));
    if (k < 0 || k > n || std::abs(k * h - ts) > 1e-9)
      throw ConfigError("micro_qsd_propagate: sample times must sit on the grid");
    sample_idx.push_back(k);
  }

  const int ng = 2 * M;
  std::vector<GrassmannElement> psi(model.dim, GrassmannElement(ng));
  for (int m = 0; m < model.dim; ++m)
    psi[m] = GrassmannElement::scalar(ng, psi0(m));

  std::vector<GrassmannState> out;
  auto sample = [&](int k) {
    for (std::size_t si = 0; si < sample_idx.size(); ++si)
      if (sample_idx[si] == k) out.push_back({k * h, psi});
  };
  sample(0);

  auto axpy = [&](std::vector<GrassmannElement> base, double w,
                  const std::vector<GrassmannElement>& dir) {
    for (int m = 0; m < model.dim; ++m) {
      GrassmannElement scaled = dir[m];
      scaled *= w;
      base[m] += scaled;
    }
    return base;
  };

  for (int k = 0; k < n; ++k) {
    const double t = k * h;
    const auto k1 = qsd_rhs(model, modes, t, psi);
    const auto k2 = qsd_rhs(model, modes, t + 0.5 * h, axpy(psi, 0.5 * h, k1));
    const auto k3 = qsd_rhs(model, modes, t + 0.5 * h, axpy(psi, 0.5 * h, k2));
    const auto k4 = qsd_rhs(model, modes, t + h, axpy(psi, h, k3));
    for (int m = 0; m < model.dim; ++m) {
      GrassmannElement inc = k1[m];
      inc += k4[m];
      GrassmannElement mid = k2[m];
      mid += k3[m];
      mid *= 2.0;
      inc += mid;
      inc *= h / 6.0;
      psi[m] += inc;
    }
    sample(k + 1);
  }
  return out;
}

Mat reduced_density(const GrassmannState& state, int M) {
  const int dim = static_cast<int>(state.amp.size());
  std::vector<GrassmannElement> bra(dim, GrassmannElement(2 * M));
  for (int nn = 0; nn < dim; ++nn) bra[nn] = bra_amplitude(state.amp[nn], M);
  Mat rho(dim, dim);
  for (int m = 0; m < dim; ++m)
    for (int nn = 0; nn < dim; ++nn)
      rho(m, nn) = statistical_mean(mul(state.amp[m], bra[nn]), M);
  return rho;
}

NovikovReport novikov_check(const ModelSpec& model, const std::vector<Mode>& modes,
                            double h, const std::vector<double>& sample_times) {
  if (model.kind != ModelKind::OneQubit)
    throw ConfigError("novikov_check: defined for the one_qubit model");
  const int M = static_cast<int>(modes.size());
  const int ng = 2 * M;
  double T = 0;
  for (double t : sample_times) T = std::max(T, t);
  if (!(T > 0)) throw ConfigError("novikov_check: need a positive sample time");

  const auto kernel = CorrelationKernel::discrete_modes(modes);
  const QbarSeries xs =
      solve_one_qubit(model, kernel, T, h, CoeffMethod::Direct);
  const auto states =
      micro_qsd_propagate(model, modes, model.default_state(), T, h, sample_times);

  NovikovReport rep;
  for (const auto& st : states) {
    rep.times.push_back(st.t);
    const cplx X1 = xs.at(st.t)(0);
    const Mat Qbar = X1 * sigma_minus();
    const Mat Qbar_d = Qbar.adjoint();

    // xi_t = +i sum_j g_j e^{-i w_j t} xi_j
    GrassmannElement xi_t(ng), xi_t_star(ng);
    for (int i = 0; i < M; ++i) {
      xi_t.coeff(1u << i) = I * modes[i].g * std::exp(-I * modes[i].omega * st.t);
      xi_t_star.coeff(1u << (M + i)) =
          -I * std::conj(modes[i].g) * std::exp(I * modes[i].omega * st.t);
    }

    std::vector<GrassmannElement> bra(model.dim, GrassmannElement(ng));
    for (int nn = 0; nn < model.dim; ++nn)
      bra[nn] = bra_amplitude(st.amp[nn], M);
    std::vector<GrassmannElement> P(model.dim * model.dim, GrassmannElement(ng));
    for (int m = 0; m < model.dim; ++m)
      for (int nn = 0; nn < model.dim; ++nn)
        P[m * model.dim + nn] = mul(st.amp[m], bra[nn]);

    for (int m = 0; m < model.dim; ++m)
      for (int nn = 0; nn < model.dim; ++nn) {
        // identity 1: <P xi_t>_s = -<Qbar P>_s
        cplx lhs1 = statistical_mean(mul(P[m * model.dim + nn], xi_t), M);
        cplx rhs1 = 0;
        for (int kk = 0; kk < model.dim; ++kk)
          rhs1 -= Qbar(m, kk) * statistical_mean(P[kk * model.dim + nn], M);
        rep.max_residual_1 = std::max(rep.max_residual_1, std::abs(lhs1 - rhs1));
        // identity 2: <xi_t^* P>_s = <P Qbar^dag>_s
        cplx lhs2 = statistical_mean(mul(xi_t_star, P[m * model.dim + nn]), M);
        cplx rhs2 = 0;
        for (int kk = 0; kk < model.dim; ++kk)
          rhs2 += statistical_mean(P[m * model.dim + kk], M) * Qbar_d(kk, nn);
        rep.max_residual_2 = std::max(rep.max_residual_2, std::abs(lhs2 - rhs2));
      }
  }
  return rep;
}

}  // namespace fqsd
