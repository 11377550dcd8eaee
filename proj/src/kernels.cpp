#include "fqsd/kernels.hpp"

#include <cmath>

namespace fqsd {

CorrelationKernel CorrelationKernel::discrete_modes(std::vector<Mode> modes) {
  if (modes.empty()) throw ConfigError("discrete_modes: need at least one mode");
  for (const auto& m : modes)
    if (!std::isfinite(m.g.real()) || !std::isfinite(m.g.imag()) ||
        !std::isfinite(m.omega))
      throw ConfigError("discrete_modes: non-finite mode parameters");
  CorrelationKernel k;
  k.type_ = Type::DiscreteModes;
  k.modes_ = std::move(modes);
  return k;
}

CorrelationKernel CorrelationKernel::single_mode(cplx g, double omega_b) {
  CorrelationKernel k = discrete_modes({Mode{g, omega_b}});
  k.type_ = Type::SingleMode;
  return k;
}

CorrelationKernel CorrelationKernel::ornstein_uhlenbeck(double gamma,
                                                        double Omega) {
  if (!(gamma > 0) || !std::isfinite(gamma) || !std::isfinite(Omega))
    throw ConfigError("ornstein_uhlenbeck: require gamma > 0 and finite Omega");
  CorrelationKernel k;
  k.type_ = Type::OrnsteinUhlenbeck;
  k.gamma_ = gamma;
  k.Omega_ = Omega;
  return k;
}

CorrelationKernel CorrelationKernel::ohmic_zero_t(double Gamma,
                                                  double omega_c) {
  if (!(Gamma > 0) || !(omega_c > 0) || !std::isfinite(Gamma) ||
      !std::isfinite(omega_c))
    throw ConfigError("ohmic_zero_t: require Gamma > 0 and omega_c > 0");
  CorrelationKernel k;
  k.type_ = Type::OhmicZeroT;
  k.Gamma_ = Gamma;
  k.omega_c_ = omega_c;
  return k;
}

cplx CorrelationKernel::eval_tau(double tau) const {
  if (!std::isfinite(tau))
    throw std::domain_error("CorrelationKernel::eval: non-finite time");
  // Hermitian stationarity: K(-tau) = conj(K(tau)).
  if (tau < 0) return std::conj(eval_tau(-tau));
  switch (type_) {
    case Type::DiscreteModes:
    case Type::SingleMode: {
      cplx sum = 0;
      for (const auto& m : modes_)
        sum += std::norm(m.g) * std::exp(-I * m.omega * tau);
      return sum;
    }
    case Type::OrnsteinUhlenbeck:
      return 0.5 * gamma_ * std::exp(-(gamma_ + I * Omega_) * tau);
    case Type::OhmicZeroT: {
      const cplx d = 1.0 / omega_c_ + I * tau;
      return Gamma_ / (d * d);
    }
  }
  return 0;
}

cplx CorrelationKernel::eval(double t, double s) const {
  if (!std::isfinite(t) || !std::isfinite(s))
    throw std::domain_error("CorrelationKernel::eval: non-finite time");
  return eval_tau(t - s);
}

std::vector<std::pair<cplx, cplx>> CorrelationKernel::exponential_modes()
    const {
  std::vector<std::pair<cplx, cplx>> out;
  switch (type_) {
    case Type::DiscreteModes:
    case Type::SingleMode:
      for (const auto& m : modes_)
        out.emplace_back(cplx(std::norm(m.g), 0.0), I * m.omega);
      break;
    case Type::OrnsteinUhlenbeck:
      out.emplace_back(cplx(0.5 * gamma_, 0.0), cplx(gamma_, Omega_));
      break;
    case Type::OhmicZeroT:
      throw ConfigError("OhmicZeroT kernel has no exponential-mode form");
  }
  return out;
}

cplx weighted_integral(const CorrelationKernel& kernel,
                       std::span<const cplx> field, double h, Quadrature) {
  const std::size_t n = field.size();
  if (n < 2) return 0;
  if (!(h > 0)) throw ConfigError("weighted_integral: require h > 0");
  const double t = h * static_cast<double>(n - 1);
  cplx acc = 0.5 * (kernel.eval_tau(t) * field[0] + kernel.eval_tau(0.0) * field[n - 1]);
  for (std::size_t j = 1; j + 1 < n; ++j)
    acc += kernel.eval_tau(t - h * static_cast<double>(j)) * field[j];
  return acc * h;
}

}  // namespace fqsd
