#include <cmath>
#include <vector>

#include <doctest.h>

#include "fqsd/grassmann.hpp"
#include "fqsd/oracle.hpp"

using namespace fqsd;

namespace {

GrassmannElement gen(int n, int g) { return GrassmannElement::generator(n, g); }

int popcount(unsigned m) { return __builtin_popcount(m); }

}  // namespace

TEST_CASE("generators anticommute and square to zero") {
  const auto a = gen(4, 0), b = gen(4, 1);
  CHECK((mul(a, b) + mul(b, a)).max_abs() == 0.0);
  CHECK(mul(a, a).max_abs() == 0.0);
  CHECK(std::abs(mul(a, b).coeff(0b0011) - cplx(1.0)) < 1e-15);
}

TEST_CASE("product of (1 + xi_0)(1 + xi_2)") {
  const auto one = GrassmannElement::scalar(4, 1.0);
  const auto p = mul(one + gen(4, 0), one + gen(4, 2));
  CHECK(p.coeff(0b0000) == cplx(1.0));
  CHECK(p.coeff(0b0001) == cplx(1.0));
  CHECK(p.coeff(0b0100) == cplx(1.0));
  CHECK(p.coeff(0b0101) == cplx(1.0));
  CHECK(p.coeff(0b0010) == cplx(0.0));
}

TEST_CASE("multiplication is associative") {
  GrassmannElement a(4), b(4), c(4);
  // Small dense elements with distinct coefficients.
  for (unsigned m = 0; m < 16; ++m) {
    a.coeff(m) = cplx(0.1 * m, 0.3 - 0.05 * m);
    b.coeff(m) = cplx(std::sin(1.0 + m), 0.2 * m);
    c.coeff(m) = cplx(0.7, -0.1 * m);
  }
  const auto lhs = mul(mul(a, b), c);
  const auto rhs = mul(a, mul(b, c));
  CHECK((lhs - rhs).max_abs() < 1e-12);
}

TEST_CASE("left derivative strips after anticommuting to the front") {
  // d/dxi_0 (xi_1 xi_0) = -xi_1, d/dxi_0 (xi_0 xi_1) = xi_1.
  const auto x01 = mul(gen(4, 0), gen(4, 1));
  const auto x10 = mul(gen(4, 1), gen(4, 0));
  CHECK(std::abs(left_derivative(x01, 0).coeff(0b0010) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(left_derivative(x10, 0).coeff(0b0010) + cplx(1.0)) < 1e-15);
  CHECK(left_derivative(GrassmannElement::scalar(4, 2.0), 0).max_abs() == 0.0);
  CHECK(left_derivative(gen(4, 1), 0).max_abs() == 0.0);
}

TEST_CASE("left derivative obeys the graded Leibniz rule") {
  // d(ab) = (da) b + (-1)^{|a|} a (db) for homogeneous a.
  for (unsigned am : {0b0001u, 0b0011u, 0b0110u, 0b0111u}) {
    GrassmannElement a(4);
    a.coeff(am) = cplx(0.8, 0.2);
    GrassmannElement b(4);
    for (unsigned m = 0; m < 16; ++m) b.coeff(m) = cplx(0.1 + 0.05 * m, -0.02 * m);
    const double sign = popcount(am) % 2 == 0 ? 1.0 : -1.0;
    for (int g = 0; g < 4; ++g) {
      const auto lhs = left_derivative(mul(a, b), g);
      const auto rhs =
          mul(left_derivative(a, g), b) + sign * mul(a, left_derivative(b, g));
      CHECK((lhs - rhs).max_abs() < 1e-14);
    }
  }
}

TEST_CASE("Gaussian statistical mean") {
  const int M = 2, n = 2 * M;
  CHECK(statistical_mean(GrassmannElement::scalar(n, 1.0), M) == cplx(1.0));
  // Odd monomials vanish.
  CHECK(std::abs(statistical_mean(gen(n, 0), M)) < 1e-15);
  CHECK(std::abs(statistical_mean(mul(mul(gen(n, 0), gen(n, 1)), gen(n, 2)), M)) <
        1e-15);
  // <xi_i xi_i^*> = 1 (the weight exp(-xi^* xi) normalizes <1> to 1),
  // cross pairings vanish, and disjoint pairs factorize.
  CHECK(std::abs(statistical_mean(mul(gen(n, 0), gen(n, M + 0)), M) - cplx(1.0)) <
        1e-15);
  CHECK(std::abs(statistical_mean(mul(gen(n, M + 0), gen(n, 0)), M) + cplx(1.0)) <
        1e-15);
  CHECK(std::abs(statistical_mean(mul(gen(n, 0), gen(n, M + 1)), M)) < 1e-15);
  const auto pair0 = mul(gen(n, 0), gen(n, M + 0));
  const auto pair1 = mul(gen(n, 1), gen(n, M + 1));
  CHECK(std::abs(statistical_mean(mul(pair0, pair1), M) - cplx(1.0)) < 1e-15);
}

TEST_CASE("micro QSD with zero coupling stays grade zero and unitary") {
  const auto m = build_one_qubit(1.0);
  const std::vector<Mode> modes{{cplx(0.0), 1.0}};
  const Vec psi0 = m.default_state();
  const auto states = micro_qsd_propagate(m, modes, psi0, 1.0, 1e-3, {1.0});
  REQUIRE(states.size() == 1);
  for (const auto& amp : states[0].amp)
    for (unsigned mask = 1; mask < amp.size(); ++mask)
      CHECK(std::abs(amp.coeff(mask)) < 1e-14);
  Eigen::SelfAdjointEigenSolver<Mat> es(m.H_s);
  const Mat U = es.eigenvectors() *
                (-I * 1.0 * es.eigenvalues().cast<cplx>().array())
                    .exp().matrix().asDiagonal() *
                es.eigenvectors().adjoint();
  const Vec want = U * psi0;
  for (int i = 0; i < 2; ++i)
    CHECK(std::abs(states[0].amp[std::size_t(i)].coeff(0) - want(i)) < 1e-10);
}

TEST_CASE("reduced density recovers the initial state at t = 0") {
  const auto m = build_one_qubit(1.0);
  const std::vector<Mode> modes{{cplx(0.8), 1.5}};
  const Vec psi0 = m.default_state();
  const auto states = micro_qsd_propagate(m, modes, psi0, 0.5, 1e-3, {0.0, 0.5});
  REQUIRE(states.size() == 2);
  const Mat rho0 = reduced_density(states[0], 1);
  CHECK((rho0 - psi0 * psi0.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  const Mat rho = reduced_density(states[1], 1);
  CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(rho.trace() - cplx(1.0)) < 1e-10);
}

TEST_CASE("reduced density matches the exact oracle at t = 0.5") {
  const auto m = build_one_qubit(1.0);
  const std::vector<Mode> modes{{cplx(0.8), 1.5}};
  const Vec psi0 = m.default_state();
  const auto states = micro_qsd_propagate(m, modes, psi0, 0.5, 1e-3, {0.5});
  const Mat rho = reduced_density(states[0], 1);

  const CompositeSpec comp{m, modes};
  const auto oracle = exact_evolve(comp, compose_with_vacuum(comp, psi0), 0.5, 0.5);
  const Mat want = oracle.rho.back();
  CHECK((rho - want).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("Novikov identities hold along the trajectory") {
  const auto m = build_one_qubit(1.0);
  const std::vector<Mode> modes{{cplx(0.7), 1.2}, {cplx(0.4), 0.6}};
  const auto rep = novikov_check(m, modes, 1e-3, {0.3, 0.6});
  CHECK(rep.max_residual_1 < 1e-10);
  CHECK(rep.max_residual_2 < 1e-10);
}
