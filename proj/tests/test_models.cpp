#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "fqsd/models.hpp"
#include "fqsd/observables.hpp"

using namespace fqsd;

namespace {

std::vector<double> sorted_real_eigs(const Mat& H) {
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  std::vector<double> v(es.eigenvalues().data(),
                        es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

Mat anticomm(const Mat& a, const Mat& b) { return a * b + b * a; }

}  // namespace

TEST_CASE("ladder operators in the {|e>, |g>} basis") {
  CHECK(sigma_minus()(1, 0) == cplx(1.0));
  CHECK(sigma_minus()(0, 1) == cplx(0.0));
  CHECK((sigma_plus() - sigma_minus().adjoint()).norm() == 0.0);
  CHECK((sigma_plus() * sigma_minus() -
         (Mat::Identity(2, 2) + pauli_z()) / 2.0)
            .norm() < 1e-15);
  CHECK((pauli_x() * pauli_y() - I * pauli_z()).norm() < 1e-15);
}

TEST_CASE("one-qubit model") {
  const auto m = build_one_qubit(2.0);
  CHECK(m.dim == 2);
  const auto ev = sorted_real_eigs(m.H_s);
  CHECK(ev[0] == doctest::Approx(-1.0));
  CHECK(ev[1] == doctest::Approx(1.0));
  const Vec psi = m.default_state();
  CHECK(std::abs(psi.norm() - 1.0) < 1e-15);
  const Mat rho = psi * psi.adjoint();
  CHECK(std::abs(rho(1, 0) - cplx(0.5)) < 1e-15);
}

TEST_CASE("two-qubit Hamiltonian spectrum") {
  TwoQubitParams p;
  p.omega_A = p.omega_B = 1.0;
  p.J_xy = 0.5;
  p.J_z = 0.25;
  const auto m = build_two_qubit(p);
  // |ee>: 2 + Jz; |gg>: -2 + Jz; {|eg>, |ge>}: -Jz +- Jxy.
  const std::vector<double> want{-1.75, -0.75, 0.25, 2.25};
  const auto got = sorted_real_eigs(m.H_s);
  for (std::size_t i = 0; i < want.size(); ++i)
    CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
  CHECK(m.q_basis.size() == 5);
  CHECK(concurrence(m.default_state() * m.default_state().adjoint()) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Jordan-Wigner operators obey the fermion algebra") {
  const auto a = jordan_wigner_annihilators(3);
  const Mat id = Mat::Identity(8, 8);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Mat ac = anticomm(a[i], a[j].adjoint());
      CHECK((ac - (i == j ? id : Mat::Zero(8, 8))).norm() < 1e-14);
      CHECK(anticomm(a[i], a[j]).norm() < 1e-14);
    }
  }
}

TEST_CASE("Jordan-Wigner occupation convention: |e> is occupied") {
  const auto a = jordan_wigner_annihilators(1);
  Vec e = Vec::Zero(2), g = Vec::Zero(2);
  e(0) = 1;
  g(1) = 1;
  CHECK((a[0] * e - g).norm() < 1e-15);
  CHECK((a[0] * g).norm() < 1e-15);
}

TEST_CASE("boson ladder and coherent states") {
  const Mat a = boson_annihilation(5);
  Vec two = Vec::Zero(5);
  two(2) = 1;
  CHECK(std::abs((a * two)(1) - std::sqrt(2.0)) < 1e-15);

  const cplx alpha(0.5, 0.0);
  const Vec psi = coherent_state(alpha, 30);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-14);
  const Mat a30 = boson_annihilation(30);
  const cplx mean = (psi.adjoint() * a30 * psi)(0);
  CHECK(std::abs(mean - alpha) < 1e-10);
}

TEST_CASE("QBM model: canonical pair and oscillator spectrum") {
  const auto m = build_qbm(1.0, 30);
  const Mat& q = m.q_basis[0];
  const Mat& p = m.q_basis[1];
  const Mat comm = q * p - p * q;
  // [q, p] = i away from the truncation corner.
  CHECK((comm.topLeftCorner(20, 20) - I * Mat::Identity(20, 20)).norm() < 1e-13);
  const auto ev = sorted_real_eigs(m.H_s);
  for (int n = 0; n < 5; ++n)
    CHECK(ev[std::size_t(n)] == doctest::Approx(2.0 * n + 1.0).epsilon(1e-12));
  CHECK((m.L - q).norm() == 0.0);
  // Default state is coherent with <q> = 1.
  const Vec psi = m.default_state();
  CHECK(std::abs(expectation(psi * psi.adjoint(), q) - cplx(1.0)) < 1e-12);
}

TEST_CASE("n-fermion model assembles number operators") {
  const std::vector<double> freqs{0.5, 1.0, 2.0};
  const auto m = build_n_fermion(freqs);
  CHECK(m.dim == 8);
  CHECK(m.q_basis.size() == 3);
  const auto a = jordan_wigner_annihilators(3);
  Mat H = Mat::Zero(8, 8);
  Mat L = Mat::Zero(8, 8);
  for (int j = 0; j < 3; ++j) {
    H += freqs[std::size_t(j)] * (a[j].adjoint() * a[j]);
    L += a[j];
  }
  CHECK((m.H_s - H).norm() < 1e-14);
  CHECK((m.L - L).norm() < 1e-14);
}

TEST_CASE("n-boson model carries the five-operator basis") {
  const auto m = build_n_boson(2.0, 1.0);
  CHECK(m.dim == 4);
  CHECK(m.q_basis.size() == 5);
  const auto f = build_n_fermion({2.0, 1.0});
  CHECK((m.H_s - f.H_s).norm() < 1e-14);
  CHECK((m.L - f.L).norm() < 1e-14);
  // First two basis operators are the plain annihilators.
  CHECK((m.q_basis[0] - f.q_basis[0]).norm() < 1e-14);
  CHECK((m.q_basis[1] - f.q_basis[1]).norm() < 1e-14);
}

TEST_CASE("q_init contracts the basis to the coupling operator") {
  TwoQubitParams p;
  p.kappa_A = 0.8;
  p.kappa_B = 0.6;
  const std::vector<ModelSpec> models{
      build_one_qubit(1.0), build_two_qubit(p), build_qbm(1.0, 12),
      build_n_fermion({0.5, 1.0, 2.0}), build_n_boson(1.0, 2.0)};
  for (const auto& m : models) {
    Mat sum = Mat::Zero(m.dim, m.dim);
    for (std::size_t i = 0; i < m.q_init.size(); ++i)
      sum += m.q_init[i] * m.q_basis[i];
    CHECK((sum - m.L).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("chain bath modes") {
  const auto modes = chain_bath_modes(4);
  REQUIRE(modes.size() == 4);
  double sum = 0;
  for (const auto& m : modes) sum += std::norm(m.g);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  std::vector<double> w;
  for (const auto& m : modes) w.push_back(m.omega);
  std::sort(w.begin(), w.end());
  const std::vector<double> want{-2.0, 0.0, 0.0, 2.0};
  for (std::size_t i = 0; i < want.size(); ++i)
    CHECK(w[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("model construction rejects bad parameters") {
  CHECK_THROWS_AS(build_one_qubit(std::nan("")), ConfigError);
  CHECK_THROWS_AS(build_qbm(std::nan(""), 30), ConfigError);
  CHECK_THROWS_AS(build_qbm(1.0, 1), ConfigError);
  CHECK_THROWS_AS(build_n_fermion({}), ConfigError);
  TwoQubitParams p;
  p.kappa_A = -1.0;
  CHECK_THROWS_AS(build_two_qubit(p), ConfigError);
}
