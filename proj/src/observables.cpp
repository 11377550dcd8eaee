#include "fqsd/observables.hpp"

#include <algorithm>
#include <cmath>

#include "fqsd/models.hpp"

namespace fqsd {

cplx expectation(const Mat& rho, const Mat& op) {
  if (rho.rows() != op.rows() || rho.cols() != op.cols())
    throw ConfigError("expectation: dimension mismatch");
  return (rho * op).trace();
}

double concurrence(const Mat& rho, bool* warned_negative) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw ConfigError("concurrence: needs a 4x4 two-qubit state");
  const Mat herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(herm);
  if (warned_negative) *warned_negative = es.eigenvalues().minCoeff() < -1e-8;

  // sqrt(rho) with tiny negative eigenvalues clamped
  Mat sqrt_rho = Mat::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    const double lam = std::max(es.eigenvalues()(i), 0.0);
    sqrt_rho += std::sqrt(lam) * es.eigenvectors().col(i) *
                es.eigenvectors().col(i).adjoint();
  }
  const Mat yy = kron(pauli_y(), pauli_y());
  const Mat R = sqrt_rho * yy * herm.conjugate() * yy * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<Mat> er(0.5 * (R + R.adjoint()));

  double lam[4];
  for (int i = 0; i < 4; ++i)
    lam[i] = std::sqrt(std::max(er.eigenvalues()(i), 0.0));
  std::sort(lam, lam + 4, std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

}  // namespace fqsd
