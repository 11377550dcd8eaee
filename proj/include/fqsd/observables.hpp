#pragma once

#include "fqsd/types.hpp"

namespace fqsd {

/// Tr(rho op).
cplx expectation(const Mat& rho, const Mat& op);

/// Wootters concurrence of a two-qubit state. Eigenvalues of the R matrix
/// are taken from the Hermitized product sqrt(rho) (Y x Y) rho^* (Y x Y)
/// sqrt(rho) with negative roundoff clamped to zero. If warned_negative is
/// given it is set when rho has an eigenvalue below -1e-8.
double concurrence(const Mat& rho, bool* warned_negative = nullptr);

}  // namespace fqsd
