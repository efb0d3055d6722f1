#pragma once

#include <vector>

#include "spinecurve/matrix.hpp"

namespace spinecurve {

/// Full singular value decomposition A = U * Sigma * V^T.
/// u is rows x rows, v is cols x cols, sigma holds min(rows, cols)
/// non-negative values in descending order. Signs are fixed so the
/// largest-magnitude entry of each column of u is positive (the paired
/// v column is negated along with it).
struct SvdResult {
    Matrix u;
    std::vector<double> sigma;
    Matrix v;
};

/// One-sided Jacobi SVD. Deterministic: identical input gives identical
/// output. Throws NonFiniteInput on NaN/inf entries.
SvdResult svd(const Matrix& a);

/// Number of singular values above rel_tol * sigma_max (0 if sigma_max == 0).
/// rel_tol must lie in (0, 1).
int numerical_rank(const SvdResult& s, double rel_tol);

} // namespace spinecurve
