#pragma once

#include <utility>

#include "mw/laurent.hpp"

namespace mw {

/// Result of the fixed-point spectral-factorization iteration
///   X^(k+1) = P0 - P1^T [X^(k)]^-1 P1,  X^(0) = P0.
struct BauerState {
  Mat X;               ///< current iterate, symmetric positive definite
  long iter = 0;       ///< index k of the returned iterate
  double residual = 0; ///< ||X - (P0 - P1^T X^-1 P1)||_inf at the returned X
  bool converged = false;
};

/// Runs the fixed-point iteration on a half-band P(z) = P1^T z^-1 + P0 + P1 z
/// until the residual drops to tol, the residual stagnates, or max_iter is
/// reached. Only the single-lag case (hi = 1) is supported.
BauerState bauer_fixed_point(const LaurentMatrix& p, double tol = 1e-12,
                             long max_iter = 10'000'000);

/// Cholesky factorization of the (n+1)x(n+1) block-tridiagonal truncation of
/// the coefficient matrix of P, processed block row by block row. Returns the
/// last block row (H1_n, H0_n); H0_n * H0_n^T equals the n-th fixed-point
/// iterate.
std::pair<Mat, Mat> bauer_truncated_cholesky(const LaurentMatrix& p, long n);

/// H0 = lower Cholesky factor of X (positive diagonal), H1 = P1^T H0^-T.
std::pair<Mat, Mat> extract_factors(const Mat& x, const LaurentMatrix& p);

/// ||H(z) H(z)* - P(z)||_inf over all coefficients.
double verify_factorization(const LaurentMatrix& h, const LaurentMatrix& p);

}  // namespace mw
