#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace mw {

using Mat = Eigen::MatrixXd;

/// Max-abs-entry norm used for all coefficient-wise comparisons.
double inf_norm(const Mat& a);

/// Laurent polynomial with square real matrix coefficients.
/// Coefficients are stored densely for every power of z in [lo, hi].
class LaurentMatrix {
 public:
  LaurentMatrix() = default;
  LaurentMatrix(int r, int lo, int hi);

  static LaurentMatrix identity(int r);
  /// C * z^k for a single matrix coefficient C.
  static LaurentMatrix monomial(const Mat& c, int k);
  /// Causal filter symbol sum_k taps[k] * z^{-k}.
  static LaurentMatrix causal(const std::vector<Mat>& taps);

  int r() const { return r_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }

  /// Coefficient of z^k; k must lie in [lo, hi].
  Mat& coeff(int k);
  const Mat& coeff(int k) const;
  /// Coefficient of z^k, zero matrix outside [lo, hi].
  Mat at(int k) const;

  /// Drops zero leading/trailing coefficients (entries <= tol in magnitude),
  /// collapsing an all-zero polynomial to a single zero coefficient at z^0.
  void trim(double tol = 0.0);

 private:
  int r_ = 0;
  int lo_ = 0;
  int hi_ = -1;
  std::vector<Mat> c_;
};

/// Scalar Laurent polynomial, same storage conventions.
class LaurentScalar {
 public:
  LaurentScalar() = default;
  LaurentScalar(int lo, int hi);

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  double& coeff(int k);
  double coeff(int k) const;
  double at(int k) const;
  void trim(double tol = 0.0);

 private:
  int lo_ = 0;
  int hi_ = -1;
  std::vector<double> c_;
};

LaurentScalar ls_mul(const LaurentScalar& a, const LaurentScalar& b);
LaurentScalar ls_add(const LaurentScalar& a, const LaurentScalar& b);
LaurentScalar ls_sub(const LaurentScalar& a, const LaurentScalar& b);
/// Max abs coefficient difference over the union of degree ranges.
double ls_dist(const LaurentScalar& a, const LaurentScalar& b);

LaurentMatrix lm_add(const LaurentMatrix& a, const LaurentMatrix& b);
LaurentMatrix lm_sub(const LaurentMatrix& a, const LaurentMatrix& b);
LaurentMatrix lm_mul(const LaurentMatrix& a, const LaurentMatrix& b);

/// Para-conjugate A(z)* = sum_k A_k^T z^{-k}; an involution.
LaurentMatrix lm_paraconj(const LaurentMatrix& a);

/// Determinant by cofactor expansion over coefficient convolutions; r <= 3.
LaurentScalar lm_det(const LaurentMatrix& a);

/// Max abs coefficient-entry difference over the union of degree ranges.
double lm_dist(const LaurentMatrix& a, const LaurentMatrix& b);

/// P(z) + P(-z) = 2I test: P_0 = I and all other even-lag coefficients vanish.
bool is_halfband(const LaurentMatrix& p, double tol = 1e-10);

/// Pointwise evaluation P(z) at a complex argument.
Eigen::MatrixXcd lm_eval(const LaurentMatrix& p, std::complex<double> z);

/// Smallest eigenvalue of the Hermitian matrix P(e^{iw}) over a uniform grid
/// of grid_size points on the unit circle. Requires para-Hermitian input.
double min_eig_on_circle(const LaurentMatrix& p, int grid_size = 1024);

}  // namespace mw
