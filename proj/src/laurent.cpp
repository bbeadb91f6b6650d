#include "mw/laurent.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mw {

double inf_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

LaurentMatrix::LaurentMatrix(int r, int lo, int hi) : r_(r), lo_(lo), hi_(hi) {
  if (r < 1) throw std::invalid_argument("LaurentMatrix: r must be >= 1");
  if (lo > hi) throw std::invalid_argument("LaurentMatrix: lo > hi");
  c_.assign(static_cast<std::size_t>(hi - lo + 1), Mat::Zero(r, r));
}

LaurentMatrix LaurentMatrix::identity(int r) {
  LaurentMatrix a(r, 0, 0);
  a.coeff(0) = Mat::Identity(r, r);
  return a;
}

LaurentMatrix LaurentMatrix::monomial(const Mat& c, int k) {
  if (c.rows() != c.cols()) throw std::invalid_argument("monomial: matrix not square");
  LaurentMatrix a(static_cast<int>(c.rows()), k, k);
  a.coeff(k) = c;
  return a;
}

LaurentMatrix LaurentMatrix::causal(const std::vector<Mat>& taps) {
  if (taps.empty()) throw std::invalid_argument("causal: no taps");
  const int r = static_cast<int>(taps[0].rows());
  LaurentMatrix a(r, -static_cast<int>(taps.size()) + 1, 0);
  for (std::size_t k = 0; k < taps.size(); ++k) {
    if (taps[k].rows() != r || taps[k].cols() != r)
      throw std::invalid_argument("causal: tap shape mismatch");
    a.coeff(-static_cast<int>(k)) = taps[k];
  }
  return a;
}

Mat& LaurentMatrix::coeff(int k) {
  if (k < lo_ || k > hi_) throw std::out_of_range("LaurentMatrix::coeff: degree out of range");
  return c_[static_cast<std::size_t>(k - lo_)];
}

const Mat& LaurentMatrix::coeff(int k) const {
  if (k < lo_ || k > hi_) throw std::out_of_range("LaurentMatrix::coeff: degree out of range");
  return c_[static_cast<std::size_t>(k - lo_)];
}

Mat LaurentMatrix::at(int k) const {
  if (k < lo_ || k > hi_) return Mat::Zero(r_, r_);
  return c_[static_cast<std::size_t>(k - lo_)];
}

void LaurentMatrix::trim(double tol) {
  int a = lo_, b = hi_;
  while (a < b && inf_norm(c_[static_cast<std::size_t>(a - lo_)]) <= tol) ++a;
  while (b > a && inf_norm(c_[static_cast<std::size_t>(b - lo_)]) <= tol) --b;
  if (a == b && inf_norm(c_[static_cast<std::size_t>(a - lo_)]) <= tol) {
    // All-zero polynomial: canonical form is one zero coefficient at z^0.
    c_.assign(1, Mat::Zero(r_, r_));
    lo_ = hi_ = 0;
    return;
  }
  if (a != lo_ || b != hi_) {
    std::vector<Mat> keep(c_.begin() + (a - lo_), c_.begin() + (b - lo_ + 1));
    c_ = std::move(keep);
    lo_ = a;
    hi_ = b;
  }
}

LaurentScalar::LaurentScalar(int lo, int hi) : lo_(lo), hi_(hi) {
  if (lo > hi) throw std::invalid_argument("LaurentScalar: lo > hi");
  c_.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
}

double& LaurentScalar::coeff(int k) {
  if (k < lo_ || k > hi_) throw std::out_of_range("LaurentScalar::coeff: degree out of range");
  return c_[static_cast<std::size_t>(k - lo_)];
}

double LaurentScalar::coeff(int k) const {
  if (k < lo_ || k > hi_) throw std::out_of_range("LaurentScalar::coeff: degree out of range");
  return c_[static_cast<std::size_t>(k - lo_)];
}

double LaurentScalar::at(int k) const {
  if (k < lo_ || k > hi_) return 0.0;
  return c_[static_cast<std::size_t>(k - lo_)];
}

void LaurentScalar::trim(double tol) {
  int a = lo_, b = hi_;
  while (a < b && std::abs(c_[static_cast<std::size_t>(a - lo_)]) <= tol) ++a;
  while (b > a && std::abs(c_[static_cast<std::size_t>(b - lo_)]) <= tol) --b;
  if (a == b && std::abs(c_[static_cast<std::size_t>(a - lo_)]) <= tol) {
    c_.assign(1, 0.0);
    lo_ = hi_ = 0;
    return;
  }
  if (a != lo_ || b != hi_) {
    std::vector<double> keep(c_.begin() + (a - lo_), c_.begin() + (b - lo_ + 1));
    c_ = std::move(keep);
    lo_ = a;
    hi_ = b;
  }
}

LaurentScalar ls_mul(const LaurentScalar& a, const LaurentScalar& b) {
  LaurentScalar out(a.lo() + b.lo(), a.hi() + b.hi());
  for (int i = a.lo(); i <= a.hi(); ++i)
    for (int j = b.lo(); j <= b.hi(); ++j) out.coeff(i + j) += a.coeff(i) * b.coeff(j);
  out.trim();
  return out;
}

LaurentScalar ls_add(const LaurentScalar& a, const LaurentScalar& b) {
  LaurentScalar out(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
  for (int k = out.lo(); k <= out.hi(); ++k) out.coeff(k) = a.at(k) + b.at(k);
  out.trim();
  return out;
}

LaurentScalar ls_sub(const LaurentScalar& a, const LaurentScalar& b) {
  LaurentScalar out(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
  for (int k = out.lo(); k <= out.hi(); ++k) out.coeff(k) = a.at(k) - b.at(k);
  out.trim();
  return out;
}

double ls_dist(const LaurentScalar& a, const LaurentScalar& b) {
  double d = 0.0;
  for (int k = std::min(a.lo(), b.lo()); k <= std::max(a.hi(), b.hi()); ++k)
    d = std::max(d, std::abs(a.at(k) - b.at(k)));
  return d;
}

LaurentMatrix lm_add(const LaurentMatrix& a, const LaurentMatrix& b) {
  if (a.r() != b.r()) throw std::invalid_argument("lm_add: channel count mismatch");
  LaurentMatrix out(a.r(), std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
  for (int k = out.lo(); k <= out.hi(); ++k) out.coeff(k) = a.at(k) + b.at(k);
  out.trim();
  return out;
}

LaurentMatrix lm_sub(const LaurentMatrix& a, const LaurentMatrix& b) {
  if (a.r() != b.r()) throw std::invalid_argument("lm_sub: channel count mismatch");
  LaurentMatrix out(a.r(), std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
  for (int k = out.lo(); k <= out.hi(); ++k) out.coeff(k) = a.at(k) - b.at(k);
  out.trim();
  return out;
}

LaurentMatrix lm_mul(const LaurentMatrix& a, const LaurentMatrix& b) {
  if (a.r() != b.r()) throw std::invalid_argument("lm_mul: channel count mismatch");
  LaurentMatrix out(a.r(), a.lo() + b.lo(), a.hi() + b.hi());
  for (int i = a.lo(); i <= a.hi(); ++i)
    for (int j = b.lo(); j <= b.hi(); ++j) out.coeff(i + j) += a.coeff(i) * b.coeff(j);
  out.trim();
  return out;
}

LaurentMatrix lm_paraconj(const LaurentMatrix& a) {
  LaurentMatrix out(a.r(), -a.hi(), -a.lo());
  for (int k = a.lo(); k <= a.hi(); ++k) out.coeff(-k) = a.coeff(k).transpose();
  return out;
}

namespace {

// Laurent polynomial formed by one matrix entry across all degrees.
LaurentScalar entry_poly(const LaurentMatrix& a, int i, int j) {
  LaurentScalar p(a.lo(), a.hi());
  for (int k = a.lo(); k <= a.hi(); ++k) p.coeff(k) = a.coeff(k)(i, j);
  p.trim();
  return p;
}

}  // namespace

LaurentScalar lm_det(const LaurentMatrix& a) {
  const int r = a.r();
  if (r > 3) throw std::invalid_argument("lm_det: only r <= 3 supported");
  if (r == 1) return entry_poly(a, 0, 0);
  auto minor2 = [&](int i0, int i1, int j0, int j1) {
    return ls_sub(ls_mul(entry_poly(a, i0, j0), entry_poly(a, i1, j1)),
                  ls_mul(entry_poly(a, i0, j1), entry_poly(a, i1, j0)));
  };
  if (r == 2) return minor2(0, 1, 0, 1);
  LaurentScalar d = ls_mul(entry_poly(a, 0, 0), minor2(1, 2, 1, 2));
  d = ls_sub(d, ls_mul(entry_poly(a, 0, 1), minor2(1, 2, 0, 2)));
  d = ls_add(d, ls_mul(entry_poly(a, 0, 2), minor2(1, 2, 0, 1)));
  return d;
}

double lm_dist(const LaurentMatrix& a, const LaurentMatrix& b) {
  if (a.r() != b.r()) throw std::invalid_argument("lm_dist: channel count mismatch");
  double d = 0.0;
  for (int k = std::min(a.lo(), b.lo()); k <= std::max(a.hi(), b.hi()); ++k)
    d = std::max(d, inf_norm(a.at(k) - b.at(k)));
  return d;
}

bool is_halfband(const LaurentMatrix& p, double tol) {
  const Mat eye = Mat::Identity(p.r(), p.r());
  if (inf_norm(p.at(0) - eye) > tol) return false;
  for (int k = p.lo(); k <= p.hi(); ++k)
    if (k != 0 && k % 2 == 0 && inf_norm(p.at(k)) > tol) return false;
  return true;
}

Eigen::MatrixXcd lm_eval(const LaurentMatrix& p, std::complex<double> z) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(p.r(), p.r());
  for (int k = p.lo(); k <= p.hi(); ++k)
    out += p.coeff(k).cast<std::complex<double>>() * std::pow(z, k);
  return out;
}

double min_eig_on_circle(const LaurentMatrix& p, int grid_size) {
  if (grid_size < 1) throw std::invalid_argument("min_eig_on_circle: grid_size must be >= 1");
  if (lm_dist(lm_paraconj(p), p) > 1e-8)
    throw std::invalid_argument("min_eig_on_circle: input is not para-Hermitian");
  double lo = std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
  for (int j = 0; j < grid_size; ++j) {
    const double w = 2.0 * std::numbers::pi * j / grid_size;
    const std::complex<double> z(std::cos(w), std::sin(w));
    Eigen::MatrixXcd a = lm_eval(p, z);
    a = 0.5 * (a + a.adjoint().eval());  // kill round-off asymmetry
    es.compute(a, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

}  // namespace mw
