#include "mw/bauer.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mw {

namespace {

void require_single_lag_halfband(const LaurentMatrix& p, const char* who) {
  if (p.hi() != 1)
    throw std::invalid_argument(std::string(who) + ": only single-lag (hi = 1) filters supported");
  if (!is_halfband(p))
    throw std::invalid_argument(std::string(who) + ": input is not half-band");
}

// The iteration limit sits on the boundary of the positive-definite cone
// (det P has zeros on the unit circle), so the map is neutrally stable along
// one direction and double-precision rounding drifts the iterate ~3e-5 away
// from the limit no matter how many steps run. Carrying the iterate in quad
// precision pushes that floor far below every advertised tolerance.
using quad = __float128;

struct QuadMat {
  int n = 0;
  std::vector<quad> a;  // row-major

  explicit QuadMat(int size = 0) : n(size), a(static_cast<std::size_t>(size) * size, quad(0)) {}
  quad& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  quad at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

QuadMat to_quad(const Mat& m) {
  QuadMat q(static_cast<int>(m.rows()));
  for (int i = 0; i < q.n; ++i)
    for (int j = 0; j < q.n; ++j) q.at(i, j) = static_cast<quad>(m(i, j));
  return q;
}

Mat to_double(const QuadMat& q) {
  Mat m(q.n, q.n);
  for (int i = 0; i < q.n; ++i)
    for (int j = 0; j < q.n; ++j) m(i, j) = static_cast<double>(q.at(i, j));
  return m;
}

quad qabs(quad v) { return v < quad(0) ? -v : v; }

quad qdist(const QuadMat& x, const QuadMat& y) {
  quad m = 0;
  for (std::size_t i = 0; i < x.a.size(); ++i) m = std::max(m, qabs(x.a[i] - y.a[i]));
  return m;
}

// Inverse of a symmetric positive definite matrix via LDL^T; the pivot signs
// double as the admissibility guard of the iteration.
QuadMat spd_inverse(const QuadMat& x, const char* who) {
  const int n = x.n;
  quad scale = 0;
  for (quad v : x.a) scale = std::max(scale, qabs(v));
  QuadMat l(n);  // unit lower triangle, diagonal holds D
  for (int j = 0; j < n; ++j) {
    quad d = x.at(j, j);
    for (int k = 0; k < j; ++k) d -= l.at(j, k) * l.at(j, k) * l.at(k, k);
    if (!(d > scale * quad(1e-28)))
      throw std::runtime_error(std::string(who) +
                               ": iterate is numerically singular (inadmissible product filter)");
    l.at(j, j) = d;
    for (int i = j + 1; i < n; ++i) {
      quad s = x.at(i, j);
      for (int k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k) * l.at(k, k);
      l.at(i, j) = s / d;
    }
  }
  // Columnwise solve L D L^T z = e_j.
  QuadMat inv(n);
  std::vector<quad> z(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      quad s = i == j ? quad(1) : quad(0);
      for (int k = 0; k < i; ++k) s -= l.at(i, k) * z[static_cast<std::size_t>(k)];
      z[static_cast<std::size_t>(i)] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      quad s = z[static_cast<std::size_t>(i)] / l.at(i, i);
      for (int k = i + 1; k < n; ++k) s -= l.at(k, i) * z[static_cast<std::size_t>(k)];
      z[static_cast<std::size_t>(i)] = s;
    }
    for (int i = 0; i < n; ++i) inv.at(i, j) = z[static_cast<std::size_t>(i)];
  }
  return inv;
}

// next = p0 - p1^T inv p1
QuadMat iterate_once(const QuadMat& p0, const QuadMat& p1, const QuadMat& inv) {
  const int n = p0.n;
  QuadMat t(n);  // inv * p1
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      quad s = 0;
      for (int k = 0; k < n; ++k) s += inv.at(i, k) * p1.at(k, j);
      t.at(i, j) = s;
    }
  QuadMat next(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      quad s = p0.at(i, j);
      for (int k = 0; k < n; ++k) s -= p1.at(k, i) * t.at(k, j);
      next.at(i, j) = s;
    }
  return next;
}

}  // namespace

BauerState bauer_fixed_point(const LaurentMatrix& p, double tol, long max_iter) {
  require_single_lag_halfband(p, "bauer_fixed_point");
  const QuadMat p0 = to_quad(p.at(0));
  const QuadMat p1 = to_quad(p.at(1));

  BauerState st;
  QuadMat x = p0;
  quad prev_res = std::numeric_limits<double>::infinity();
  long stagnant = 0;

  for (long k = 0; k <= max_iter; ++k) {
    const QuadMat next = iterate_once(p0, p1, spd_inverse(x, "bauer_fixed_point"));
    const quad res = qdist(x, next);
    st.iter = k;
    st.residual = static_cast<double>(res);
    if (res <= static_cast<quad>(tol)) {
      st.converged = true;
      st.X = to_double(x);
      return st;
    }
    // Progress-based early abort: sublinear tails can stall below the
    // (quad-precision) rounding floor.
    if (qabs(res - prev_res) <= quad(1e-30) * std::max(quad(1), prev_res)) {
      if (++stagnant >= 1000) {
        st.X = to_double(x);
        return st;
      }
    } else {
      stagnant = 0;
    }
    prev_res = res;
    x = next;
  }
  st.X = to_double(x);
  return st;
}

std::pair<Mat, Mat> bauer_truncated_cholesky(const LaurentMatrix& p, long n) {
  require_single_lag_halfband(p, "bauer_truncated_cholesky");
  if (n < 1) throw std::invalid_argument("bauer_truncated_cholesky: n must be >= 1");
  const Mat p0 = p.at(0);
  const Mat p1 = p.at(1);
  const int r = p.r();

  // Block row 0 factors P0 alone; each later row solves against the previous
  // diagonal factor and refactors the Schur complement.
  Eigen::LLT<Mat> llt(p0);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("bauer_truncated_cholesky: truncation not positive definite");
  Mat l = llt.matrixL();
  Mat b = Mat::Zero(r, r);
  for (long k = 1; k <= n; ++k) {
    b = l.triangularView<Eigen::Lower>().solve(p1).transpose();
    llt.compute(p0 - b * b.transpose());
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("bauer_truncated_cholesky: truncation not positive definite");
    l = llt.matrixL();
  }
  return {b, l};
}

std::pair<Mat, Mat> extract_factors(const Mat& x, const LaurentMatrix& p) {
  Eigen::LLT<Mat> llt(x);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("extract_factors: X is not positive definite");
  const Mat h0 = llt.matrixL();
  const Mat h1 =
      h0.triangularView<Eigen::Lower>().solve(p.at(1)).transpose();  // P1^T H0^-T
  return {h0, h1};
}

double verify_factorization(const LaurentMatrix& h, const LaurentMatrix& p) {
  return lm_dist(lm_mul(h, lm_paraconj(h)), p);
}

}  // namespace mw
