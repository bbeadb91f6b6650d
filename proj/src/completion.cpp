#include "mw/completion.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <stdexcept>

namespace mw {

Mat SymmetrySignature::as_matrix() const {
  Mat s = Mat::Zero(static_cast<int>(signs.size()), static_cast<int>(signs.size()));
  for (std::size_t i = 0; i < signs.size(); ++i) s(static_cast<int>(i), static_cast<int>(i)) = signs[i];
  return s;
}

SymmetrySignature negated(const SymmetrySignature& s) {
  SymmetrySignature out = s;
  for (int& v : out.signs) v = -v;
  return out;
}

SymmetrySignature detect_symmetry(const Mat& h0, const Mat& h1, double tol) {
  const int r = static_cast<int>(h0.rows());
  if (h0.cols() != r || h1.rows() != r || h1.cols() != r)
    throw std::invalid_argument("detect_symmetry: matrices must be square and equal-sized");
  // Conjugation by S is invariant under a global sign flip, so fixing the
  // first sign to +1 enumerates every distinct signature.
  for (int bits = 0; bits < (1 << (r - 1)) * ((r > 1) ? 1 : 1); ++bits) {
    SymmetrySignature sig;
    sig.signs.assign(static_cast<std::size_t>(r), 1);
    for (int i = 1; i < r; ++i)
      if (bits & (1 << (i - 1))) sig.signs[static_cast<std::size_t>(i)] = -1;
    const Mat s = sig.as_matrix();
    if (inf_norm(h1 - s * h0 * s) <= tol) return sig;
  }
  throw std::runtime_error("detect_symmetry: no diagonal +-1 signature satisfies H1 = S H0 S");
}

std::pair<Mat, Mat> orthogonal_complement(const Mat& h0, const Mat& h1, double tol) {
  const int r = static_cast<int>(h0.rows());
  Mat a(r, 2 * r);
  a << h0, h1;
  if (inf_norm(Mat(a * a.transpose() - Mat::Identity(r, r))) > tol)
    throw std::invalid_argument("orthogonal_complement: rows of [H0, H1] are not orthonormal");

  Eigen::HouseholderQR<Mat> qr(a.transpose());
  const Mat q = qr.householderQ();
  const Mat comp = q.rightCols(r).transpose();
  return {comp.leftCols(r), comp.rightCols(r)};
}

namespace {

// Sign-normalizes row i of [G0, G1] in place: the largest-magnitude entry
// (earliest on ties) is made positive.
void normalize_row_sign(Mat& g0, Mat& g1, int i) {
  const int r = static_cast<int>(g0.cols());
  double best = -1.0;
  double lead = 0.0;
  for (int j = 0; j < 2 * r; ++j) {
    const double v = (j < r) ? g0(i, j) : g1(i, j - r);
    if (std::abs(v) > best) {
      best = std::abs(v);
      lead = v;
    }
  }
  if (lead < 0.0) {
    g0.row(i) = -g0.row(i);
    g1.row(i) = -g1.row(i);
  }
}

}  // namespace

std::pair<Mat, Mat> symmetric_completion(const Mat& h0, const Mat& h1, const Mat& g0_hat,
                                         const Mat& g1_hat, const SymmetrySignature& t) {
  const int r = static_cast<int>(h0.rows());
  const SymmetrySignature sig_s = detect_symmetry(h0, h1);
  if (t != sig_s && t != negated(sig_s))
    throw std::invalid_argument("symmetric_completion: T must equal S or -S");

  const Mat s = sig_s.as_matrix();
  const Mat tm = t.as_matrix();

  // The mirror map A_k -> T A_{1-k} S is an involution preserving the
  // complement; Sigma is its matrix in the complement basis times T. It is
  // symmetric orthogonal, and U must rotate its eigenbasis onto T's.
  const Mat sigma = g0_hat * s * g1_hat.transpose() + g1_hat * s * g0_hat.transpose();

  Eigen::SelfAdjointEigenSolver<Mat> es(sigma);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("symmetric_completion: eigen decomposition failed");
  for (int i = 0; i < r; ++i)
    if (std::abs(std::abs(es.eigenvalues()(i)) - 1.0) > 1e-8)
      throw std::runtime_error("symmetric_completion: complement is not mirror-invariant");

  std::vector<int> plus, minus;
  for (int i = 0; i < r; ++i) (es.eigenvalues()(i) > 0 ? plus : minus).push_back(i);
  std::vector<int> tplus, tminus;
  for (int i = 0; i < r; ++i)
    (t.signs[static_cast<std::size_t>(i)] > 0 ? tplus : tminus).push_back(i);
  if (plus.size() != tplus.size())
    throw std::runtime_error("symmetric_completion: no orthogonal U solves the symmetry constraint");

  Mat q_sigma(r, r), q_t(r, r);
  int col = 0;
  for (std::size_t i = 0; i < plus.size(); ++i, ++col) {
    q_sigma.col(col) = es.eigenvectors().col(plus[i]);
    q_t.col(col) = Mat::Identity(r, r).col(tplus[i]);
  }
  for (std::size_t i = 0; i < minus.size(); ++i, ++col) {
    q_sigma.col(col) = es.eigenvectors().col(minus[i]);
    q_t.col(col) = Mat::Identity(r, r).col(tminus[i]);
  }
  const Mat u = q_t * q_sigma.transpose();

  Mat g0 = u * g0_hat;
  Mat g1 = u * g1_hat;
  for (int i = 0; i < r; ++i) normalize_row_sign(g0, g1, i);

  if (inf_norm(g0 - tm * g1 * s) > 1e-9 || inf_norm(g1 - tm * g0 * s) > 1e-9)
    throw std::runtime_error("symmetric_completion: symmetry constraint not satisfied");
  return {g0, g1};
}

}  // namespace mw
