#pragma once

#include <utility>
#include <vector>

#include "mw/laurent.hpp"

namespace mw {

/// Per-channel symmetry signs: +1 symmetric, -1 antisymmetric about the
/// support midpoint.
struct SymmetrySignature {
  std::vector<int> signs;

  Mat as_matrix() const;
  bool operator==(const SymmetrySignature&) const = default;
};

SymmetrySignature negated(const SymmetrySignature& s);

/// Finds S = diag(+-1) with H1 = S H0 S (normalized so the first sign is +1,
/// since S and -S act identically). Throws when no signature fits.
SymmetrySignature detect_symmetry(const Mat& h0, const Mat& h1, double tol = 1e-10);

/// Orthonormal basis of the orthogonal complement of the rows of [H0, H1],
/// computed from a full QR decomposition of the transposed stack. The rows of
/// [H0, H1] must themselves be orthonormal.
std::pair<Mat, Mat> orthogonal_complement(const Mat& h0, const Mat& h1, double tol = 1e-10);

/// Rotates the raw complement into the completion with prescribed symmetry:
/// G_k = U Ghat_k with U orthogonal chosen so G0 = T G1 S (and hence the
/// mirrored relation). T must equal S or -S. Each output row is
/// sign-normalized so its largest-magnitude entry (earliest position on
/// ties, G0 scanned before G1) is positive.
std::pair<Mat, Mat> symmetric_completion(const Mat& h0, const Mat& h1, const Mat& g0_hat,
                                         const Mat& g1_hat, const SymmetrySignature& t);

}  // namespace mw
