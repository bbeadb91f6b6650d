#pragma once

#include <array>
#include <vector>

#include "mw/par.hpp"
#include "mw/system.hpp"

namespace mw {

enum class TransformMode { kBalanced, kNonBalanced };

/// Pre/postfilter pair with N(z) M(z) = z^c I for some integer delay c.
struct PrePostPair {
  LaurentMatrix M;
  LaurentMatrix N;
};

/// M = N = (1/sqrt2)[[1,1],[1,-1]]; involutory, so N M = I with delay 0.
PrePostPair haar_prepost();

/// The delay c with N(z)M(z) = z^c I; throws when the pair does not invert.
int prepost_delay(const PrePostPair& pp, double tol = 1e-12);

/// Coefficient sequences are r x n matrices, one r-vector per column.
/// vectorize packs consecutive scalar samples into columns; length must be
/// divisible by r.
Mat vectorize(const std::vector<double>& signal, int r = 2);
std::vector<double> devectorize(const Mat& v);

/// Cyclic filtering y_n = sum_p F_p x_{(n-p) mod N} for F(z) = sum_p F_p z^-p.
Mat apply_filter_periodic(const LaurentMatrix& f, const Mat& x);

/// One periodic analysis level: s_l = sum_k H_k x_{2l+k}, d_l likewise with G.
std::pair<Mat, Mat> analysis_step(const Mat& x, const MultiwaveletSystem& sys);
/// Periodic synthesis: x_{2l+k} += H_k^T s_l + G_k^T d_l.
Mat synthesis_step(const Mat& s, const Mat& d, const MultiwaveletSystem& sys);

struct WaveletPyramid {
  int J = 0;
  TransformMode mode = TransformMode::kNonBalanced;
  long length0 = 0;    ///< original scalar length
  Mat s;               ///< coarsest approximation, r x (length0 / (r 2^J))
  std::vector<Mat> d;  ///< d[j-1] = level-j details, r x (length0 / (r 2^j))
};

/// Scalar length must be divisible by r * 2^J; balanced mode needs prepost.
WaveletPyramid dmwt_forward_1d(const std::vector<double>& signal, const MultiwaveletSystem& sys,
                               int j_levels, TransformMode mode,
                               const PrePostPair* prepost = nullptr);
std::vector<double> dmwt_inverse_1d(const WaveletPyramid& pyr, const MultiwaveletSystem& sys,
                                    const PrePostPair* prepost = nullptr);

/// 2D coefficients live in one buffer with the classic quadrant layout:
/// at each level the current block splits into approximation (top left,
/// recursed into) and three detail quadrants. Inside detail quadrants the
/// r channel samples of one coefficient vector sit in consecutive rows
/// (2a, 2a+1 for r = 2).
struct Pyramid2D {
  int J = 0;
  int r = 2;  ///< channel count of the producing system
  TransformMode mode = TransformMode::kNonBalanced;
  Mat data;
};

struct Rect {
  int row0 = 0, col0 = 0, rows = 0, cols = 0;
};

/// Quadrant extents at `level` in 1..J: 0 = top right, 1 = bottom left,
/// 2 = bottom right.
std::array<Rect, 3> detail_rects(const Pyramid2D& p, int level);
Rect approx_rect(const Pyramid2D& p);

/// Separable transform: per level every row of the current block, then every
/// column. Both image dimensions must be divisible by r * 2^J. Balanced mode
/// prefilters all rows then all columns once, before level 1.
Pyramid2D dmwt_forward_2d(const Mat& image, const MultiwaveletSystem& sys, int j_levels,
                          TransformMode mode, const PrePostPair* prepost = nullptr,
                          const RunOptions& opts = {});
Mat dmwt_inverse_2d(const Pyramid2D& pyr, const MultiwaveletSystem& sys,
                    const PrePostPair* prepost = nullptr, const RunOptions& opts = {});

namespace ref {

/// Serial drivers looping over the same per-line kernels as the parallel
/// versions above; outputs are bitwise identical.
Pyramid2D dmwt_forward_2d(const Mat& image, const MultiwaveletSystem& sys, int j_levels,
                          TransformMode mode, const PrePostPair* prepost = nullptr);
Mat dmwt_inverse_2d(const Pyramid2D& pyr, const MultiwaveletSystem& sys,
                    const PrePostPair* prepost = nullptr);

}  // namespace ref

}  // namespace mw
