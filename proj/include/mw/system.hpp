#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mw/completion.hpp"
#include "mw/laurent.hpp"

namespace mw {

/// A two-filter multiwavelet bank with r channels and taps H_0..H_m,
/// G_0..G_m. Non-orthogonal banks (e.g. dyadic-quantized ones) are
/// representable; `orthogonal` records whether the orthonormality
/// conditions hold at 1e-10.
struct MultiwaveletSystem {
  std::string name;
  int r = 0;
  int m = 0;
  std::vector<Mat> H;
  std::vector<Mat> G;
  std::optional<SymmetrySignature> S;  ///< H_k = S H_{m-k} S
  std::optional<SymmetrySignature> T;  ///< G_k = T G_{m-k} S
  bool orthogonal = false;

  /// Filter symbols sum_k C_k z^{-k}.
  LaurentMatrix h_symbol() const;
  LaurentMatrix g_symbol() const;
};

/// Validates shapes, then detects the orthogonality flag and the diagonal
/// +-1 symmetry signatures. Only shape mismatches are errors.
MultiwaveletSystem build_system(std::vector<Mat> h, std::vector<Mat> g, std::string name);

/// The exact symmetric/antisymmetric piecewise-linear system:
///   H_0 = (sqrt2/4)[[2,0],[sqrt3,1]],  G_0 = (sqrt2/4)[[0,2],[-1,sqrt3]], ...
MultiwaveletSystem sa1();

/// Scalar Haar bank embedded at r = 1.
MultiwaveletSystem haar1();

/// SA1 with sqrt3 replaced by round(sqrt3 * 2^b0) * 2^-b0 everywhere it
/// appears in the coefficients. b0 = 1 gives the 2-bit bank with 3/2.
MultiwaveletSystem quantized_sa1(int b0);

/// phi and psi sampled on the closed dyadic grid t_i = i * 2^-L, i = 0..m*2^L.
struct SampledFunctions {
  int level = 0;
  std::vector<double> grid;
  Mat phi;  ///< r x (m*2^L + 1)
  Mat psi;
};

/// Iterates phi^{n+1}(t) = sqrt2 sum_k H_k phi^n(2t - k) from the box seed
/// down to the rounding floor (successive differences plateau), then
/// evaluates psi = sqrt2 sum_k G_k phi(2t - k). Values at interior jumps are
/// right limits; the t = m endpoint is filled by linear extrapolation (exact
/// for piecewise-linear limits). Throws on divergence (sup norm beyond 1e6).
SampledFunctions cascade_eval(const MultiwaveletSystem& sys, int level);

/// Text persistence, 17 significant digits (lossless for doubles).
void save_system(const MultiwaveletSystem& sys, const std::string& path);

/// Parse errors carry "path:line:" prefixes and the section being read.
/// Declared S/T lines that contradict the coefficients are dropped in
/// favor of detection; the orthogonality flag is always recomputed.
MultiwaveletSystem load_system(const std::string& path);

}  // namespace mw
