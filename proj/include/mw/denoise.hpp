#pragma once

#include <cstdint>
#include <vector>

#include "mw/par.hpp"
#include "mw/transform.hpp"

namespace mw {

/// Additive white Gaussian noise description. Yj holds per-level detail
/// covariance blocks (Yj[j-1] for level j); when empty, sigma^2 I is used,
/// which is exact for balanced orthonormal transforms.
struct NoiseModel {
  double sigma = 1.0;
  bool known = true;  ///< when false, sigma is estimated from the data
  std::vector<Mat> Yj;
  std::uint64_t seed = 1;  ///< seed for Monte Carlo covariance estimation
};

enum class ShrinkRule { kHard, kSoft };

/// lambda = sigma * sqrt(2 ln N).
double universal_threshold(double sigma, long long n);

/// w = sqrt(d^T Y^-1 d); Y must be symmetric positive definite.
double whiten_stat(const Eigen::VectorXd& d, const Mat& y);

/// Thresholds every detail vector by its whitened magnitude w: vectors with
/// w < lambda are zeroed; survivors are kept (hard) or scaled by
/// (w - lambda)/w (soft). The approximation band is untouched.
WaveletPyramid vector_shrink(const WaveletPyramid& pyr, const NoiseModel& model, double lambda,
                             ShrinkRule rule);

/// 2D version: inside every detail quadrant the channel samples of one
/// coefficient vector sit in consecutive rows (2a, 2a+1), which is the
/// grouping thresholded here.
Pyramid2D vector_shrink_2d(const Pyramid2D& pyr, const NoiseModel& model, double lambda,
                           ShrinkRule rule, const RunOptions& opts = {});

/// Full pipeline: (pre)filter, forward 2D transform to level j_levels,
/// universal-threshold shrinkage, inverse transform, (post)filter. The
/// returned intensities are not clamped; clamping happens at image write.
Mat denoise_image(const Mat& img, const MultiwaveletSystem& sys, int j_levels, ShrinkRule rule,
                  const NoiseModel& model, TransformMode mode,
                  const PrePostPair* prepost = nullptr, const RunOptions& opts = {});

/// Robust sigma estimate: median(|level-1 detail components|) / 0.6745.
double estimate_sigma_mad(const WaveletPyramid& pyr);
double estimate_sigma_mad_2d(const Pyramid2D& pyr);

/// Per-level detail covariance of unit-variance AWGN pushed through the 1D
/// transform, estimated over `samples` independent signals. Deterministic
/// given the seed for every thread count (per-sample streams, fixed-order
/// reduction). Scale by sigma^2 for noise of standard deviation sigma.
std::vector<Mat> estimate_noise_covariance(const MultiwaveletSystem& sys, int j_levels,
                                           TransformMode mode,
                                           const PrePostPair* prepost = nullptr,
                                           int samples = 10000, std::uint64_t seed = 1,
                                           const RunOptions& opts = {});

}  // namespace mw
