#pragma once

#include <vector>

#include "mw/system.hpp"

namespace mw {

/// AR(1) signal model for transform evaluation: R_ij = rho^|i-j| on one
/// transform block.
struct CGModel {
  double rho = 0.95;
  int block = 4;  ///< 2r(m+1); only the 4x4 one-level r=2 block is supported
};

/// 10*log10(AM/GM) of the channel variances (W R W^T)_ii of the stacked
/// one-level analysis block W = [[H0,H1],[G0,G1]].
double coding_gain(const MultiwaveletSystem& sys, const CGModel& model = {});

/// PSNR in dB against peak 255, with the underlying MSE. Identical inputs
/// give mse = 0 and psnr = +infinity.
struct PsnrResult {
  double mse = 0.0;
  double psnr = 0.0;
};
PsnrResult psnr(const Mat& a, const Mat& b);

/// Max absolute componentwise difference.
double sup_error(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace mw
