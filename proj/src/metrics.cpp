#include "mw/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mw {

double coding_gain(const MultiwaveletSystem& sys, const CGModel& model) {
  if (sys.r != 2 || sys.m != 1)
    throw std::invalid_argument("coding_gain: only r = 2, m = 1 banks supported");
  if (model.block != 4)
    throw std::invalid_argument("coding_gain: only the 4x4 one-level block is supported");
  if (!(std::abs(model.rho) < 1.0))
    throw std::invalid_argument("coding_gain: |rho| must be < 1");

  Mat w(4, 4);
  w.block(0, 0, 2, 2) = sys.H[0];
  w.block(0, 2, 2, 2) = sys.H[1];
  w.block(2, 0, 2, 2) = sys.G[0];
  w.block(2, 2, 2, 2) = sys.G[1];

  Mat r(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = std::pow(model.rho, std::abs(i - j));

  const Mat cov = w * r * w.transpose();
  double am = 0.0, log_gm = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double v = cov(i, i);
    if (!(v > 0.0)) throw std::invalid_argument("coding_gain: degenerate channel variance");
    am += v / 4.0;
    log_gm += std::log(v) / 4.0;
  }
  return 10.0 * std::log10(am / std::exp(log_gm));
}

PsnrResult psnr(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("psnr: image dimensions differ");
  if (a.size() == 0) throw std::invalid_argument("psnr: empty images");
  PsnrResult res;
  res.mse = (a - b).squaredNorm() / static_cast<double>(a.size());
  res.psnr = res.mse == 0.0 ? std::numeric_limits<double>::infinity()
                            : 10.0 * std::log10(255.0 * 255.0 / res.mse);
  return res;
}

double sup_error(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_error: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace mw
