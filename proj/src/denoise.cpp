#include "mw/denoise.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mw/rng.hpp"

namespace mw {

double universal_threshold(double sigma, long long n) {
  if (!(sigma > 0.0)) throw std::invalid_argument("universal_threshold: sigma must be > 0");
  if (n < 2) throw std::invalid_argument("universal_threshold: N must be >= 2");
  return sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

double whiten_stat(const Eigen::VectorXd& d, const Mat& y) {
  Eigen::LLT<Mat> llt(y);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("whiten_stat: covariance is not positive definite");
  return llt.matrixL().solve(d).norm();
}

namespace {

// Multiplier applied to a detail vector with whitened magnitude w.
double shrink_factor(double w, double lambda, ShrinkRule rule) {
  if (w < lambda) return 0.0;
  if (rule == ShrinkRule::kSoft && w > 0.0) return (w - lambda) / w;
  return 1.0;
}

// Per-level whitening factors; Yj[j-1] when provided, else sigma^2 I.
std::vector<Eigen::LLT<Mat>> level_whiteners(const NoiseModel& model, int r, int j_levels) {
  if (!model.Yj.empty() && model.Yj.size() != static_cast<std::size_t>(j_levels))
    throw std::invalid_argument("shrink: need one covariance block per level");
  std::vector<Eigen::LLT<Mat>> out;
  for (int j = 0; j < j_levels; ++j) {
    const Mat y = model.Yj.empty() ? Mat(model.sigma * model.sigma * Mat::Identity(r, r))
                                   : model.Yj[static_cast<std::size_t>(j)];
    out.emplace_back(y);
    if (out.back().info() != Eigen::Success)
      throw std::invalid_argument("shrink: covariance is not positive definite");
  }
  return out;
}

}  // namespace

WaveletPyramid vector_shrink(const WaveletPyramid& pyr, const NoiseModel& model, double lambda,
                             ShrinkRule rule) {
  WaveletPyramid out = pyr;
  const int r = static_cast<int>(pyr.s.rows());
  const auto whiteners = level_whiteners(model, r, pyr.J);
  for (int j = 1; j <= pyr.J; ++j) {
    Mat& d = out.d[static_cast<std::size_t>(j - 1)];
    const auto& llt = whiteners[static_cast<std::size_t>(j - 1)];
    for (long l = 0; l < d.cols(); ++l) {
      const double w = llt.matrixL().solve(d.col(l)).norm();
      d.col(l) *= shrink_factor(w, lambda, rule);
    }
  }
  return out;
}

Pyramid2D vector_shrink_2d(const Pyramid2D& pyr, const NoiseModel& model, double lambda,
                           ShrinkRule rule, const RunOptions& opts) {
  Pyramid2D out = pyr;
  const int r = pyr.r;
  const auto whiteners = level_whiteners(model, r, pyr.J);
  const int nt = resolve_threads(opts);
  for (int level = 1; level <= pyr.J; ++level) {
    const auto& llt = whiteners[static_cast<std::size_t>(level - 1)];
    for (const Rect& rect : detail_rects(out, level)) {
      Mat& a = out.data;
#ifdef _OPENMP
#pragma omp parallel for num_threads(nt) schedule(static) if (nt > 1)
#endif
      for (int c = 0; c < rect.cols; ++c) {
        for (int b = 0; b < rect.rows / r; ++b) {
          const Eigen::VectorXd d = a.block(rect.row0 + b * r, rect.col0 + c, r, 1);
          const double w = llt.matrixL().solve(d).norm();
          a.block(rect.row0 + b * r, rect.col0 + c, r, 1) *= shrink_factor(w, lambda, rule);
        }
      }
    }
  }
  return out;
}

Mat denoise_image(const Mat& img, const MultiwaveletSystem& sys, int j_levels, ShrinkRule rule,
                  const NoiseModel& model, TransformMode mode, const PrePostPair* prepost,
                  const RunOptions& opts) {
  const Pyramid2D pyr = dmwt_forward_2d(img, sys, j_levels, mode, prepost, opts);

  NoiseModel m = model;
  if (!m.known) m.sigma = estimate_sigma_mad_2d(pyr);
  if (m.Yj.empty() && mode == TransformMode::kNonBalanced) {
    m.Yj = estimate_noise_covariance(sys, j_levels, mode, prepost, 10000, m.seed, opts);
    for (Mat& y : m.Yj) y *= m.sigma * m.sigma;
  }
  const double lambda = universal_threshold(m.sigma, static_cast<long long>(img.size()));
  const Pyramid2D shrunk = vector_shrink_2d(pyr, m, lambda, rule, opts);
  return dmwt_inverse_2d(shrunk, sys, prepost, opts);
}

namespace {

double median_inplace(std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("median of empty detail band");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  double hi = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + static_cast<long>(mid) - 1,
                     v.begin() + static_cast<long>(mid));
    return 0.5 * (v[mid - 1] + hi);
  }
  return hi;
}

constexpr double kMadToSigma = 0.6745;

}  // namespace

double estimate_sigma_mad(const WaveletPyramid& pyr) {
  if (pyr.d.empty()) throw std::invalid_argument("estimate_sigma_mad: pyramid has no details");
  const Mat& d = pyr.d[0];
  std::vector<double> mags(static_cast<std::size_t>(d.size()));
  for (long i = 0; i < d.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(d(i));
  return median_inplace(mags) / kMadToSigma;
}

double estimate_sigma_mad_2d(const Pyramid2D& pyr) {
  std::vector<double> mags;
  for (const Rect& rect : detail_rects(pyr, 1)) {
    for (int c = 0; c < rect.cols; ++c)
      for (int i = 0; i < rect.rows; ++i)
        mags.push_back(std::abs(pyr.data(rect.row0 + i, rect.col0 + c)));
  }
  return median_inplace(mags) / kMadToSigma;
}

std::vector<Mat> estimate_noise_covariance(const MultiwaveletSystem& sys, int j_levels,
                                           TransformMode mode, const PrePostPair* prepost,
                                           int samples, std::uint64_t seed,
                                           const RunOptions& opts) {
  if (samples < 1) throw std::invalid_argument("estimate_noise_covariance: need samples >= 1");
  const long len = static_cast<long>(sys.r) << (j_levels + 4);  // 16 vectors at level J
  const int r = sys.r;
  const int nt = resolve_threads(opts);

  // One accumulator slot per (sample, level): deterministic for any thread
  // count because sample i always uses stream i and the reduction below is
  // serial in sample order.
  std::vector<Mat> partial(static_cast<std::size_t>(samples) * static_cast<std::size_t>(j_levels));
  std::vector<long> counts(static_cast<std::size_t>(j_levels), 0);

#ifdef _OPENMP
#pragma omp parallel for num_threads(nt) schedule(static) if (nt > 1)
#endif
  for (int i = 0; i < samples; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    std::vector<double> noise(static_cast<std::size_t>(len));
    for (double& x : noise) x = rng.gaussian();
    const WaveletPyramid pyr = dmwt_forward_1d(noise, sys, j_levels, mode, prepost);
    for (int j = 0; j < j_levels; ++j) {
      const Mat& d = pyr.d[static_cast<std::size_t>(j)];
      partial[static_cast<std::size_t>(i) * static_cast<std::size_t>(j_levels) +
              static_cast<std::size_t>(j)] = d * d.transpose();
    }
  }

  std::vector<Mat> out(static_cast<std::size_t>(j_levels), Mat::Zero(r, r));
  for (int j = 0; j < j_levels; ++j)
    counts[static_cast<std::size_t>(j)] = (len / r) >> (j + 1);
  for (int i = 0; i < samples; ++i)
    for (int j = 0; j < j_levels; ++j)
      out[static_cast<std::size_t>(j)] +=
          partial[static_cast<std::size_t>(i) * static_cast<std::size_t>(j_levels) +
                  static_cast<std::size_t>(j)];
  for (int j = 0; j < j_levels; ++j)
    out[static_cast<std::size_t>(j)] /=
        static_cast<double>(counts[static_cast<std::size_t>(j)]) * samples;
  return out;
}

}  // namespace mw
