#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mw/denoise.hpp"
#include "mw/io.hpp"
#include "mw/metrics.hpp"
#include "oracles.hpp"

using mw::Mat;
using mw::NoiseModel;
using mw::ShrinkRule;
using mw::TransformMode;
using mw::WaveletPyramid;

namespace {

WaveletPyramid sample_pyramid() {
  WaveletPyramid p;
  p.J = 2;
  p.mode = TransformMode::kNonBalanced;
  p.length0 = 32;
  oracle::TestRand rnd(61);
  p.s = rnd.mat(2, 4, -5.0, 5.0);
  p.d = {rnd.mat(2, 8, -0.5, 0.5), rnd.mat(2, 4, -0.5, 0.5)};
  p.d[0].col(0) << 3.0, 4.0;  // w = 5 under unit covariance
  p.d[0].col(1) << 1.0, 1.0;  // w = sqrt2
  p.d[0].col(2) << 0.0, 4.0;  // w = 4, exactly at the threshold below
  p.d[1].col(0) << 3.0, 4.0;
  return p;
}

}  // namespace

TEST_CASE("universal threshold") {
  CHECK(std::abs(mw::universal_threshold(10.0, 65536) - 47.09640090061899) <= 1e-10);
  CHECK(mw::universal_threshold(1.0, 65536) == doctest::Approx(std::sqrt(2.0 * std::log(65536.0))).epsilon(1e-14));
  CHECK_THROWS_AS(mw::universal_threshold(0.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(mw::universal_threshold(-1.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(mw::universal_threshold(1.0, 1), std::invalid_argument);
}

TEST_CASE("whitened magnitude") {
  Eigen::VectorXd d(2);
  d << 3.0, 4.0;
  CHECK(mw::whiten_stat(d, Mat::Identity(2, 2)) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(mw::whiten_stat(d, Mat(4.0 * Mat::Identity(2, 2))) == doctest::Approx(2.5).epsilon(1e-14));

  Eigen::VectorXd ones(2);
  ones << 1.0, 1.0;
  Mat y(2, 2);
  y << 2.0, 1.0, 1.0, 2.0;
  CHECK(mw::whiten_stat(ones, y) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));

  Mat indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(mw::whiten_stat(d, indefinite), std::invalid_argument);
}

TEST_CASE("vector shrinkage keeps, kills and scales per whitened magnitude") {
  const WaveletPyramid p = sample_pyramid();
  NoiseModel model;
  model.sigma = 1.0;
  const double lambda = 4.0;

  const WaveletPyramid hard = mw::vector_shrink(p, model, lambda, ShrinkRule::kHard);
  const WaveletPyramid soft = mw::vector_shrink(p, model, lambda, ShrinkRule::kSoft);

  // Approximation band untouched, bitwise.
  CHECK((hard.s.array() == p.s.array()).all());
  CHECK((soft.s.array() == p.s.array()).all());

  // w = 5 >= 4: hard keeps exactly, soft scales by 1/5.
  CHECK((hard.d[0].col(0) - p.d[0].col(0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((soft.d[0].col(0) - 0.2 * p.d[0].col(0)).cwiseAbs().maxCoeff() <= 1e-15);
  // w = sqrt2 < 4: both rules zero.
  CHECK(hard.d[0].col(1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(soft.d[0].col(1).cwiseAbs().maxCoeff() == 0.0);
  // w = lambda exactly: hard keeps, soft maps to zero.
  CHECK((hard.d[0].col(2) - p.d[0].col(2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(soft.d[0].col(2).cwiseAbs().maxCoeff() == 0.0);
  // Small fill vectors die under both rules.
  for (long l = 3; l < p.d[0].cols(); ++l) CHECK(hard.d[0].col(l).cwiseAbs().maxCoeff() == 0.0);

  // Hard shrinkage is idempotent.
  const WaveletPyramid twice = mw::vector_shrink(hard, model, lambda, ShrinkRule::kHard);
  for (int j = 0; j < 2; ++j)
    CHECK((twice.d[static_cast<std::size_t>(j)].array() ==
           hard.d[static_cast<std::size_t>(j)].array()).all());
  // Soft shrinkage never grows a vector.
  for (int j = 0; j < 2; ++j)
    for (long l = 0; l < p.d[static_cast<std::size_t>(j)].cols(); ++l)
      CHECK(soft.d[static_cast<std::size_t>(j)].col(l).norm() <=
            p.d[static_cast<std::size_t>(j)].col(l).norm() + 1e-15);
}

TEST_CASE("shrinkage edge thresholds") {
  const WaveletPyramid p = sample_pyramid();
  NoiseModel model;
  model.sigma = 1.0;

  for (ShrinkRule rule : {ShrinkRule::kHard, ShrinkRule::kSoft}) {
    const WaveletPyramid same = mw::vector_shrink(p, model, 0.0, rule);
    CHECK((same.s.array() == p.s.array()).all());
    for (int j = 0; j < 2; ++j)
      CHECK((same.d[static_cast<std::size_t>(j)].array() ==
             p.d[static_cast<std::size_t>(j)].array()).all());

    const WaveletPyramid dead = mw::vector_shrink(p, model, 1e300, rule);
    CHECK((dead.s.array() == p.s.array()).all());
    for (int j = 0; j < 2; ++j)
      CHECK(dead.d[static_cast<std::size_t>(j)].cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("per-level covariance blocks change which vectors survive") {
  const WaveletPyramid p = sample_pyramid();
  NoiseModel model;
  model.Yj = {Mat(4.0 * Mat::Identity(2, 2)), Mat(Mat::Identity(2, 2))};
  // The same (3,4) vector whitens to 2.5 at level 1 and 5 at level 2.
  const WaveletPyramid out = mw::vector_shrink(p, model, 4.0, ShrinkRule::kHard);
  CHECK(out.d[0].col(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((out.d[1].col(0) - p.d[1].col(0)).cwiseAbs().maxCoeff() == 0.0);

  NoiseModel wrong;
  wrong.Yj = {Mat(Mat::Identity(2, 2))};  // J = 2 needs two blocks
  CHECK_THROWS_AS(mw::vector_shrink(p, wrong, 4.0, ShrinkRule::kHard), std::invalid_argument);

  // An explicit sigma^2 I block list reproduces the default path bitwise.
  NoiseModel scaled;
  scaled.sigma = 2.0;
  NoiseModel blocks;
  blocks.Yj = {Mat(4.0 * Mat::Identity(2, 2)), Mat(4.0 * Mat::Identity(2, 2))};
  const WaveletPyramid a = mw::vector_shrink(p, scaled, 3.0, ShrinkRule::kSoft);
  const WaveletPyramid b = mw::vector_shrink(p, blocks, 3.0, ShrinkRule::kSoft);
  for (int j = 0; j < 2; ++j)
    CHECK((a.d[static_cast<std::size_t>(j)].array() ==
           b.d[static_cast<std::size_t>(j)].array()).all());
}

TEST_CASE("2D shrinkage acts on channel pairs inside detail quadrants") {
  const mw::MultiwaveletSystem sys = mw::sa1();
  const mw::PrePostPair pp = mw::haar_prepost();
  oracle::TestRand rnd(62);
  const Mat img = rnd.mat(16, 16, 0.0, 255.0);
  const mw::Pyramid2D pyr = mw::dmwt_forward_2d(img, sys, 2, TransformMode::kBalanced, &pp);

  NoiseModel model;
  model.sigma = 1.0;

  const mw::Pyramid2D dead = mw::vector_shrink_2d(pyr, model, 1e300, ShrinkRule::kHard);
  for (int level = 1; level <= 2; ++level)
    for (const mw::Rect& rect : mw::detail_rects(dead, level))
      CHECK(dead.data.block(rect.row0, rect.col0, rect.rows, rect.cols).cwiseAbs().maxCoeff() == 0.0);
  const mw::Rect ar = mw::approx_rect(dead);
  CHECK((dead.data.block(ar.row0, ar.col0, ar.rows, ar.cols).array() ==
         pyr.data.block(ar.row0, ar.col0, ar.rows, ar.cols).array()).all());

  const mw::Pyramid2D same = mw::vector_shrink_2d(pyr, model, 0.0, ShrinkRule::kSoft);
  CHECK((same.data.array() == pyr.data.array()).all());

  // Parallel and forced-serial agree bitwise.
  const mw::Pyramid2D par = mw::vector_shrink_2d(pyr, model, 2.5, ShrinkRule::kSoft);
  const mw::Pyramid2D ser = mw::vector_shrink_2d(pyr, model, 2.5, ShrinkRule::kSoft,
                                                 mw::RunOptions{false, 0});
  CHECK((par.data.array() == ser.data.array()).all());
}

TEST_CASE("denoising with negligible noise returns the image") {
  const mw::MultiwaveletSystem sys = mw::sa1();
  const mw::PrePostPair pp = mw::haar_prepost();
  Mat img(64, 64);
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j)
      img(i, j) = 128.0 + 100.0 * std::sin(2.0 * M_PI * i / 64.0) * std::cos(2.0 * M_PI * j / 64.0);

  NoiseModel model;
  model.sigma = 1e-9;
  for (ShrinkRule rule : {ShrinkRule::kHard, ShrinkRule::kSoft}) {
    const Mat out = mw::denoise_image(img, sys, 2, rule, model, TransformMode::kBalanced, &pp);
    CHECK((out - img).cwiseAbs().maxCoeff() <= 1e-6);
    // The non-balanced path estimates per-level covariance blocks first.
    const Mat out2 = mw::denoise_image(img, sys, 2, rule, model, TransformMode::kNonBalanced);
    CHECK((out2 - img).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("denoising a noisy smooth image raises its fidelity under both rules") {
  const mw::MultiwaveletSystem sys = mw::sa1();
  const mw::PrePostPair pp = mw::haar_prepost();
  Mat clean(64, 64);
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      const double u = (i - 31.5) / 16.0, v = (j - 31.5) / 16.0;
      clean(i, j) = 120.0 + 80.0 * std::exp(-0.5 * (u * u + v * v));
    }

  const std::vector<double> noise = mw::gen_awgn(64 * 64, 10.0, 7);
  Mat noisy = clean;
  for (int j = 0; j < 64; ++j)
    for (int i = 0; i < 64; ++i) noisy(i, j) += noise[static_cast<std::size_t>(64 * j + i)];

  const double base = mw::psnr(noisy, clean).psnr;
  NoiseModel model;
  model.sigma = 10.0;

  for (ShrinkRule rule : {ShrinkRule::kHard, ShrinkRule::kSoft}) {
    const Mat out = mw::denoise_image(noisy, sys, 2, rule, model, TransformMode::kBalanced, &pp);
    CHECK(mw::psnr(out, clean).psnr > base + 0.5);
  }
}

TEST_CASE("MAD estimate on crafted pyramids") {
  WaveletPyramid p;
  p.J = 1;
  p.length0 = 20;
  p.s = Mat::Zero(2, 5);
  p.d = {Mat::Constant(2, 5, 0.6745)};
  CHECK(mw::estimate_sigma_mad(p) == doctest::Approx(1.0).epsilon(1e-12));

  p.d[0].setZero();
  CHECK(mw::estimate_sigma_mad(p) == 0.0);

  // A couple of wild outliers cannot move the median.
  p.d[0] = Mat::Constant(2, 5, 0.6745);
  p.d[0](0, 0) = 1e6;
  p.d[0](1, 4) = -1e6;
  CHECK(mw::estimate_sigma_mad(p) == doctest::Approx(1.0).epsilon(1e-12));

  WaveletPyramid empty;
  CHECK_THROWS_AS(mw::estimate_sigma_mad(empty), std::invalid_argument);
}

TEST_CASE("MAD estimate recovers the noise level of pure noise") {
  const mw::MultiwaveletSystem sys = mw::sa1();
  const mw::PrePostPair pp = mw::haar_prepost();
  const std::vector<double> noise = mw::gen_awgn(1 << 16, 10.0, 11);
  const WaveletPyramid pyr = mw::dmwt_forward_1d(noise, sys, 1, TransformMode::kBalanced, &pp);
  const double sigma = mw::estimate_sigma_mad(pyr);
  CHECK(sigma > 9.8);
  CHECK(sigma < 10.2);

  const std::vector<double> flat = mw::gen_awgn(128 * 128, 10.0, 12);
  const Mat img = Eigen::Map<const Mat>(flat.data(), 128, 128);
  const mw::Pyramid2D p2 = mw::dmwt_forward_2d(img, sys, 1, TransformMode::kBalanced, &pp);
  const double sigma2 = mw::estimate_sigma_mad_2d(p2);
  CHECK(sigma2 > 9.5);
  CHECK(sigma2 < 10.5);
}

TEST_CASE("sigma estimation feeds the full pipeline when marked unknown") {
  const mw::MultiwaveletSystem sys = mw::sa1();
  const mw::PrePostPair pp = mw::haar_prepost();
  const std::vector<double> flat = mw::gen_awgn(64 * 64, 10.0, 13);
  Mat noisy = Mat::Constant(64, 64, 128.0);
  for (int j = 0; j < 64; ++j)
    for (int i = 0; i < 64; ++i) noisy(i, j) += flat[static_cast<std::size_t>(64 * j + i)];

  NoiseModel model;
  model.known = false;
  const Mat out = mw::denoise_image(noisy, sys, 2, ShrinkRule::kHard, model,
                                    TransformMode::kBalanced, &pp);
  // A constant image plus noise should come back almost constant; what
  // survives is the approximation-band share of the noise.
  const double err = (out - Mat::Constant(64, 64, 128.0)).cwiseAbs().maxCoeff();
  CHECK(err < 15.0);
  CHECK(mw::psnr(out, Mat::Constant(64, 64, 128.0)).psnr >
        mw::psnr(noisy, Mat::Constant(64, 64, 128.0)).psnr + 3.0);
}

TEST_CASE("transformed white noise has identity covariance in both modes") {
  const mw::MultiwaveletSystem sys = mw::sa1();
  const mw::PrePostPair pp = mw::haar_prepost();

  for (TransformMode mode : {TransformMode::kBalanced, TransformMode::kNonBalanced}) {
    const mw::PrePostPair* pf = mode == TransformMode::kBalanced ? &pp : nullptr;
    const auto yj = mw::estimate_noise_covariance(sys, 2, mode, pf, 3000, 21);
    REQUIRE(yj.size() == 2);
    for (const Mat& y : yj) {
      CHECK(oracle::max_abs(y - Mat::Identity(2, 2)) <= 0.05);
      CHECK(std::abs(y(0, 1) - y(1, 0)) <= 1e-12);  // symmetric by construction
    }
  }
}

TEST_CASE("covariance estimation is deterministic and thread-invariant") {
  const mw::MultiwaveletSystem sys = mw::sa1();
  const auto a = mw::estimate_noise_covariance(sys, 2, TransformMode::kNonBalanced, nullptr, 500, 5);
  const auto b = mw::estimate_noise_covariance(sys, 2, TransformMode::kNonBalanced, nullptr, 500, 5);
  const auto c = mw::estimate_noise_covariance(sys, 2, TransformMode::kNonBalanced, nullptr, 500, 5,
                                               mw::RunOptions{false, 0});
  const auto d = mw::estimate_noise_covariance(sys, 2, TransformMode::kNonBalanced, nullptr, 500, 6);
  for (int j = 0; j < 2; ++j) {
    CHECK((a[static_cast<std::size_t>(j)].array() == b[static_cast<std::size_t>(j)].array()).all());
    CHECK((a[static_cast<std::size_t>(j)].array() == c[static_cast<std::size_t>(j)].array()).all());
  }
  CHECK(oracle::max_abs(a[0] - d[0]) > 0.0);

  CHECK_THROWS_AS(mw::estimate_noise_covariance(sys, 2, TransformMode::kNonBalanced, nullptr, 0, 1),
                  std::invalid_argument);
}
