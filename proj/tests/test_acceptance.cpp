// Acceptance gate: one line per criterion, pinned tolerances, exit 0 only
// when every criterion holds. Each check recomputes its reference values
// here rather than trusting the library under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "mw/bauer.hpp"
#include "mw/completion.hpp"
#include "mw/denoise.hpp"
#include "mw/design.hpp"
#include "mw/io.hpp"
#include "mw/lifting.hpp"
#include "mw/metrics.hpp"
#include "mw/system.hpp"
#include "mw/transform.hpp"
#include "oracles.hpp"

using mw::Mat;
using Clock = std::chrono::steady_clock;

namespace {

int g_failed = 0;

void report(int n, bool ok, const std::string& what) {
  std::printf("criterion %2d: %s - %s\n", n, ok ? "PASS" : "FAIL", what.c_str());
  if (!ok) ++g_failed;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Plain fixed-point iteration, independent of the library loop.
Mat iterate_plain(const mw::LaurentMatrix& p, long n) {
  const Mat p0 = p.at(0), p1 = p.at(1);
  Mat x = p0;
  for (long k = 0; k < n; ++k) x = p0 - p1.transpose() * x.inverse() * p1;
  return x;
}

double fp_residual(const mw::LaurentMatrix& p, const Mat& x) {
  const Mat p0 = p.at(0), p1 = p.at(1);
  return mw::inf_norm(x - (p0 - p1.transpose() * x.inverse() * p1));
}

// Closed-form scaling/wavelet functions; q = sqrt3 gives the exact system.
double phi_ref(int row, double t, double q) { return row == 0 ? 1.0 : q * (1.0 - 2.0 * t); }
double psi_ref(int row, double t, double q) {
  if (row == 0) return t < 0.5 ? q * (1.0 - 4.0 * t) : -q * (3.0 - 4.0 * t);
  const double qq = q * q;
  return t < 0.5 ? (qq - 1.0) / 2.0 - 2.0 * qq * t : (1.0 + 3.0 * qq) / 2.0 - 2.0 * qq * t;
}

double cascade_sup_error(const mw::MultiwaveletSystem& sys, double q, int level) {
  const mw::SampledFunctions fx = mw::cascade_eval(sys, level);
  double worst = 0.0;
  const std::size_t last = fx.grid.size() - 1;
  for (std::size_t i = 0; i < fx.grid.size(); ++i) {
    // Grid values carry right limits; at t = 1 the left limit applies.
    const double t = fx.grid[i];
    const double tt = i == last ? std::nextafter(t, 0.0) : t;
    for (int row = 0; row < 2; ++row) {
      worst = std::max(worst, std::abs(fx.phi(row, static_cast<long>(i)) - phi_ref(row, tt, q)));
      worst = std::max(worst, std::abs(fx.psi(row, static_cast<long>(i)) - psi_ref(row, tt, q)));
    }
  }
  return worst;
}

Mat bump_image(int n) {
  Mat img(n, n);
  const double c = (n - 1) / 2.0, s = n / 5.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = (i - c) / s, v = (j - c) / s;
      img(i, j) = 120.0 + 80.0 * std::exp(-0.5 * (u * u + v * v));
    }
  return img;
}

double detail_energy(const mw::Pyramid2D& pyr) {
  double e = 0.0;
  for (int level = 1; level <= pyr.J; ++level)
    for (const mw::Rect& rect : mw::detail_rects(pyr, level))
      e += pyr.data.block(rect.row0, rect.col0, rect.rows, rect.cols).squaredNorm();
  return e;
}

}  // namespace

int main() {
  const Mat id2 = Mat::Identity(2, 2);

  // --- 1: closed-form product-filter design -------------------------------
  {
    const auto t0 = Clock::now();
    const mw::LaurentMatrix p = mw::solve_simple_product_filter({4, 0});
    const double dt = seconds_since(t0);
    bool ok = dt < 1e-3;
    ok = ok && mw::inf_norm(p.at(1) - oracle::p1()) <= 1e-14;
    ok = ok && mw::inf_norm(p.at(0) - id2) <= 1e-14;
    ok = ok && mw::inf_norm(p.at(-1) - Mat(oracle::p1().transpose())) <= 1e-14;
    ok = ok && p.lo() == -1 && p.hi() == 1;
    const mw::LaurentScalar det = mw::lm_det(p);
    const double want[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
    for (int k = -2; k <= 2; ++k) ok = ok && std::abs(det.at(k) - want[k + 2]) <= 1e-14;
    ok = ok && det.at(3) == 0.0 && det.at(-3) == 0.0;
    report(1, ok, "product filter matches the closed form and its determinant factors cleanly");
  }

  const mw::LaurentMatrix p = mw::solve_simple_product_filter({4, 0});
  const Mat x_star = oracle::h0() * oracle::h0().transpose();

  // --- 2: fixed-point spectral factorization ------------------------------
  mw::BauerState st;
  {
    const auto t0 = Clock::now();
    st = mw::bauer_fixed_point(p, 1e-12, 10'000'000);
    const double dt = seconds_since(t0);
    bool ok = dt < 60.0 && st.converged && st.iter <= 10'000'000;
    ok = ok && mw::inf_norm(st.X - x_star) <= 1e-6;
    ok = ok && fp_residual(p, x_star) <= 1e-15;
    Mat x = p.at(0);
    double prev = fp_residual(p, x);
    bool monotone = true;
    for (int k = 0; k < 2000; ++k) {
      x = p.at(0) - p.at(1).transpose() * x.inverse() * p.at(1);
      const double cur = fp_residual(p, x);
      monotone = monotone && cur <= prev;
      prev = cur;
    }
    report(2, ok && monotone,
           "fixed-point iteration converges to the true limit with monotone residuals");
  }

  // --- 3: factor extraction ------------------------------------------------
  {
    const auto [h0_it, h1_it] = mw::extract_factors(st.X, p);
    bool ok = mw::inf_norm(h0_it - oracle::h0()) <= 1e-5 &&
              mw::inf_norm(h1_it - oracle::h1()) <= 1e-5;
    ok = ok && mw::verify_factorization(mw::LaurentMatrix::causal({h0_it, h1_it}), p) <= 1e-10;
    const auto [h0_ex, h1_ex] = mw::extract_factors(x_star, p);
    ok = ok && mw::inf_norm(h0_ex - oracle::h0()) <= 1e-12 &&
         mw::inf_norm(h1_ex - oracle::h1()) <= 1e-12;
    report(3, ok, "extracted factors reproduce the analysis taps and refactor the product");
  }

  // --- 4: truncated Cholesky agrees with the iteration ---------------------
  {
    bool ok = true;
    for (long n : {1L, 2L, 10L, 100L}) {
      const Mat l = mw::bauer_truncated_cholesky(p, n).second;
      ok = ok && mw::inf_norm(Mat(l * l.transpose()) - iterate_plain(p, n)) <= 1e-12;
    }
    report(4, ok, "block Cholesky of the truncation reproduces the fixed-point iterates");
  }

  // --- 5: symmetric completion ---------------------------------------------
  {
    const Mat h0 = oracle::h0(), h1 = oracle::h1();
    const mw::SymmetrySignature s = mw::detect_symmetry(h0, h1);
    const auto [g0_hat, g1_hat] = mw::orthogonal_complement(h0, h1);
    const auto [g0, g1] = mw::symmetric_completion(h0, h1, g0_hat, g1_hat, s);
    bool ok = mw::inf_norm(g0 - oracle::g0()) <= 1e-12 && mw::inf_norm(g1 - oracle::g1()) <= 1e-12;
    Mat w(4, 4);
    w.topLeftCorner(2, 2) = h0;
    w.topRightCorner(2, 2) = h1;
    w.bottomLeftCorner(2, 2) = g0;
    w.bottomRightCorner(2, 2) = g1;
    ok = ok && mw::inf_norm(Mat(w * w.transpose()) - Mat::Identity(4, 4)) <= 1e-12;
    report(5, ok, "symmetry-constrained completion rebuilds the wavelet taps orthonormally");
  }

  const mw::MultiwaveletSystem sys = mw::sa1();
  const mw::PrePostPair pp = mw::haar_prepost();

  // --- 6: perfect reconstruction, both modes, 1D and 2D ---------------------
  {
    bool ok = true;
    const std::vector<double> sig = mw::gen_test_signal(mw::TestSignalKind::kPieceRegular, 1024);
    const Mat img = bump_image(64);
    for (mw::TransformMode mode : {mw::TransformMode::kBalanced, mw::TransformMode::kNonBalanced}) {
      const mw::PrePostPair* pf = mode == mw::TransformMode::kBalanced ? &pp : nullptr;
      for (int j = 1; j <= 3; ++j) {
        const mw::WaveletPyramid pyr = mw::dmwt_forward_1d(sig, sys, j, mode, pf);
        ok = ok && mw::sup_error(mw::dmwt_inverse_1d(pyr, sys, pf), sig) <= 1e-9;
        const mw::Pyramid2D p2 = mw::dmwt_forward_2d(img, sys, j, mode, pf);
        ok = ok && (mw::dmwt_inverse_2d(p2, sys, pf) - img).cwiseAbs().maxCoeff() <= 1e-9;
        if (mode == mw::TransformMode::kBalanced) {
          double e1 = 0.0;
          for (double v : sig) e1 += v * v;
          double ec = pyr.s.squaredNorm();
          for (const Mat& d : pyr.d) ec += d.squaredNorm();
          ok = ok && std::abs(ec - e1) <= 1e-12 * e1;
          ok = ok && std::abs(p2.data.squaredNorm() - img.squaredNorm()) <=
                         1e-12 * img.squaredNorm();
        }
      }
    }
    report(6, ok, "forward/inverse transforms reconstruct to 1e-9 and conserve balanced energy");
  }

  // --- 7: lifting scheme -----------------------------------------------------
  {
    const mw::LiftingPlan exact =
        mw::sa1_lifting_plan(mw::CoeffEncoding::kExact, mw::Rounding::kNone);
    const Mat m = mw::plan_matrix(exact);
    bool ok = mw::inf_norm(Mat(m.transpose() * m) - 2.0 * Mat::Identity(4, 4)) <= 1e-12;
    oracle::TestRand rnd(17);
    const Mat w = oracle::rt2 * oracle::bank4();
    for (int rep = 0; rep < 100 && ok; ++rep) {
      Eigen::Vector4d x;
      for (int i = 0; i < 4; ++i) x[i] = rnd.real(-50.0, 50.0);
      const Eigen::Vector4d y = mw::lift_forward(exact, x);
      ok = ok && (y - w * x).cwiseAbs().maxCoeff() <= 1e-12;
      ok = ok && (mw::lift_inverse(exact, y) - x).cwiseAbs().maxCoeff() <= 1e-12;
    }
    for (int b0 : {1, 2, 5, 8}) {
      const mw::LiftingPlan plan =
          mw::sa1_lifting_plan(mw::CoeffEncoding::kDyadic, mw::Rounding::kFloor, b0);
      for (int rep = 0; rep < 10'000 && ok; ++rep) {
        std::array<std::int64_t, 4> xi;
        for (auto& v : xi)
          v = static_cast<std::int64_t>(std::floor(rnd.real(-1048576.0, 1048576.0)));
        ok = ok && mw::lift_inverse_int(plan, mw::lift_forward_int(plan, xi)) == xi;
      }
    }
    report(7, ok, "lifting factorization is sqrt2-orthogonal and integer-reversible");
  }

  // --- 8: dyadic quantization table ------------------------------------------
  {
    const std::int64_t ks[14] = {3,   7,   14,  28,  55,   111,  222,
                                 443, 887, 1774, 3547, 7094, 14189, 28378};
    const double errs[14] = {0.232050807568877,  -0.017949192431123, -0.017949192431123,
                             -0.017949192431123, 0.013300807568877,  -0.002324192431123,
                             -0.002324192431123, 0.001582057568877,  -0.000371067431123,
                             -0.000371067431123, 0.000117213818877,  0.000117213818877,
                             -0.000004856493623, -0.000004856493623};
    bool ok = true;
    for (int b0 = 1; b0 <= 14; ++b0) {
      const mw::DyadicApprox a = mw::dyadic_approx(b0);
      ok = ok && a.k == ks[b0 - 1] && std::abs(a.error - errs[b0 - 1]) <= 1e-15;
    }
    for (int b0 : {3, 4, 7, 10, 12, 14})
      ok = ok && mw::dyadic_approx(b0).value == mw::dyadic_approx(b0 - 1).value;
    report(8, ok, "quantization table mantissas and signed errors match to 1e-15");
  }

  // --- 9: Gram defect ----------------------------------------------------------
  {
    const auto [dh, dg, dhg] = mw::gram_defect(sys);
    bool ok = mw::inf_norm(dh - 2.0 * id2) <= 1e-14 && mw::inf_norm(dg - 2.0 * id2) <= 1e-14 &&
              mw::inf_norm(dhg) <= 1e-14;
    Mat want(2, 2);
    want << 2.0, 0.0, 0.0, 13.0 / 8.0;
    const auto [qh, qg, qhg] = mw::gram_defect(mw::quantized_sa1(1));
    ok = ok && mw::inf_norm(qh - want) <= 1e-14 && mw::inf_norm(qg - want) <= 1e-14 &&
         mw::inf_norm(qhg) <= 1e-14;
    report(9, ok, "Gram defect is (2I, 2I, 0) exactly and diag(2, 13/8) when quantized");
  }

  // --- 10: coding gain ----------------------------------------------------------
  {
    Mat w(4, 4);
    w.topLeftCorner(2, 2) = oracle::h0();
    w.topRightCorner(2, 2) = oracle::h1();
    w.bottomLeftCorner(2, 2) = oracle::g0();
    w.bottomRightCorner(2, 2) = oracle::g1();
    Mat rr(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) rr(i, j) = std::pow(0.95, std::abs(i - j));
    const Eigen::Vector4d v = (w * rr * w.transpose()).diagonal();
    const double pinned[4] = {1.9025, 0.50864, 0.0975, 1.49136};
    bool ok = true;
    for (int i = 0; i < 4; ++i) ok = ok && std::abs(v[i] - pinned[i]) <= 5e-6;
    ok = ok && std::abs(v.mean() - 1.0) <= 1e-12;
    ok = ok && std::abs(mw::coding_gain(sys) - 2.13) <= 0.01;
    ok = ok && std::abs(mw::coding_gain(mw::quantized_sa1(1)) - 2.01) <= 0.05;
    report(10, ok, "AR(1) coding gain is 2.13 dB exact / 2.01 dB quantized with pinned variances");
  }

  // --- 11: cascade evaluation ----------------------------------------------------
  {
    bool ok = cascade_sup_error(sys, oracle::rt3, 8) <= 1e-10;
    const mw::MultiwaveletSystem qsys = mw::quantized_sa1(1);
    ok = ok && cascade_sup_error(qsys, 1.5, 8) <= 1e-12;
    const mw::SampledFunctions fq = mw::cascade_eval(qsys, 4);
    ok = ok && std::abs(fq.psi(1, 0) - 5.0 / 8.0) <= 1e-12;
    report(11, ok, "cascade iterates converge to the piecewise-linear limits on the dyadic grid");
  }

  // --- 12: image denoising --------------------------------------------------------
  {
    const Mat clean = bump_image(256);
    const std::vector<double> noise = mw::gen_awgn(256 * 256, 10.0, 97);
    Mat noisy = clean;
    for (int j = 0; j < 256; ++j)
      for (int i = 0; i < 256; ++i) noisy(i, j) += noise[static_cast<std::size_t>(256 * j + i)];
    const double base = mw::psnr(noisy, clean).psnr;

    mw::NoiseModel model;
    model.sigma = 10.0;
    bool ok = true;
    for (int j = 1; j <= 3; ++j) {
      for (mw::ShrinkRule rule : {mw::ShrinkRule::kHard, mw::ShrinkRule::kSoft}) {
        const auto t0 = Clock::now();
        const Mat out =
            mw::denoise_image(noisy, sys, j, rule, model, mw::TransformMode::kBalanced, &pp);
        ok = ok && seconds_since(t0) < 5.0;
        ok = ok && mw::psnr(out, clean).psnr >= base + 0.5;
      }
      const mw::Pyramid2D pyr =
          mw::dmwt_forward_2d(noisy, sys, j, mw::TransformMode::kBalanced, &pp);
      const double lambda = mw::universal_threshold(10.0, 256 * 256);
      const double eh = detail_energy(mw::vector_shrink_2d(pyr, model, lambda, mw::ShrinkRule::kHard));
      const double es = detail_energy(mw::vector_shrink_2d(pyr, model, lambda, mw::ShrinkRule::kSoft));
      ok = ok && es <= eh;
    }
    report(12, ok, "balanced denoising gains at least 0.5 dB per level/rule within 5 s per image");
  }

  // --- 13: quantization error versus depth -------------------------------------------
  {
    const mw::MultiwaveletSystem qsys = mw::quantized_sa1(1);
    bool ok = true;
    for (mw::TestSignalKind kind :
         {mw::TestSignalKind::kPieceRegular, mw::TestSignalKind::kPiecePolynomial}) {
      const std::vector<double> x = mw::gen_test_signal(kind, 1024);
      double best = 0.0;
      for (int j = 1; j <= 6; ++j) {
        const auto pyr = mw::dmwt_forward_1d(x, qsys, j, mw::TransformMode::kBalanced, &pp);
        const double err = mw::sup_error(mw::dmwt_inverse_1d(pyr, qsys, &pp), x);
        if (j == 1)
          best = err;
        else
          ok = ok && best < err;
      }
    }
    report(13, ok, "single-level decomposition minimizes the dyadic-bank reconstruction error");
  }

  std::printf("%d of 13 criteria passed\n", 13 - g_failed);
  return g_failed == 0 ? 0 : 1;
}
