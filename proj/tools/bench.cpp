// Wall-time comparison of the OpenMP kernels against the serial reference
// drivers. The reference paths are the testing oracles, so besides timing
// this also re-checks bitwise agreement on large inputs.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "mw/denoise.hpp"
#include "mw/io.hpp"
#include "mw/lifting.hpp"
#include "mw/par.hpp"
#include "mw/system.hpp"
#include "mw/transform.hpp"

namespace {

using clk = std::chrono::steady_clock;

double seconds(clk::time_point a, clk::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = clk::now();
    f();
    const auto t1 = clk::now();
    best = std::min(best, seconds(t0, t1));
  }
  return best;
}

void report(const char* what, double serial, double parallel, bool equal) {
  std::printf("%-34s serial %8.4f s   parallel %8.4f s   speedup %5.2fx   %s\n", what, serial,
              parallel, serial / parallel, equal ? "outputs identical" : "OUTPUTS DIFFER");
  if (!equal) std::exit(1);
}

mw::Mat synthetic_image(int n) {
  // Deterministic texture: smooth ramp plus seeded noise.
  const std::vector<double> noise = mw::gen_awgn(static_cast<long long>(n) * n, 12.0, 2024);
  mw::Mat img(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      img(i, j) = 96.0 + 0.05 * i + 0.03 * j + noise[static_cast<std::size_t>(i) * n + j];
  return img;
}

}  // namespace

int main(int argc, char** argv) {
  int n = 1024;
  int reps = 3;
  if (argc > 1) n = std::atoi(argv[1]);
  if (argc > 2) reps = std::atoi(argv[2]);
  if (n < 64 || n % 64 != 0) {
    std::fprintf(stderr, "usage: %s [image size, multiple of 64] [repetitions]\n", argv[0]);
    return 1;
  }
  std::printf("image %dx%d, best of %d runs, %d thread(s)\n\n", n, n, reps,
              mw::resolve_threads({}));

  const mw::MultiwaveletSystem sys = mw::sa1();
  const mw::PrePostPair pp = mw::haar_prepost();
  const mw::Mat img = synthetic_image(n);
  const int j_levels = 3;

  // 2D forward transform.
  mw::Pyramid2D fwd_par, fwd_ser;
  const double t_fwd_ser = best_of(
      reps, [&] { fwd_ser = mw::ref::dmwt_forward_2d(img, sys, j_levels,
                                                     mw::TransformMode::kBalanced, &pp); });
  const double t_fwd_par = best_of(
      reps, [&] { fwd_par = mw::dmwt_forward_2d(img, sys, j_levels,
                                                mw::TransformMode::kBalanced, &pp); });
  report("2D forward transform (J = 3)", t_fwd_ser, t_fwd_par,
         fwd_par.data == fwd_ser.data);

  // 2D inverse transform.
  mw::Mat inv_par, inv_ser;
  const double t_inv_ser =
      best_of(reps, [&] { inv_ser = mw::ref::dmwt_inverse_2d(fwd_ser, sys, &pp); });
  const double t_inv_par = best_of(reps, [&] { inv_par = mw::dmwt_inverse_2d(fwd_par, sys, &pp); });
  report("2D inverse transform", t_inv_ser, t_inv_par, inv_par == inv_ser);

  // Vector shrinkage over the 2D pyramid.
  mw::NoiseModel model;
  model.sigma = 12.0;
  const double lambda = mw::universal_threshold(model.sigma, static_cast<long long>(n) * n);
  mw::Pyramid2D shr_par, shr_ser;
  const double t_shr_ser = best_of(reps, [&] {
    shr_ser = mw::vector_shrink_2d(fwd_ser, model, lambda, mw::ShrinkRule::kSoft,
                                   {.parallel = false});
  });
  const double t_shr_par = best_of(
      reps, [&] { shr_par = mw::vector_shrink_2d(fwd_par, model, lambda, mw::ShrinkRule::kSoft); });
  report("2D vector shrinkage (soft)", t_shr_ser, t_shr_par, shr_par.data == shr_ser.data);

  // Blockwise lifting over a long line.
  const mw::LiftingPlan plan =
      mw::sa1_lifting_plan(mw::CoeffEncoding::kDyadic, mw::Rounding::kFloor, 5);
  const std::vector<double> line =
      mw::gen_test_signal(mw::TestSignalKind::kPieceRegular, 1 << 22);
  std::vector<double> lift_par, lift_ser;
  const double t_lift_ser =
      best_of(reps, [&] { lift_ser = mw::ref::lift_forward_blocks(plan, line); });
  const double t_lift_par = best_of(reps, [&] { lift_par = mw::lift_forward_blocks(plan, line); });
  report("blockwise lifting (2^22 samples)", t_lift_ser, t_lift_par, lift_par == lift_ser);

  return 0;
}
