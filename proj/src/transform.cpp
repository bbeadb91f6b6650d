#include "mw/transform.hpp"

#include <numbers>
#include <stdexcept>

namespace mw {

namespace {

long mod(long a, long n) {
  const long r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

PrePostPair haar_prepost() {
  Mat m(2, 2);
  m << 1, 1, 1, -1;
  m /= std::numbers::sqrt2;
  return {LaurentMatrix::monomial(m, 0), LaurentMatrix::monomial(m, 0)};
}

int prepost_delay(const PrePostPair& pp, double tol) {
  LaurentMatrix prod = lm_mul(pp.N, pp.M);
  const Mat eye = Mat::Identity(prod.r(), prod.r());
  int delay = 0;
  bool found = false;
  for (int k = prod.lo(); k <= prod.hi(); ++k) {
    if (inf_norm(prod.coeff(k)) <= tol) continue;
    if (found || inf_norm(prod.coeff(k) - eye) > tol)
      throw std::invalid_argument("prepost_delay: N*M is not a delayed identity");
    delay = k;
    found = true;
  }
  if (!found) throw std::invalid_argument("prepost_delay: N*M vanishes");
  return delay;
}

Mat vectorize(const std::vector<double>& signal, int r) {
  if (r < 1) throw std::invalid_argument("vectorize: r must be >= 1");
  if (signal.size() % static_cast<std::size_t>(r) != 0)
    throw std::invalid_argument("vectorize: signal length not divisible by r");
  const long n = static_cast<long>(signal.size()) / r;
  Mat v(r, n);
  for (long l = 0; l < n; ++l)
    for (int i = 0; i < r; ++i) v(i, l) = signal[static_cast<std::size_t>(l * r + i)];
  return v;
}

std::vector<double> devectorize(const Mat& v) {
  const long n = v.cols();
  const int r = static_cast<int>(v.rows());
  std::vector<double> out(static_cast<std::size_t>(n * r));
  for (long l = 0; l < n; ++l)
    for (int i = 0; i < r; ++i) out[static_cast<std::size_t>(l * r + i)] = v(i, l);
  return out;
}

Mat apply_filter_periodic(const LaurentMatrix& f, const Mat& x) {
  if (f.r() != x.rows()) throw std::invalid_argument("apply_filter_periodic: channel mismatch");
  const long n = x.cols();
  Mat y = Mat::Zero(x.rows(), n);
  // F_p sits at stored exponent -p, so the tap at stored k advances by k.
  for (long l = 0; l < n; ++l)
    for (int k = f.lo(); k <= f.hi(); ++k) y.col(l) += f.coeff(k) * x.col(mod(l + k, n));
  return y;
}

std::pair<Mat, Mat> analysis_step(const Mat& x, const MultiwaveletSystem& sys) {
  if (x.rows() != sys.r) throw std::invalid_argument("analysis_step: channel mismatch");
  const long n = x.cols();
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("analysis_step: need an even vector count");
  Mat s = Mat::Zero(sys.r, n / 2);
  Mat d = Mat::Zero(sys.r, n / 2);
  for (long l = 0; l < n / 2; ++l) {
    for (int k = 0; k <= sys.m; ++k) {
      const auto& col = x.col(mod(2 * l + k, n));
      s.col(l) += sys.H[static_cast<std::size_t>(k)] * col;
      d.col(l) += sys.G[static_cast<std::size_t>(k)] * col;
    }
  }
  return {std::move(s), std::move(d)};
}

Mat synthesis_step(const Mat& s, const Mat& d, const MultiwaveletSystem& sys) {
  if (s.rows() != sys.r || d.rows() != sys.r || s.cols() != d.cols())
    throw std::invalid_argument("synthesis_step: shape mismatch");
  const long n = 2 * s.cols();
  Mat x = Mat::Zero(sys.r, n);
  for (long l = 0; l < n / 2; ++l) {
    for (int k = 0; k <= sys.m; ++k) {
      x.col(mod(2 * l + k, n)) += sys.H[static_cast<std::size_t>(k)].transpose() * s.col(l) +
                                  sys.G[static_cast<std::size_t>(k)].transpose() * d.col(l);
    }
  }
  return x;
}

namespace {

// Undoes the z^c delay left by the postfilter: out_n = in_{n-c}.
Mat delay_compensate(const Mat& w, int c) {
  if (c == 0) return w;
  const long n = w.cols();
  Mat out(w.rows(), n);
  for (long l = 0; l < n; ++l) out.col(l) = w.col(mod(l - c, n));
  return out;
}

void check_1d_args(std::size_t len, const MultiwaveletSystem& sys, int j_levels,
                   TransformMode mode, const PrePostPair* prepost) {
  if (j_levels < 1) throw std::invalid_argument("dmwt: need at least one level");
  const long block = static_cast<long>(sys.r) << j_levels;
  if (len == 0 || static_cast<long>(len) % block != 0)
    throw std::invalid_argument("dmwt: signal length must be divisible by r * 2^J");
  if (mode == TransformMode::kBalanced && prepost == nullptr)
    throw std::invalid_argument("dmwt: balanced mode requires a pre/postfilter pair");
}

}  // namespace

WaveletPyramid dmwt_forward_1d(const std::vector<double>& signal, const MultiwaveletSystem& sys,
                               int j_levels, TransformMode mode, const PrePostPair* prepost) {
  check_1d_args(signal.size(), sys, j_levels, mode, prepost);
  Mat cur = vectorize(signal, sys.r);
  if (mode == TransformMode::kBalanced) cur = apply_filter_periodic(prepost->M, cur);

  WaveletPyramid pyr;
  pyr.J = j_levels;
  pyr.mode = mode;
  pyr.length0 = static_cast<long>(signal.size());
  pyr.d.resize(static_cast<std::size_t>(j_levels));
  for (int j = 1; j <= j_levels; ++j) {
    auto [s, d] = analysis_step(cur, sys);
    pyr.d[static_cast<std::size_t>(j - 1)] = std::move(d);
    cur = std::move(s);
  }
  pyr.s = std::move(cur);
  return pyr;
}

std::vector<double> dmwt_inverse_1d(const WaveletPyramid& pyr, const MultiwaveletSystem& sys,
                                    const PrePostPair* prepost) {
  if (pyr.J < 1 || pyr.d.size() != static_cast<std::size_t>(pyr.J))
    throw std::invalid_argument("dmwt_inverse_1d: malformed pyramid");
  if (pyr.mode == TransformMode::kBalanced && prepost == nullptr)
    throw std::invalid_argument("dmwt_inverse_1d: balanced mode requires a pre/postfilter pair");
  Mat cur = pyr.s;
  for (int j = pyr.J; j >= 1; --j) {
    const Mat& d = pyr.d[static_cast<std::size_t>(j - 1)];
    if (d.rows() != sys.r || d.cols() != cur.cols())
      throw std::invalid_argument("dmwt_inverse_1d: detail shape mismatch");
    cur = synthesis_step(cur, d, sys);
  }
  if (cur.cols() * sys.r != pyr.length0)
    throw std::invalid_argument("dmwt_inverse_1d: pyramid does not match length0");
  if (pyr.mode == TransformMode::kBalanced)
    cur = delay_compensate(apply_filter_periodic(prepost->N, cur), prepost_delay(*prepost));
  return devectorize(cur);
}

namespace {

std::vector<double> get_line(const Mat& a, long idx, bool row, long len) {
  std::vector<double> v(static_cast<std::size_t>(len));
  for (long i = 0; i < len; ++i)
    v[static_cast<std::size_t>(i)] = row ? a(idx, i) : a(i, idx);
  return v;
}

void put_line(Mat& a, long idx, bool row, const std::vector<double>& v) {
  for (long i = 0; i < static_cast<long>(v.size()); ++i) {
    if (row)
      a(idx, i) = v[static_cast<std::size_t>(i)];
    else
      a(i, idx) = v[static_cast<std::size_t>(i)];
  }
}

// One analysis level along a single line: the approximation scalars land in
// the front half, detail scalars in the back half.
void line_forward(Mat& a, long idx, bool row, long len, const MultiwaveletSystem& sys) {
  const Mat v = vectorize(get_line(a, idx, row, len), sys.r);
  auto [s, d] = analysis_step(v, sys);
  std::vector<double> out = devectorize(s);
  const std::vector<double> dv = devectorize(d);
  out.insert(out.end(), dv.begin(), dv.end());
  put_line(a, idx, row, out);
}

void line_inverse(Mat& a, long idx, bool row, long len, const MultiwaveletSystem& sys) {
  const std::vector<double> x = get_line(a, idx, row, len);
  const std::vector<double> sv(x.begin(), x.begin() + len / 2);
  const std::vector<double> dv(x.begin() + len / 2, x.end());
  const Mat rec = synthesis_step(vectorize(sv, sys.r), vectorize(dv, sys.r), sys);
  put_line(a, idx, row, devectorize(rec));
}

void line_filter(Mat& a, long idx, bool row, long len, const LaurentMatrix& f, int delay) {
  const Mat v = vectorize(get_line(a, idx, row, len), f.r());
  const Mat w = delay_compensate(apply_filter_periodic(f, v), delay);
  put_line(a, idx, row, devectorize(w));
}

void check_2d_args(const Mat& image, const MultiwaveletSystem& sys, int j_levels,
                   TransformMode mode, const PrePostPair* prepost) {
  if (j_levels < 1) throw std::invalid_argument("dmwt 2d: need at least one level");
  const long block = static_cast<long>(sys.r) << j_levels;
  if (image.rows() == 0 || image.cols() == 0 || image.rows() % block != 0 ||
      image.cols() % block != 0)
    throw std::invalid_argument("dmwt 2d: both dimensions must be divisible by r * 2^J");
  if (mode == TransformMode::kBalanced && prepost == nullptr)
    throw std::invalid_argument("dmwt 2d: balanced mode requires a pre/postfilter pair");
}

template <class F>
void for_each_line(long n, int nt, F&& body) {
#ifdef _OPENMP
  if (nt > 1) {
#pragma omp parallel for num_threads(nt) schedule(static)
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
#endif
  (void)nt;
  for (long i = 0; i < n; ++i) body(i);
}

}  // namespace

std::array<Rect, 3> detail_rects(const Pyramid2D& p, int level) {
  if (level < 1 || level > p.J) throw std::invalid_argument("detail_rects: level out of range");
  const int h = static_cast<int>(p.data.rows()) >> (level - 1);
  const int w = static_cast<int>(p.data.cols()) >> (level - 1);
  const int hh = h / 2, hw = w / 2;
  return {Rect{0, hw, hh, hw}, Rect{hh, 0, hh, hw}, Rect{hh, hw, hh, hw}};
}

Rect approx_rect(const Pyramid2D& p) {
  return Rect{0, 0, static_cast<int>(p.data.rows()) >> p.J,
              static_cast<int>(p.data.cols()) >> p.J};
}

Pyramid2D dmwt_forward_2d(const Mat& image, const MultiwaveletSystem& sys, int j_levels,
                          TransformMode mode, const PrePostPair* prepost,
                          const RunOptions& opts) {
  check_2d_args(image, sys, j_levels, mode, prepost);
  const int nt = resolve_threads(opts);
  Pyramid2D pyr;
  pyr.J = j_levels;
  pyr.r = sys.r;
  pyr.mode = mode;
  pyr.data = image;
  Mat& a = pyr.data;

  if (mode == TransformMode::kBalanced) {
    for_each_line(a.rows(), nt, [&](long i) { line_filter(a, i, true, a.cols(), prepost->M, 0); });
    for_each_line(a.cols(), nt, [&](long j) { line_filter(a, j, false, a.rows(), prepost->M, 0); });
  }
  long h = a.rows(), w = a.cols();
  for (int level = 1; level <= j_levels; ++level) {
    for_each_line(h, nt, [&](long i) { line_forward(a, i, true, w, sys); });
    for_each_line(w, nt, [&](long j) { line_forward(a, j, false, h, sys); });
    h /= 2;
    w /= 2;
  }
  return pyr;
}

Mat dmwt_inverse_2d(const Pyramid2D& pyr, const MultiwaveletSystem& sys,
                    const PrePostPair* prepost, const RunOptions& opts) {
  check_2d_args(pyr.data, sys, pyr.J, pyr.mode, prepost);
  const int nt = resolve_threads(opts);
  Mat a = pyr.data;
  for (int level = pyr.J; level >= 1; --level) {
    const long h = a.rows() >> (level - 1), w = a.cols() >> (level - 1);
    for_each_line(w, nt, [&](long j) { line_inverse(a, j, false, h, sys); });
    for_each_line(h, nt, [&](long i) { line_inverse(a, i, true, w, sys); });
  }
  if (pyr.mode == TransformMode::kBalanced) {
    const int c = prepost_delay(*prepost);
    for_each_line(a.cols(), nt, [&](long j) { line_filter(a, j, false, a.rows(), prepost->N, c); });
    for_each_line(a.rows(), nt, [&](long i) { line_filter(a, i, true, a.cols(), prepost->N, c); });
  }
  return a;
}

namespace ref {

Pyramid2D dmwt_forward_2d(const Mat& image, const MultiwaveletSystem& sys, int j_levels,
                          TransformMode mode, const PrePostPair* prepost) {
  check_2d_args(image, sys, j_levels, mode, prepost);
  Pyramid2D pyr;
  pyr.J = j_levels;
  pyr.r = sys.r;
  pyr.mode = mode;
  pyr.data = image;
  Mat& a = pyr.data;

  if (mode == TransformMode::kBalanced) {
    for (long i = 0; i < a.rows(); ++i) line_filter(a, i, true, a.cols(), prepost->M, 0);
    for (long j = 0; j < a.cols(); ++j) line_filter(a, j, false, a.rows(), prepost->M, 0);
  }
  long h = a.rows(), w = a.cols();
  for (int level = 1; level <= j_levels; ++level) {
    for (long i = 0; i < h; ++i) line_forward(a, i, true, w, sys);
    for (long j = 0; j < w; ++j) line_forward(a, j, false, h, sys);
    h /= 2;
    w /= 2;
  }
  return pyr;
}

Mat dmwt_inverse_2d(const Pyramid2D& pyr, const MultiwaveletSystem& sys,
                    const PrePostPair* prepost) {
  check_2d_args(pyr.data, sys, pyr.J, pyr.mode, prepost);
  Mat a = pyr.data;
  for (int level = pyr.J; level >= 1; --level) {
    const long h = a.rows() >> (level - 1), w = a.cols() >> (level - 1);
    for (long j = 0; j < w; ++j) line_inverse(a, j, false, h, sys);
    for (long i = 0; i < h; ++i) line_inverse(a, i, true, w, sys);
  }
  if (pyr.mode == TransformMode::kBalanced) {
    const int c = prepost_delay(*prepost);
    for (long j = 0; j < a.cols(); ++j) line_filter(a, j, false, a.rows(), prepost->N, c);
    for (long i = 0; i < a.rows(); ++i) line_filter(a, i, true, a.cols(), prepost->N, c);
  }
  return a;
}

}  // namespace ref

}  // namespace mw
