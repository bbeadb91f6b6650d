#include "mw/lifting.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mw {

namespace {

LiftSource dyadic_source(int index, std::int64_t num, int den_bits) {
  LiftSource s;
  s.index = index;
  s.num = num;
  s.den_bits = den_bits;
  s.coeff = static_cast<double>(num) * std::ldexp(1.0, -den_bits);
  return s;
}

LiftSource exact_source(int index, double coeff) {
  LiftSource s;
  s.index = index;
  s.coeff = coeff;
  return s;
}

LiftStep shear(int target, std::vector<LiftSource> sources) {
  LiftStep st;
  st.kind = LiftStep::Kind::kShear;
  st.target = target;
  st.sources = std::move(sources);
  return st;
}

LiftStep scale(int target, int log2_factor) {
  LiftStep st;
  st.kind = LiftStep::Kind::kScale;
  st.target = target;
  st.factor = std::ldexp(1.0, log2_factor);
  st.factor_log2 = log2_factor;
  return st;
}

}  // namespace

LiftingPlan sa1_lifting_plan(CoeffEncoding encoding, Rounding rounding, int b0) {
  LiftingPlan plan;
  plan.perm = {0, 3, 1, 2};
  plan.rounding = rounding;
  plan.encoding = encoding;

  // The irrational coefficient and its half, either exact or as k * 2^-b0.
  LiftSource root3 = exact_source(0, std::numbers::sqrt3);
  LiftSource half_root3 = exact_source(0, std::numbers::sqrt3 / 2.0);
  if (encoding == CoeffEncoding::kDyadic) {
    if (b0 < 1) throw std::invalid_argument("sa1_lifting_plan: b0 must be >= 1");
    plan.b0 = b0;
    const std::int64_t k = std::llround(std::numbers::sqrt3 * std::ldexp(1.0, b0));
    root3 = dyadic_source(0, k, b0);
    half_root3 = dyadic_source(0, k, b0 + 1);
  }
  auto with_index = [](LiftSource s, int index, bool negate = false) {
    s.index = index;
    if (negate) {
      s.num = -s.num;
      s.coeff = -s.coeff;
    }
    return s;
  };

  plan.steps.push_back(shear(0, {dyadic_source(2, 1, 0)}));
  plan.steps.push_back(shear(1, {dyadic_source(3, -1, 0)}));
  plan.steps.push_back(shear(2, {with_index(root3, 3)}));
  plan.steps.push_back(scale(3, 2));
  plan.steps.push_back(shear(3, {with_index(half_root3, 0), dyadic_source(1, 1, 1),
                                 with_index(root3, 2, true)}));
  plan.steps.push_back(shear(2, {dyadic_source(0, -1, 1), with_index(half_root3, 1)}));
  return plan;
}

namespace {

double shear_increment(const LiftStep& st, const Eigen::Vector4d& v, Rounding rounding) {
  double acc = 0.0;
  for (const LiftSource& s : st.sources) acc += s.coeff * v[s.index];
  return rounding == Rounding::kFloor ? std::floor(acc) : acc;
}

// Exact rational shear increment over a common power-of-two denominator,
// floored by one arithmetic right shift.
std::int64_t shear_increment_int(const LiftStep& st, const std::array<std::int64_t, 4>& v) {
  int bits = 0;
  for (const LiftSource& s : st.sources) {
    if (s.den_bits < 0)
      throw std::invalid_argument("integer lifting requires a dyadic plan");
    bits = std::max(bits, s.den_bits);
  }
  std::int64_t acc = 0;
  for (const LiftSource& s : st.sources)
    acc += (s.num << (bits - s.den_bits)) * v[static_cast<std::size_t>(s.index)];
  return acc >> bits;
}

}  // namespace

Mat plan_matrix(const LiftingPlan& plan) {
  Mat m(4, 4);
  LiftingPlan linear = plan;
  linear.rounding = Rounding::kNone;
  for (int j = 0; j < 4; ++j) m.col(j) = lift_forward(linear, Eigen::Vector4d::Unit(j));
  return m;
}

Eigen::Vector4d lift_forward(const LiftingPlan& plan, const Eigen::Vector4d& x) {
  Eigen::Vector4d v = x;
  for (const LiftStep& st : plan.steps) {
    if (st.kind == LiftStep::Kind::kShear)
      v[st.target] += shear_increment(st, v, plan.rounding);
    else
      v[st.target] *= st.factor;
  }
  Eigen::Vector4d y;
  for (int i = 0; i < 4; ++i) y[i] = v[plan.perm[static_cast<std::size_t>(i)]];
  return y;
}

Eigen::Vector4d lift_inverse(const LiftingPlan& plan, const Eigen::Vector4d& y) {
  Eigen::Vector4d v;
  for (int i = 0; i < 4; ++i) v[plan.perm[static_cast<std::size_t>(i)]] = y[i];
  for (auto it = plan.steps.rbegin(); it != plan.steps.rend(); ++it) {
    if (it->kind == LiftStep::Kind::kShear)
      v[it->target] -= shear_increment(*it, v, plan.rounding);
    else
      v[it->target] /= it->factor;
  }
  return v;
}

std::array<std::int64_t, 4> lift_forward_int(const LiftingPlan& plan,
                                             const std::array<std::int64_t, 4>& x) {
  std::array<std::int64_t, 4> v = x;
  for (const LiftStep& st : plan.steps) {
    auto& t = v[static_cast<std::size_t>(st.target)];
    if (st.kind == LiftStep::Kind::kShear)
      t += shear_increment_int(st, v);
    else
      t <<= st.factor_log2;
  }
  std::array<std::int64_t, 4> y;
  for (int i = 0; i < 4; ++i)
    y[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(plan.perm[static_cast<std::size_t>(i)])];
  return y;
}

std::array<std::int64_t, 4> lift_inverse_int(const LiftingPlan& plan,
                                             const std::array<std::int64_t, 4>& y) {
  std::array<std::int64_t, 4> v{};
  for (int i = 0; i < 4; ++i)
    v[static_cast<std::size_t>(plan.perm[static_cast<std::size_t>(i)])] = y[static_cast<std::size_t>(i)];
  for (auto it = plan.steps.rbegin(); it != plan.steps.rend(); ++it) {
    auto& t = v[static_cast<std::size_t>(it->target)];
    if (it->kind == LiftStep::Kind::kShear)
      t -= shear_increment_int(*it, v);
    else
      t >>= it->factor_log2;  // exact: the forward scale multiplied
  }
  return v;
}

namespace {

template <class T, class Fn>
std::vector<T> map_blocks(const std::vector<T>& x, int nt, Fn&& one_block) {
  if (x.size() % 4 != 0)
    throw std::invalid_argument("blockwise lifting needs length divisible by 4");
  std::vector<T> out(x.size());
  const long nb = static_cast<long>(x.size() / 4);
#ifdef _OPENMP
#pragma omp parallel for num_threads(nt) schedule(static) if (nt > 1)
#endif
  for (long b = 0; b < nb; ++b) one_block(&x[static_cast<std::size_t>(4 * b)],
                                          &out[static_cast<std::size_t>(4 * b)]);
  return out;
}

}  // namespace

std::vector<double> lift_forward_blocks(const LiftingPlan& plan, const std::vector<double>& x,
                                        const RunOptions& opts) {
  return map_blocks(x, resolve_threads(opts), [&](const double* in, double* out) {
    Eigen::Vector4d y = lift_forward(plan, Eigen::Vector4d(in[0], in[1], in[2], in[3]));
    for (int i = 0; i < 4; ++i) out[i] = y[i];
  });
}

std::vector<double> lift_inverse_blocks(const LiftingPlan& plan, const std::vector<double>& y,
                                        const RunOptions& opts) {
  return map_blocks(y, resolve_threads(opts), [&](const double* in, double* out) {
    Eigen::Vector4d x = lift_inverse(plan, Eigen::Vector4d(in[0], in[1], in[2], in[3]));
    for (int i = 0; i < 4; ++i) out[i] = x[i];
  });
}

std::vector<std::int64_t> lift_forward_blocks_int(const LiftingPlan& plan,
                                                  const std::vector<std::int64_t>& x,
                                                  const RunOptions& opts) {
  return map_blocks(x, resolve_threads(opts), [&](const std::int64_t* in, std::int64_t* out) {
    const auto y = lift_forward_int(plan, {in[0], in[1], in[2], in[3]});
    for (int i = 0; i < 4; ++i) out[i] = y[static_cast<std::size_t>(i)];
  });
}

std::vector<std::int64_t> lift_inverse_blocks_int(const LiftingPlan& plan,
                                                  const std::vector<std::int64_t>& y,
                                                  const RunOptions& opts) {
  return map_blocks(y, resolve_threads(opts), [&](const std::int64_t* in, std::int64_t* out) {
    const auto x = lift_inverse_int(plan, {in[0], in[1], in[2], in[3]});
    for (int i = 0; i < 4; ++i) out[i] = x[static_cast<std::size_t>(i)];
  });
}

namespace ref {

std::vector<double> lift_forward_blocks(const LiftingPlan& plan, const std::vector<double>& x) {
  if (x.size() % 4 != 0)
    throw std::invalid_argument("blockwise lifting needs length divisible by 4");
  std::vector<double> out(x.size());
  for (std::size_t b = 0; b < x.size(); b += 4) {
    const Eigen::Vector4d y = lift_forward(plan, Eigen::Vector4d(x[b], x[b + 1], x[b + 2], x[b + 3]));
    for (int i = 0; i < 4; ++i) out[b + static_cast<std::size_t>(i)] = y[i];
  }
  return out;
}

std::vector<double> lift_inverse_blocks(const LiftingPlan& plan, const std::vector<double>& y) {
  if (y.size() % 4 != 0)
    throw std::invalid_argument("blockwise lifting needs length divisible by 4");
  std::vector<double> out(y.size());
  for (std::size_t b = 0; b < y.size(); b += 4) {
    const Eigen::Vector4d x = lift_inverse(plan, Eigen::Vector4d(y[b], y[b + 1], y[b + 2], y[b + 3]));
    for (int i = 0; i < 4; ++i) out[b + static_cast<std::size_t>(i)] = x[i];
  }
  return out;
}

}  // namespace ref

DyadicApprox dyadic_approx(int b0) {
  if (b0 < 1) throw std::invalid_argument("dyadic_approx: b0 must be >= 1");
  DyadicApprox a;
  a.b0 = b0;
  a.k = std::llround(std::numbers::sqrt3 * std::ldexp(1.0, b0));
  a.value = static_cast<double>(a.k) * std::ldexp(1.0, -b0);
  a.error = std::numbers::sqrt3 - a.value;
  int nonzero = 0;
  for (int d : csd_digits(a.k))
    if (d != 0) ++nonzero;
  a.adders = std::max(0, nonzero - 1);
  return a;
}

std::vector<int> csd_digits(std::int64_t k) {
  if (k < 0) throw std::invalid_argument("csd_digits: k must be nonnegative");
  std::vector<int> digits;
  while (k != 0) {
    if (k & 1) {
      const int d = 2 - static_cast<int>(k & 3);  // +1 for k=1 mod 4, -1 for 3
      digits.push_back(d);
      k -= d;
    } else {
      digits.push_back(0);
    }
    k >>= 1;
  }
  if (digits.empty()) digits.push_back(0);
  return digits;
}

std::int64_t shift_add_multiply(std::int64_t x, std::int64_t k, int b0) {
  if (b0 < 0) throw std::invalid_argument("shift_add_multiply: b0 must be >= 0");
  std::int64_t acc = 0;
  const std::vector<int> digits = csd_digits(k);
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] == 1)
      acc += x << i;
    else if (digits[i] == -1)
      acc -= x << i;
  }
  return acc >> b0;  // arithmetic shift = floor for negatives
}

std::tuple<Mat, Mat, Mat> gram_defect(const MultiwaveletSystem& sys) {
  if (sys.r != 2 || sys.m != 1)
    throw std::invalid_argument("gram_defect: only r = 2, m = 1 banks supported");
  auto modulated = [](const LaurentMatrix& a) {
    LaurentMatrix out = a;
    for (int k = out.lo(); k <= out.hi(); ++k)
      if (k % 2 != 0) out.coeff(k) = -out.coeff(k);  // z -> -z
    return out;
  };
  auto defect = [&](const LaurentMatrix& a, const LaurentMatrix& b) {
    const LaurentMatrix sum =
        lm_add(lm_mul(a, lm_paraconj(b)), lm_mul(modulated(a), lm_paraconj(modulated(b))));
    // Odd lags cancel exactly; for m = 1 nothing else survives off lag 0.
    return sum.at(0);
  };
  const LaurentMatrix h = sys.h_symbol();
  const LaurentMatrix g = sys.g_symbol();
  return {defect(h, h), defect(g, g), defect(h, g)};
}

}  // namespace mw
