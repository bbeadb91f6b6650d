#pragma once

#include <array>
#include <cstdint>
#include <tuple>
#include <vector>

#include "mw/par.hpp"
#include "mw/system.hpp"

namespace mw {

enum class CoeffEncoding { kExact, kDyadic };
enum class Rounding { kNone, kFloor };

/// One term of a shear update. Dyadic coefficients additionally carry the
/// exact rational form num * 2^-den_bits used by the integer engine.
struct LiftSource {
  int index = 0;
  double coeff = 0.0;
  std::int64_t num = 0;
  int den_bits = -1;  ///< -1 when the coefficient has no dyadic form
};

/// Either a shear (target += sum of scaled other components, optionally
/// floored) or an exact power-of-two scale of one component.
struct LiftStep {
  enum class Kind { kShear, kScale };
  Kind kind = Kind::kShear;
  int target = 0;
  std::vector<LiftSource> sources;  ///< shear only
  double factor = 1.0;              ///< scale only
  int factor_log2 = 0;              ///< scale only; factor = 2^factor_log2
};

struct LiftingPlan {
  std::array<int, 4> perm{};  ///< y_i = w_{perm[i]} after the steps
  std::vector<LiftStep> steps;
  Rounding rounding = Rounding::kNone;
  CoeffEncoding encoding = CoeffEncoding::kExact;
  int b0 = 0;  ///< dyadic bits when encoding == kDyadic
};

/// The 4-point plan whose composed linear action equals sqrt2 times the
/// orthonormal analysis block [[H0,H1],[G0,G1]] of the exact system (for
/// kDyadic, of the b0-quantized system in 15 of 16 entries; see
/// plan_matrix). b0 is ignored for kExact.
LiftingPlan sa1_lifting_plan(CoeffEncoding encoding, Rounding rounding, int b0 = 1);

/// Composed linear action of the plan with rounding disabled.
Mat plan_matrix(const LiftingPlan& plan);

/// Forward/inverse application to one 4-block. The inverse executes the
/// reversed step list with negated shears and reciprocal scales, so
/// inverse(forward(x)) = x for every x, including under floor rounding
/// (shears floor the increment, leaving the stored component intact).
Eigen::Vector4d lift_forward(const LiftingPlan& plan, const Eigen::Vector4d& x);
Eigen::Vector4d lift_inverse(const LiftingPlan& plan, const Eigen::Vector4d& y);

/// Integer engine: exact shift-add arithmetic; requires a dyadic plan.
std::array<std::int64_t, 4> lift_forward_int(const LiftingPlan& plan,
                                             const std::array<std::int64_t, 4>& x);
std::array<std::int64_t, 4> lift_inverse_int(const LiftingPlan& plan,
                                             const std::array<std::int64_t, 4>& y);

/// Blockwise application over disjoint 4-blocks; length divisible by 4.
std::vector<double> lift_forward_blocks(const LiftingPlan& plan, const std::vector<double>& x,
                                        const RunOptions& opts = {});
std::vector<double> lift_inverse_blocks(const LiftingPlan& plan, const std::vector<double>& y,
                                        const RunOptions& opts = {});
std::vector<std::int64_t> lift_forward_blocks_int(const LiftingPlan& plan,
                                                  const std::vector<std::int64_t>& x,
                                                  const RunOptions& opts = {});
std::vector<std::int64_t> lift_inverse_blocks_int(const LiftingPlan& plan,
                                                  const std::vector<std::int64_t>& y,
                                                  const RunOptions& opts = {});

namespace ref {
/// Serial blockwise drivers, bitwise identical to the parallel versions.
std::vector<double> lift_forward_blocks(const LiftingPlan& plan, const std::vector<double>& x);
std::vector<double> lift_inverse_blocks(const LiftingPlan& plan, const std::vector<double>& y);
}  // namespace ref

/// One row of the quantization table: sqrt3 ~ k * 2^-b0.
struct DyadicApprox {
  int b0 = 0;
  std::int64_t k = 0;
  double value = 0.0;
  double error = 0.0;  ///< sqrt3 - value
  int adders = 0;      ///< CSD nonzero digits minus one
};

DyadicApprox dyadic_approx(int b0);

/// Canonical signed-digit form, least significant digit first, each in
/// {-1, 0, +1}; no two adjacent digits are both nonzero.
std::vector<int> csd_digits(std::int64_t k);

/// floor(x * k * 2^-b0) evaluated purely with shifts and adds over the CSD
/// digits of k.
std::int64_t shift_add_multiply(std::int64_t x, std::int64_t k, int b0);

/// Constant matrices DH = H(z)H(z)* + H(-z)H(-z)*, DG, DHG (cross) for an
/// r = 2, m = 1 bank; orthogonal banks give (2I, 2I, 0).
std::tuple<Mat, Mat, Mat> gram_defect(const MultiwaveletSystem& sys);

}  // namespace mw
