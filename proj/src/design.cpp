#include "mw/design.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mw {

LaurentMatrix solve_simple_product_filter(const SimpleDesignParams& params) {
  if (params.k != 4)
    throw std::invalid_argument("solve_simple_product_filter: only k = 4 is supported");
  if (params.branch < 0 || params.branch > 3)
    throw std::invalid_argument("solve_simple_product_filter: branch must be in 0..3");

  const double s3 = std::numbers::sqrt3;
  // branch bit 1 swaps the roles of a and d, bit 0 flips the sign of b.
  const double a = (params.branch & 2) ? -0.25 : 0.5;
  const double d = 0.25 - a;
  const double b = ((params.branch & 1) ? 1.0 : -1.0) * s3 / 4.0;
  const double c = -b;

  Mat p1(2, 2);
  p1 << a, b, c, d;

  LaurentMatrix p(2, -1, 1);
  p.coeff(-1) = p1.transpose();
  p.coeff(0) = Mat::Identity(2, 2);
  p.coeff(1) = p1;
  return p;
}

}  // namespace mw
