#pragma once

#include "mw/laurent.hpp"

namespace mw {

/// Parameters of the simple half-band product-filter design: the order k of
/// the zero at z = -1 (only k = 4 is implemented) and a branch index picking
/// one of the four closed-form solutions.
struct SimpleDesignParams {
  int k = 4;
  int branch = 0;  // 0..3: {(a,d) = (1/2,-1/4) or (-1/4,1/2)} x {sign of b}
};

/// Builds P(z) = P1^T z^-1 + I + P1 z where P1 = [[a,b],[c,d]] solves
///   ad - bc = 1/16,  a + d = 4/16,  1 - b^2 - c^2 + 2ad = 6/16,  c = -b.
/// Branch 0 selects a = 1/2, b = -sqrt(3)/4. The result is half-band and
/// positive semidefinite on the unit circle.
LaurentMatrix solve_simple_product_filter(const SimpleDesignParams& params);

}  // namespace mw
