#include "bary/ext_real.hpp"

#include <cfenv>
#include <cmath>

namespace bary {

namespace {

// pi/2 split into four doubles; the sum matches pi/2 to ~2.8e-66.
constexpr double kHalfPi[4] = {0x1.921fb54442d18p+0, 0x1.1a62633145c07p-54,
                               -0x1.f1976b7ed8fbcp-110, 0x1.4cf98e804177dp-164};
constexpr double kTwoOverPi = 0x1.45f306dc9c883p-1;

// Taylor series on the reduced range |y| <= ~0.79. Terms shrink by at least
// y^2/6 per step, so the loop is short and the accumulated rounding stays
// near u^2 of the result.
ExtReal sin_core(ExtReal y) {
  ExtReal y2 = y * y;
  ExtReal sum = y;
  ExtReal term = y;
  for (int m = 1; m <= 30; ++m) {
    term = term * y2 / ExtReal(-double(2 * m) * double(2 * m + 1));
    sum += term;
    if (std::fabs(term.hi) <= 0x1p-120 * std::fabs(sum.hi)) break;
  }
  return sum;
}

ExtReal cos_core(ExtReal y) {
  ExtReal y2 = y * y;
  ExtReal sum(1.0);
  ExtReal term(1.0);
  for (int m = 1; m <= 30; ++m) {
    term = term * y2 / ExtReal(-double(2 * m - 1) * double(2 * m));
    sum += term;
    if (std::fabs(term.hi) <= 0x1p-120 * std::fabs(sum.hi)) break;
  }
  return sum;
}

}  // namespace

ExtSinCos ext_sincos(ExtReal x) {
  if (!(std::fabs(x.hi) <= 1e6))
    throw std::domain_error("ext_sincos: |x| > 1e6 outside supported range");

  long long k = std::llround(x.hi * kTwoOverPi);
  ExtReal y = x;
  if (k != 0) {
    double kd = double(k);
    for (double part : kHalfPi) y = y - two_prod(kd, part);
    // The reduced argument keeps ~2^-62 relative headroom per unit of k;
    // closer to a multiple of pi/2 than that and the result digits would be
    // fabricated, so refuse.
    if (std::fabs(to_double(y)) < std::ldexp(std::fabs(kd), -62))
      throw std::domain_error("ext_sincos: argument reduction precision exhausted");
  }

  ExtReal s = sin_core(y);
  ExtReal c = cos_core(y);
  switch (((k % 4) + 4) % 4) {
    case 0: return {s, c};
    case 1: return {c, -s};
    case 2: return {-s, -c};
    default: return {-c, s};
  }
}

void assert_round_to_nearest() {
  if (std::fegetround() != FE_TONEAREST)
    throw std::runtime_error("FPU not in round-to-nearest mode");
  // Tie cases that distinguish nearest-even from the directed modes.
  volatile double one = 1.0;
  volatile double tie_down = 0x1p-53;        // 1 + 2^-53 ties to 1
  volatile double tie_up = 1.5 * 0x1p-52;    // 1 + 1.5*2^-52 ties to 1 + 2^-51
  volatile double a = one + tie_down;
  volatile double b = one + tie_up;
  volatile double c = -one - tie_down;
  if (a != 1.0 || b != 1.0 + 0x1p-51 || c != -1.0)
    throw std::runtime_error("FPU arithmetic is not round-to-nearest-even");
}

}  // namespace bary
