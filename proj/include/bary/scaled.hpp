#pragma once

// Running products with an explicit power-of-two exponent, for quantities
// whose intermediates wander far outside double range while the final value
// is ordinary (node-difference products, unnormalized weights).

#include <cmath>

#include "bary/ext_real.hpp"

namespace bary {

struct ScaledDouble {
  double sig = 1.0;
  long exp = 0;

  void normalize() {
    double a = std::fabs(sig);
    if (a > 0x1p500 || (a < 0x1p-500 && a != 0.0)) {
      int e;
      sig = std::frexp(sig, &e);
      exp += e;
    }
  }
  void mul(double f) {
    sig *= f;
    normalize();
  }
  void div(double f) {
    sig /= f;
    normalize();
  }
  // May overflow or underflow honestly if the represented value does.
  double value() const { return std::ldexp(sig, static_cast<int>(exp)); }
};

struct ScaledExt {
  ExtReal sig{1.0};
  long exp = 0;

  void normalize() {
    double a = std::fabs(sig.hi);
    if (a > 0x1p500 || (a < 0x1p-500 && a != 0.0)) {
      int e;
      std::frexp(sig.hi, &e);
      sig.hi = std::ldexp(sig.hi, -e);
      sig.lo = std::ldexp(sig.lo, -e);
      exp += e;
    }
  }
  void mul(ExtReal f) {
    sig *= f;
    normalize();
  }
  void div(ExtReal f) {
    sig /= f;
    normalize();
  }
  ExtReal value() const {
    int e = static_cast<int>(exp);
    return {std::ldexp(sig.hi, e), std::ldexp(sig.lo, e)};
  }
};

}  // namespace bary
