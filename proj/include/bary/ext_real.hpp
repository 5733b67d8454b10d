#pragma once

// Double-double arithmetic: an ExtReal is an unevaluated sum hi + lo with
// hi = fl(hi + lo), so the pair carries roughly 106 significant bits.
// Requires round-to-nearest-even; call assert_round_to_nearest() once at
// startup before trusting any of this.

#include <cmath>
#include <stdexcept>
#include <string>

namespace bary {

struct ExtReal {
  double hi = 0.0;
  double lo = 0.0;

  ExtReal() = default;
  ExtReal(double h) : hi(h), lo(0.0) {}
  ExtReal(double h, double l) : hi(h), lo(l) {}
};

// s + e == a + b exactly, s = fl(a + b). Valid for any a, b.
inline ExtReal two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

// Same contract, needs |a| >= |b| (or a == 0).
inline ExtReal fast_two_sum(double a, double b) {
  double s = a + b;
  double e = b - (s - a);
  return {s, e};
}

// p + e == a * b exactly.
inline ExtReal two_prod(double a, double b) {
  double p = a * b;
  double e = std::fma(a, b, -p);
  return {p, e};
}

namespace detail {
[[noreturn]] inline void ext_range_fail(const char* op) {
  throw std::range_error(std::string("ExtReal overflow/underflow in ") + op);
}
inline void ext_check(double hi, const char* op) {
  if (!std::isfinite(hi)) ext_range_fail(op);
}
}  // namespace detail

// Relative error <= 3u^2 (u = 2^-53), comfortably under 2^-100.
inline ExtReal operator+(ExtReal a, ExtReal b) {
  ExtReal s = two_sum(a.hi, b.hi);
  ExtReal t = two_sum(a.lo, b.lo);
  double c = s.lo + t.hi;
  ExtReal v = fast_two_sum(s.hi, c);
  double w = t.lo + v.lo;
  ExtReal r = fast_two_sum(v.hi, w);
  detail::ext_check(r.hi, "add");
  return r;
}

inline ExtReal operator-(ExtReal a) { return {-a.hi, -a.lo}; }
inline ExtReal operator-(ExtReal a, ExtReal b) { return a + (-b); }

// Relative error <= 5u^2.
inline ExtReal operator*(ExtReal a, ExtReal b) {
  ExtReal p = two_prod(a.hi, b.hi);
  double t = a.hi * b.lo + a.lo * b.hi;
  ExtReal r = fast_two_sum(p.hi, p.lo + t);
  detail::ext_check(r.hi, "mul");
  return r;
}

// Working-precision quotient plus one correction step; relative error
// stays below 2^-98.
inline ExtReal operator/(ExtReal a, ExtReal b) {
  if (b.hi == 0.0) throw std::domain_error("ExtReal division by zero");
  double q1 = a.hi / b.hi;
  ExtReal p = two_prod(q1, b.hi);
  ExtReal r = a - ExtReal(p.hi, p.lo + q1 * b.lo);
  double q2 = (r.hi + r.lo) / b.hi;
  ExtReal q = fast_two_sum(q1, q2);
  detail::ext_check(q.hi, "div");
  return q;
}

inline ExtReal& operator+=(ExtReal& a, ExtReal b) { return a = a + b; }
inline ExtReal& operator-=(ExtReal& a, ExtReal b) { return a = a - b; }
inline ExtReal& operator*=(ExtReal& a, ExtReal b) { return a = a * b; }
inline ExtReal& operator/=(ExtReal& a, ExtReal b) { return a = a / b; }

inline bool operator==(ExtReal a, ExtReal b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(ExtReal a, ExtReal b) { return !(a == b); }
inline bool operator<(ExtReal a, ExtReal b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(ExtReal a, ExtReal b) { return b < a; }
inline bool operator<=(ExtReal a, ExtReal b) { return !(b < a); }
inline bool operator>=(ExtReal a, ExtReal b) { return !(a < b); }

inline ExtReal ext_abs(ExtReal a) { return a.hi < 0.0 ? -a : a; }

// hi is already the correctly rounded double value of the pair.
inline double to_double(ExtReal a) { return a.hi + a.lo; }

inline ExtReal ext_pi() { return {0x1.921fb54442d18p+1, 0x1.1a62633145c07p-53}; }

struct ExtSinCos {
  ExtReal sin;
  ExtReal cos;
};

// Simultaneous sin/cos with relative error <= 1e-28. Arguments are reduced
// against a four-double representation of pi/2, which keeps the reduction
// honest for |x| <= 1e6; larger |x|, or an x freakishly close to a multiple
// of pi/2, raises std::domain_error rather than returning damaged digits.
ExtSinCos ext_sincos(ExtReal x);

// Throws std::runtime_error unless the FPU rounds to nearest-even.
void assert_round_to_nearest();

}  // namespace bary
