#include <cmath>
#include <stdexcept>

#include "bary/harness.hpp"

namespace bary {

TestSet build_test_set(Anchor anchor, int n, int scale_divisor) {
  if (scale_divisor < 1 || scale_divisor > 200)
    throw std::domain_error("build_test_set: scale divisor in [1, 200]");
  if (anchor == Anchor::left_end && n < 200)
    throw std::domain_error("build_test_set: left-end set needs n >= 200");
  if (anchor == Anchor::center && n < 400)
    throw std::domain_error("build_test_set: center set needs n >= 400");

  TestSet set;
  set.anchor = anchor;
  set.n = n;
  set.interval_count = 100;
  set.succ_per_interval = 200 / scale_divisor;
  set.pred_per_interval = 200 / scale_divisor;
  set.equi_per_interval = 600 / scale_divisor;

  Grid g = gen_nodes_usual(n);
  int first = anchor == Anchor::left_end ? 0 : n / 2 - 100;
  set.points.reserve(static_cast<size_t>(set.interval_count) *
                     (set.succ_per_interval + set.pred_per_interval +
                      set.equi_per_interval));
  auto keep = [&](double t) {
    if (std::fpclassify(t) != FP_SUBNORMAL) set.points.push_back(t);
  };
  for (int k = first; k < first + set.interval_count; ++k) {
    double a = g.nodes[k], b = g.nodes[k + 1];
    double t = a;
    for (int i = 0; i < set.succ_per_interval; ++i) {
      t = std::nextafter(t, 2.0);
      keep(t);
    }
    for (int i = 1; i <= set.equi_per_interval; ++i)
      keep(a + (b - a) * (static_cast<double>(i) /
                          (set.equi_per_interval + 1)));
    // predecessors of b, emitted in ascending order
    double pred[200];
    t = b;
    for (int i = 0; i < set.pred_per_interval; ++i) {
      t = std::nextafter(t, -2.0);
      pred[i] = t;
    }
    for (int i = set.pred_per_interval - 1; i >= 0; --i) keep(pred[i]);
  }
  return set;
}

const std::vector<FuncSpec>& func_registry() {
  // min_nodes = 2 omega: below that the approximation error itself is the
  // story and the input/evaluation split is mislabeled.
  static const std::vector<FuncSpec> reg = {
      {"cos1", 1.0, 0},
      {"cos100", 100.0, 200},
      {"cos1e4", 1.0e4, 20000},
      {"cos1e5", 1.0e5, 200000},
  };
  return reg;
}

const FuncSpec* find_func(const std::string& name) {
  for (const FuncSpec& f : func_registry())
    if (f.name == name) return &f;
  return nullptr;
}

double func_eval(const FuncSpec& f, double t) { return std::cos(f.omega * t); }

ExtReal func_eval_ext(const FuncSpec& f, ExtReal t) {
  return ext_sincos(ExtReal(f.omega) * t).cos;
}

bool step1_critical(const FuncSpec& f, int n) {
  return f.omega >= 100.0 && n + 1 < f.min_nodes;
}

}  // namespace bary
