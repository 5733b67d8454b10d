#include "bary/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bary/scaled.hpp"

namespace bary {

Grid gen_nodes_usual(int n) {
  if (n < 1) throw std::domain_error("gen_nodes_usual: need degree n >= 1");
  Grid g;
  g.n = n;
  g.nodes.resize(n + 1);
  for (int k = 0; 2 * k < n; ++k) {
    double x = std::sin(std::numbers::pi * (2.0 * k - n) / (2.0 * n));
    g.nodes[k] = x;
    g.nodes[n - k] = -x;
  }
  if (n % 2 == 0) g.nodes[n / 2] = 0.0;
  g.nodes[0] = -1.0;
  g.nodes[n] = 1.0;
  for (int k = 0; k < n; ++k)
    if (!(g.nodes[k] < g.nodes[k + 1]))
      throw std::runtime_error("gen_nodes_usual: nodes not strictly increasing");
  return g;
}

std::vector<ExtReal> gen_nodes_ext(int n) {
  if (n < 1) throw std::domain_error("gen_nodes_ext: need degree n >= 1");
  std::vector<ExtReal> x(n + 1);
  // k = 0 would hand ext_sincos an argument of exactly -pi/2, whose sine is
  // pinned to -1 below; interior arguments stay clear of the half-pi grid.
  for (int k = 1; 2 * k < n; ++k) {
    ExtReal arg = ext_pi() * ExtReal(2.0 * k - n) / ExtReal(2.0 * n);
    ExtReal v = ext_sincos(arg).sin;
    x[k] = v;
    x[n - k] = -v;
  }
  if (n % 2 == 0) x[n / 2] = ExtReal(0.0);
  x[0] = ExtReal(-1.0);
  x[n] = ExtReal(1.0);
  for (int k = 0; k < n; ++k)
    if (!(x[k] < x[k + 1]))
      throw std::runtime_error("gen_nodes_ext: nodes not strictly increasing");
  return x;
}

WeightVector normalized_lambda(std::span<const double> nodes) {
  if (nodes.size() < 2) throw std::invalid_argument("normalized_lambda: need >= 2 nodes");
  size_t m = nodes.size();
  WeightVector w;
  w.kind = WeightKind::normalized_lambda;
  w.values.resize(m);
  for (size_t k = 0; k < m; ++k) {
    ScaledDouble denom;
    for (size_t j = 0; j < m; ++j) {
      if (j == k) continue;
      double d = 2.0 * (nodes[k] - nodes[j]);
      if (d == 0.0) throw std::invalid_argument("normalized_lambda: repeated node");
      denom.mul(d);
    }
    ScaledDouble v{1.0 / denom.sig, -denom.exp};
    double out = v.value();
    if (!std::isfinite(out) || out == 0.0)
      throw std::range_error("normalized_lambda: weight outside double range");
    w.values[k] = out;
  }
  return w;
}

std::vector<ExtReal> normalized_lambda_ext(std::span<const ExtReal> nodes) {
  if (nodes.size() < 2) throw std::invalid_argument("normalized_lambda_ext: need >= 2 nodes");
  size_t m = nodes.size();
  std::vector<ExtReal> w(m);
  const ExtReal two(2.0);
  for (size_t k = 0; k < m; ++k) {
    ScaledExt denom;
    for (size_t j = 0; j < m; ++j) {
      if (j == k) continue;
      ExtReal d = two * (nodes[k] - nodes[j]);
      if (d.hi == 0.0) throw std::invalid_argument("normalized_lambda_ext: repeated node");
      denom.mul(d);
    }
    ScaledExt v;
    v.sig = ExtReal(1.0) / denom.sig;
    v.exp = -denom.exp;
    w[k] = v.value();
    if (!std::isfinite(w[k].hi) || w[k].hi == 0.0)
      throw std::range_error("normalized_lambda_ext: weight outside double range");
  }
  return w;
}

WeightVector normalized_lambda_closed(int n) {
  if (n < 1) throw std::domain_error("normalized_lambda_closed: need degree n >= 1");
  WeightVector w;
  w.kind = WeightKind::normalized_lambda;
  w.values.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    double delta = (k == 0 || k == n) ? 0.5 : 1.0;
    double v = delta / (2.0 * n);
    // lambda_k carries the sign of prod (x_k - x_j): n - k negative factors.
    w.values[k] = ((n - k) % 2 == 0) ? v : -v;
  }
  return w;
}

WeightVector salzer_weights(int n) {
  if (n < 1) throw std::domain_error("salzer_weights: need degree n >= 1");
  WeightVector w;
  w.kind = WeightKind::salzer_simplified;
  w.values.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    double delta = (k == 0 || k == n) ? 0.5 : 1.0;
    w.values[k] = (k % 2 == 0) ? delta : -delta;
  }
  return w;
}

}  // namespace bary
