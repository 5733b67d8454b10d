#include "bary/eval.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bary/scaled.hpp"

namespace bary {

namespace {

void check_sizes(size_t nodes, size_t y, size_t w, const char* who) {
  if (nodes != y || nodes != w || nodes < 2)
    throw std::invalid_argument(std::string(who) + ": nodes, values, weights sizes disagree");
}

}  // namespace

FirstFormulaEvaluator::FirstFormulaEvaluator(std::span<const double> nodes,
                                             std::span<const double> y,
                                             const WeightVector& w)
    : x_(nodes.begin(), nodes.end()), y_(y.begin(), y.end()) {
  check_sizes(nodes.size(), y.size(), w.values.size(), "FirstFormulaEvaluator");
  if (w.kind != WeightKind::normalized_lambda)
    throw std::invalid_argument(
        "FirstFormulaEvaluator: needs normalized weights (the product form is "
        "not scale-invariant)");
  wy_.resize(x_.size());
  for (size_t k = 0; k < x_.size(); ++k) wy_[k] = w.values[k] * y_[k];
}

double FirstFormulaEvaluator::operator()(double t) const {
  double sig = 1.0;
  long e = 0;
  double sum = 0.0;
  size_t m = x_.size();
  for (size_t k = 0; k < m; ++k) {
    double d = t - x_[k];
    if (d == 0.0) return y_[k];
    sig *= 2.0 * d;
    double a = std::fabs(sig);
    if (a > 0x1p500 || a < 0x1p-500) {
      int ee;
      sig = std::frexp(sig, &ee);
      e += ee;
    }
    sum += wy_[k] / d;
  }
  int es;
  double ms = std::frexp(sum, &es);  // passes inf/nan through untouched
  return std::ldexp(0.5 * sig * ms, static_cast<int>(e) + es);
}

SecondFormulaEvaluator::SecondFormulaEvaluator(std::span<const double> nodes,
                                               std::span<const double> y,
                                               const WeightVector& w)
    : x_(nodes.begin(), nodes.end()), y_(y.begin(), y.end()),
      w_(w.values.begin(), w.values.end()) {
  check_sizes(nodes.size(), y.size(), w.values.size(), "SecondFormulaEvaluator");
}

double SecondFormulaEvaluator::operator()(double t) const {
  double num = 0.0, den = 0.0;
  size_t m = x_.size();
  for (size_t k = 0; k < m; ++k) {
    double d = t - x_[k];
    if (d == 0.0) return y_[k];
    double q = w_[k] / d;
    num += q * y_[k];
    den += q;
  }
  return num / den;
}

FirstFormulaEvaluatorExt::FirstFormulaEvaluatorExt(std::span<const ExtReal> nodes,
                                                   std::span<const double> y,
                                                   const WeightVector& w)
    : x_(nodes.begin(), nodes.end()), y_(y.begin(), y.end()) {
  check_sizes(nodes.size(), y.size(), w.values.size(), "FirstFormulaEvaluatorExt");
  if (w.kind != WeightKind::normalized_lambda)
    throw std::invalid_argument("FirstFormulaEvaluatorExt: needs normalized weights");
  wy_.resize(x_.size());
  for (size_t k = 0; k < x_.size(); ++k) wy_[k] = two_prod(w.values[k], y_[k]);
}

ExtReal FirstFormulaEvaluatorExt::operator()(ExtReal t) const {
  ScaledExt prod;
  ExtReal sum(0.0);
  size_t m = x_.size();
  for (size_t k = 0; k < m; ++k) {
    ExtReal d = t - x_[k];
    if (d.hi == 0.0 && d.lo == 0.0) return ExtReal(y_[k]);
    prod.mul({2.0 * d.hi, 2.0 * d.lo});
    sum += wy_[k] / d;
  }
  prod.mul(sum);
  prod.mul(ExtReal(0.5));
  return prod.value();
}

SecondFormulaEvaluatorExt::SecondFormulaEvaluatorExt(std::span<const ExtReal> nodes,
                                                     std::span<const double> y,
                                                     const WeightVector& w)
    : x_(nodes.begin(), nodes.end()), y_(y.begin(), y.end()),
      w_(w.values.begin(), w.values.end()) {
  check_sizes(nodes.size(), y.size(), w.values.size(), "SecondFormulaEvaluatorExt");
}

ExtReal SecondFormulaEvaluatorExt::operator()(ExtReal t) const {
  ExtReal num(0.0), den(0.0);
  size_t m = x_.size();
  for (size_t k = 0; k < m; ++k) {
    ExtReal d = t - x_[k];
    if (d.hi == 0.0 && d.lo == 0.0) return ExtReal(y_[k]);
    ExtReal q = ExtReal(w_[k]) / d;
    num += q * ExtReal(y_[k]);
    den += q;
  }
  return num / den;
}

double first_formula_eval(double t, const Grid& g, std::span<const double> y,
                          const WeightVector& w) {
  return FirstFormulaEvaluator(g.nodes, y, w)(t);
}

double second_formula_eval(double t, const Grid& g, std::span<const double> y,
                           const WeightVector& w) {
  return SecondFormulaEvaluator(g.nodes, y, w)(t);
}

std::vector<double> lagrange_basis_at(double t, std::span<const double> nodes,
                                      std::span<const double> weights) {
  if (nodes.size() != weights.size() || nodes.size() < 2)
    throw std::invalid_argument("lagrange_basis_at: nodes/weights sizes disagree");
  size_t m = nodes.size();
  std::vector<double> q(m);
  double s = 0.0;
  for (size_t k = 0; k < m; ++k) {
    double d = t - nodes[k];
    if (d == 0.0) {
      std::vector<double> unit(m, 0.0);
      unit[k] = 1.0;
      return unit;
    }
    q[k] = weights[k] / d;
    s += q[k];
  }
  for (double& v : q) v /= s;
  return q;
}

namespace {

// Shared sample sweep: left-endpoint offsets j/spi inside every interval
// (nested when spi doubles) plus each node's representable neighbours.
template <typename Fn>
void sweep_samples(std::span<const double> nodes, int spi, Fn&& visit) {
  size_t m = nodes.size();
  for (size_t i = 0; i + 1 < m; ++i) {
    double a = nodes[i], b = nodes[i + 1];
    double h = b - a;
    for (int j = 1; j < spi; ++j) {
      double t = a + h * (double(j) / double(spi));
      if (t > a && t < b) visit(t);
    }
    visit(std::nextafter(a, b));
    visit(std::nextafter(b, a));
  }
}

}  // namespace

double lebesgue_estimate(std::span<const double> nodes, int samples_per_interval) {
  if (samples_per_interval < 1)
    throw std::invalid_argument("lebesgue_estimate: samples_per_interval < 1");
  WeightVector w = normalized_lambda(nodes);
  size_t m = nodes.size();
  double best = 1.0;  // the value at every node
  sweep_samples(nodes, samples_per_interval, [&](double t) {
    double s = 0.0, abs_s = 0.0;
    for (size_t k = 0; k < m; ++k) {
      double q = w.values[k] / (t - nodes[k]);
      s += q;
      abs_s += std::fabs(q);
    }
    double v = abs_s / std::fabs(s);
    if (std::isfinite(v) && v > best) best = v;
  });
  return best;
}

double rho_estimate(std::span<const double> nodes, int samples_per_interval) {
  if (samples_per_interval < 1)
    throw std::invalid_argument("rho_estimate: samples_per_interval < 1");
  WeightVector w = normalized_lambda(nodes);
  size_t m = nodes.size();
  double wmax = 0.0;
  for (double v : w.values) wmax = std::max(wmax, std::fabs(v));
  double best = 0.0;
  sweep_samples(nodes, samples_per_interval, [&](double t) {
    double s = 0.0;
    for (size_t k = 0; k < m; ++k) s += w.values[k] / (t - nodes[k]);
    double v = wmax / std::fabs(s);
    if (std::isfinite(v) && v > best) best = v;
  });
  return best;
}

}  // namespace bary
