#pragma once

// Barycentric evaluation of the interpolating polynomial, in the two
// classical forms. The "first" (modified Lagrange) form multiplies the node
// polynomial back in; the "second" (true barycentric) form is the ratio of
// two sums and needs no product at all.
//
// Evaluator objects hoist all per-grid work (weight * value products, copies)
// so that operator() is the bare per-point loop; the free functions are
// one-shot conveniences on top of them.

#include <span>
#include <vector>

#include "bary/ext_real.hpp"
#include "bary/grid.hpp"

namespace bary {

enum class FormulaKind { first, second };

// p(t) = 1/2 * prod_k [2 (t - x_k)] * sum_k w_k y_k / (t - x_k), with w the
// normalized weights (lambda * 2^-n) and the product carried as significand
// plus exponent, so no intermediate over/underflow for any practical n.
class FirstFormulaEvaluator {
 public:
  FirstFormulaEvaluator(std::span<const double> nodes, std::span<const double> y,
                        const WeightVector& w);
  double operator()(double t) const;

 private:
  std::vector<double> x_, y_, wy_;
};

// q(t) = sum_k [w_k y_k / (t - x_k)] / sum_k [w_k / (t - x_k)]; any common
// scaling of w cancels, so either weight kind is accepted.
class SecondFormulaEvaluator {
 public:
  SecondFormulaEvaluator(std::span<const double> nodes, std::span<const double> y,
                         const WeightVector& w);
  double operator()(double t) const;

 private:
  std::vector<double> x_, y_, w_;
};

// The same two algorithms carried in pair precision. Nodes may be exact pair
// values (e.g. base + offset reconstructions); y and w stay doubles and all
// derived quantities (w_k y_k, differences) are formed exactly, so the result
// is the formula's value on those inputs to ~2^-100.
class FirstFormulaEvaluatorExt {
 public:
  FirstFormulaEvaluatorExt(std::span<const ExtReal> nodes, std::span<const double> y,
                           const WeightVector& w);
  ExtReal operator()(ExtReal t) const;
  ExtReal operator()(double t) const { return (*this)(ExtReal(t)); }

 private:
  std::vector<ExtReal> x_, wy_;
  std::vector<double> y_;
};

class SecondFormulaEvaluatorExt {
 public:
  SecondFormulaEvaluatorExt(std::span<const ExtReal> nodes, std::span<const double> y,
                            const WeightVector& w);
  ExtReal operator()(ExtReal t) const;
  ExtReal operator()(double t) const { return (*this)(ExtReal(t)); }

 private:
  std::vector<ExtReal> x_;
  std::vector<double> y_, w_;
};

double first_formula_eval(double t, const Grid& g, std::span<const double> y,
                          const WeightVector& w);
double second_formula_eval(double t, const Grid& g, std::span<const double> y,
                           const WeightVector& w);

// All n+1 basis values l_j(t) through the weight ratio; exact node hits give
// the unit vector.
std::vector<double> lagrange_basis_at(double t, std::span<const double> nodes,
                                      std::span<const double> weights);

// Lower estimate of the Lebesgue constant max_t sum |l_j(t)|, sampled at
// samples_per_interval left-endpoint offsets per node interval (nested under
// doubling) plus the representable neighbours of every node.
double lebesgue_estimate(std::span<const double> nodes, int samples_per_interval = 32);

// Lower estimate of max over t and k of |l_k(t) (t - x_k)|, which reduces to
// max_k |w_k| / |sum_j w_j / (t - x_j)| on the same sample set.
double rho_estimate(std::span<const double> nodes, int samples_per_interval = 32);

}  // namespace bary
