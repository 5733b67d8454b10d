#pragma once

// The machinery that explains WHY the formulas err the way they do: the
// node-difference ratios r_jk between an exact grid and a perturbed one, the
// relative weight errors z they induce, the error polynomial
// E(t) = P_yz - P_y P_z built on them, the per-center coefficients a_{k,j}
// whose closed-form LP maximum gives the Lipschitz bound b_n, and a suite
// that evaluates both sides of every inequality we rely on.
//
// Everything here runs in pair precision: the quantities are O(eps) and
// would drown in working-precision noise.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bary/binned.hpp"
#include "bary/ext_real.hpp"
#include "bary/grid.hpp"

namespace bary {

struct ZVector {
  int n = 0;
  std::vector<ExtReal> z;   // z_k = prod_{j != k} (1 + r_jk) - 1
  std::vector<ExtReal> s;   // s_k = sum_{j != k} r_jk
  std::vector<ExtReal> xi;  // xi_k = sum_{j != k} |r_jk|
  double norm_inf = 0.0, norm_1 = 0.0;  // of z
  double xi_max = 0.0;
  bool xi_all_below_one = true;  // the product sandwich needs xi_k < 1
};

// r_jk = (xp_k - xp_j)/(x_k - x_j) - 1 for j != k (r_kk = 0). x must be
// strictly increasing; xp is the perturbed copy of the same grid.
std::vector<ExtReal> r_row(std::span<const ExtReal> x,
                           std::span<const ExtReal> xp, int k);

// Full O(n^2) pass: products, sums, norms.
ZVector z_from_r(std::span<const ExtReal> x, std::span<const ExtReal> xp);

// Same z through the weight ratio lambda_k(x)/lambda_k(xp) - 1 with
// exponent-tracked products. Cross-check path; O(n^2), keep n modest.
std::vector<ExtReal> z_via_lambda_ratio(std::span<const ExtReal> x,
                                        std::span<const ExtReal> xp);

// Interpolation-side quantities for one perturbed grid xp with weights
// computed from xp in pair precision: P_y, P_z, E, the oscillating factor,
// the center coefficients, and the Lipschitz number b_n.
class ErrorPolyContext {
 public:
  ErrorPolyContext(std::span<const ExtReal> xp, std::span<const double> y,
                   const ZVector& zv);

  int n() const { return n_; }
  std::span<const ExtReal> nodes() const { return xp_; }
  std::span<const ExtReal> weights() const { return w_; }

  ExtReal interp_y(ExtReal t) const;  // interpolant of y at the grid
  ExtReal interp_z(ExtReal t) const;
  // E(t) = P_yz(t) - P_y(t) P_z(t); exactly zero at the nodes.
  ExtReal error_poly(ExtReal t) const;

  // 2^{n-1} prod(t - x_k) / sqrt(1 - t^2), carried as significand and
  // exponent. At exact Chebyshev points this is -sin(n arccos t), so its
  // magnitude stays near 1. |t| >= 1 throws.
  double osc_factor(double t) const;

  struct SmoothPoint {
    double E = 0.0, L = 0.0, Q = 0.0;
    bool skipped = false;  // |L| < 1e-6: Q meaningless there
  };
  SmoothPoint smooth_factor(double t) const;

  // center of [x_{k-1}, x_k], 1 <= k <= n, in pair precision
  ExtReal center(int k) const;
  // a_{k,j} = (z_j - P_z(c_k)) l_j(c_k) for the k-th center; sums to zero
  std::vector<ExtReal> akj_row(int k) const;
  // max over centers of sum_i (x_i - x_{i-1}) |sum_{j >= i} a_{k,j}|; O(n^2)
  double bn() const;

 private:
  struct Sums {
    ExtReal s0, sy, sz, syz;
    int hit = -1;
  };
  Sums accumulate(ExtReal t) const;

  int n_ = 0;
  std::vector<ExtReal> xp_, w_, z_;
  std::vector<double> xp_dbl_, y_;
};

struct LipschitzBounds {
  double lp_bound = 0.0;  // Lebesgue(nodes+centers) * max slope * b_n
  double A = 0.0;         // lip_const * rho * ||z||_1
  double B = 0.0;         // Lebesgue * ||z||_inf * sup|f - P_y|
};

LipschitzBounds lipschitz_bounds(std::span<const ExtReal> xp,
                                 std::span<const double> y, const ZVector& zv,
                                 double lip_const,
                                 const std::function<double(double)>& f);

struct ZStats {
  int n = 0;
  double norm_inf = 0.0, norm_1 = 0.0;
  double ratio = 0.0;              // norm_1 / (norm_inf ln^2 n)
  std::vector<double> window_std;  // sample std of z over a window of 32
  std::vector<double> model;       // u n^2 ln(k)/k on 2 <= k <= n/2, else 0
};

ZStats z_stats(const ZVector& zv);

struct BoundRecord {
  std::string name;
  double lhs = 0.0, rhs = 0.0;
  bool satisfied = false;
  std::string note;
};

struct BoundReport {
  int n = 0;
  std::string grid_name;
  double theta_inf = 0.0;  // node-wise (usual) or offset-wise (binned)
  std::vector<BoundRecord> records;
  bool all_satisfied() const;
};

// Builds the grid (usual rounding for layout == nullptr, binned otherwise),
// computes z, and evaluates both sides of every inequality the analysis
// uses. The dense-sampling records for the two formulas run for n <= 512;
// the O(n^2) records run at any n this machine can afford.
BoundReport bound_suite(int n, const BinLayout* layout = nullptr);

}  // namespace bary
