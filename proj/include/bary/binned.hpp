#pragma once

// Binned node storage: each node lives in a bin with a base b and keeps only
// its offset u from that base, chosen so that
//   (a) u_t = t - b_l is exact for any point t in bin l (Sterbenz, or b = 0),
//   (b) differences of bases are exact in double, and
//   (c) offsets carry near-full relative accuracy, unlike the nodes
//       themselves near the interval ends.
// A point-node difference is then evaluated as (b_l - b_m) + (u_t - u_k).

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bary/eval.hpp"
#include "bary/ext_real.hpp"
#include "bary/grid.hpp"

namespace bary {

struct BinLayout {
  // bins() bins: bin i = [boundaries[i], boundaries[i+1]), the last closed.
  std::vector<double> boundaries;
  std::vector<double> bases;  // one per bin; 0 or sums of two powers of two

  int bins() const { return static_cast<int>(bases.size()); }
};

// {[-1,-1/2) base -1, [-1/2,1/2) base 0, [1/2,1] base 1}.
BinLayout layout_three();

// Dyadic layout with 4*levels - 1 bins: outer bins of width 2^-levels at
// the endpoints, geometrically shrinking bins [2^-k - 1, 2^(1-k) - 1) and
// [-2^-k, -2^-(k+1)) and their mirrors, one central bin around 0. Bases sit
// on the end of each bin nearer the hard endpoint (the left end on the left
// half), mirrored on the right. levels in [2, 40].
BinLayout layout_dyadic(int levels);

struct BinnedGrid {
  BinLayout layout;
  int n = 0;
  std::vector<int> bin_of;     // node k lives in bin bin_of[k]; non-decreasing
  std::vector<double> u;       // working-precision offsets
  std::vector<ExtReal> u_ext;  // reference offsets, exact node minus base
};

// Offsets come straight from the trigonometric formulas: 2 sin^2(k pi / 2n)
// against base -1, the plain sine formula against base 0, mirrored against
// base +1; offsets against interior dyadic bases are the pair-precision
// offset rounded once. Never the rounded node minus the base.
BinnedGrid gen_binned_nodes(int n, const BinLayout& layout);

struct Located {
  int bin = 0;
  double offset = 0.0;  // t - bases[bin], exact
};

// Throws std::domain_error for t outside [-1, 1].
Located locate_bin(double t, const BinLayout& layout);

// (b_l - b_m) + (u_t - u_k) in working precision.
double binned_diff(const Located& p, const BinnedGrid& g, int k);

// base + offset in pair precision (exact) per node.
std::vector<ExtReal> reconstructed_nodes_ext(const BinnedGrid& g);

// Nearest double to the reconstructed node.
double reconstructed_node(const BinnedGrid& g, int k);

// The two barycentric forms on binned nodes. Same accumulation order as the
// plain evaluators; the base difference is hoisted out of each bin's run of
// nodes, so the per-node cost is one extra addition.
class BinnedFirstEvaluator {
 public:
  BinnedFirstEvaluator(const BinnedGrid& g, std::span<const double> y,
                       const WeightVector& w);
  double operator()(double t) const;

 private:
  struct Run {
    int begin, end;
    double base;
  };
  BinLayout layout_;
  std::vector<Run> runs_;
  std::vector<double> u_, y_, wy_;
};

class BinnedSecondEvaluator {
 public:
  BinnedSecondEvaluator(const BinnedGrid& g, std::span<const double> y,
                        const WeightVector& w);
  double operator()(double t) const;

 private:
  struct Run {
    int begin, end;
    double base;
  };
  BinLayout layout_;
  std::vector<Run> runs_;
  std::vector<double> u_, y_, w_;
};

double eval_binned(FormulaKind f, double t, const BinnedGrid& g,
                   std::span<const double> y, const WeightVector& w);

struct LayoutCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Structural checks: ordered boundaries covering [-1,1], exact pairwise base
// differences, Sterbenz coverage of every nonzero-base bin, and (with a grid)
// offset accuracy and in-bin reconstruction of every node.
std::vector<LayoutCheck> verify_layout(const BinLayout& layout,
                                       const BinnedGrid* grid = nullptr);

// Versioned, binary-exact text serialization (hex float literals).
void write_binned_grid(std::ostream& os, const BinnedGrid& g);
BinnedGrid read_binned_grid(std::istream& is);

}  // namespace bary
