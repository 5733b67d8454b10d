#pragma once

// Experiment driver: the clustered point sets the error tables are measured
// on, the three-way error split per point (input rounding vs evaluation vs
// total), timing, and the CSV emitters behind the command-line tool.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "bary/binned.hpp"
#include "bary/error_model.hpp"
#include "bary/eval.hpp"
#include "bary/ext_real.hpp"
#include "bary/grid.hpp"

namespace bary {

enum class Anchor { left_end, center };  // intervals hug -1 or the middle

struct TestSet {
  Anchor anchor = Anchor::left_end;
  int n = 0;
  int interval_count = 0;
  int succ_per_interval = 0, pred_per_interval = 0, equi_per_interval = 0;
  std::vector<double> points;  // ascending within each interval block
};

// 100 intervals (x_k, x_{k+1}); anchor left_end takes k = 0..99, anchor
// center takes n/2 - 100 <= k < n/2. Per interval: the adjacent
// representable successors of x_k, predecessors of x_{k+1}, and equally
// spaced interior points, 200/200/600 at divisor 1. Subnormal points (the
// neighbours of an exact zero node) are dropped.
TestSet build_test_set(Anchor anchor, int n, int scale_divisor = 10);

// The measured functions, all cos(omega t). Step I (approximation) error is
// negligible only once the node count clears the frequency, so requests
// under min_nodes are refused unless explicitly allowed.
struct FuncSpec {
  std::string name;
  double omega = 1.0;
  int min_nodes = 0;  // smallest n+1 that keeps Step I out of the picture
};

const FuncSpec* find_func(const std::string& name);
const std::vector<FuncSpec>& func_registry();
double func_eval(const FuncSpec& f, double t);
ExtReal func_eval_ext(const FuncSpec& f, ExtReal t);
bool step1_critical(const FuncSpec& f, int n);

struct step1_refused : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NodeMode {
  const BinLayout* layout = nullptr;  // nullptr = usual rounding
};

struct ErrorReport {
  FormulaKind formula = FormulaKind::first;
  int bins = 0;  // 0 = usual rounding
  int n = 0;
  std::string func;
  std::vector<double> t, stepII, stepIII, overall;
  double max_stepII = 0, mean_stepII = 0;
  double max_stepIII = 0, mean_stepIII = 0;
  double max_overall = 0, mean_overall = 0;
  // max over points of overall - stepII - stepIII (triangle slack, ~0)
  double cross_slack = 0;
  double mean_ratio = 0;  // mean_stepII / mean_stepIII
};

// Per point t: stepII = |formula in pair precision on the rounded inputs
// minus f in pair precision|, stepIII = |working-precision formula minus the
// pair-precision formula on the same inputs|, overall = |working-precision
// formula minus f|. Inputs: rounded nodes (or binned offsets), y_k rounded
// from f at the reconstructed node, first-formula weights rounded once from
// the exact grid, simplified alternating weights for the second formula.
ErrorReport measure_errors(FormulaKind formula, NodeMode mode, int n,
                           const FuncSpec& f, const TestSet& set,
                           bool allow_step1 = false, int threads = 1);

struct TimingRecord {
  std::vector<double> samples_ns_per_point;
  double median_ns_per_point = 0.0;
};

// Process-CPU time per point, median over `repeats` passes after one
// untimed warmup pass.
TimingRecord bench_timing(FormulaKind formula, NodeMode mode, int n,
                          const TestSet& set, int repeats = 5);

// CSV emitters; %.17g throughout so every double round-trips.
void write_error_csv(std::ostream& os, const ErrorReport& rep);
void write_zstats_csv(std::ostream& os, const ZVector& zv);
void write_epoly_csv(std::ostream& os, const ErrorPolyContext& ctx,
                     const std::vector<double>& ts);
void write_bn_csv(std::ostream& os, int n, double bn);
struct BenchRow {
  std::string name;
  double median_ns_per_point = 0.0;
  double normalized = 0.0;
};
void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);

}  // namespace bary
