#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <functional>
#include <memory>
#include <ostream>
#include <thread>

#include "bary/harness.hpp"

namespace bary {

namespace {

struct Evaluators {
  std::function<double(double)> dbl;
  std::function<ExtReal(ExtReal)> ext;
};

// Rounded inputs shared by both precisions: grid coordinates, y sampled
// from f at the reconstructed nodes, weights per formula.
Evaluators make_evaluators(FormulaKind formula, NodeMode mode, int n,
                           const FuncSpec& f, std::vector<double>& y_out) {
  WeightVector w = formula == FormulaKind::first ? normalized_lambda_closed(n)
                                                 : salzer_weights(n);
  Evaluators ev;
  if (mode.layout == nullptr) {
    Grid g = gen_nodes_usual(n);
    auto xe = std::make_shared<std::vector<ExtReal>>();
    xe->reserve(n + 1);
    for (double v : g.nodes) xe->push_back(ExtReal(v));
    auto y = std::make_shared<std::vector<double>>(n + 1);
    for (int k = 0; k <= n; ++k)
      (*y)[k] = to_double(func_eval_ext(f, (*xe)[k]));
    y_out = *y;
    if (formula == FormulaKind::first) {
      auto d = std::make_shared<FirstFormulaEvaluator>(g.nodes, *y, w);
      auto e = std::make_shared<FirstFormulaEvaluatorExt>(*xe, *y, w);
      ev.dbl = [d, g = std::make_shared<Grid>(std::move(g)), y](double t) {
        return (*d)(t);
      };
      ev.ext = [e, xe, y](ExtReal t) { return (*e)(t); };
    } else {
      auto d = std::make_shared<SecondFormulaEvaluator>(g.nodes, *y, w);
      auto e = std::make_shared<SecondFormulaEvaluatorExt>(*xe, *y, w);
      ev.dbl = [d, g = std::make_shared<Grid>(std::move(g)), y](double t) {
        return (*d)(t);
      };
      ev.ext = [e, xe, y](ExtReal t) { return (*e)(t); };
    }
  } else {
    auto bg = std::make_shared<BinnedGrid>(gen_binned_nodes(n, *mode.layout));
    auto xe = std::make_shared<std::vector<ExtReal>>(
        reconstructed_nodes_ext(*bg));
    auto y = std::make_shared<std::vector<double>>(n + 1);
    for (int k = 0; k <= n; ++k)
      (*y)[k] = to_double(func_eval_ext(f, (*xe)[k]));
    y_out = *y;
    if (formula == FormulaKind::first) {
      auto d = std::make_shared<BinnedFirstEvaluator>(*bg, *y, w);
      auto e = std::make_shared<FirstFormulaEvaluatorExt>(*xe, *y, w);
      ev.dbl = [d, bg, y](double t) { return (*d)(t); };
      ev.ext = [e, xe, y](ExtReal t) { return (*e)(t); };
    } else {
      auto d = std::make_shared<BinnedSecondEvaluator>(*bg, *y, w);
      auto e = std::make_shared<SecondFormulaEvaluatorExt>(*xe, *y, w);
      ev.dbl = [d, bg, y](double t) { return (*d)(t); };
      ev.ext = [e, xe, y](ExtReal t) { return (*e)(t); };
    }
  }
  return ev;
}

}  // namespace

ErrorReport measure_errors(FormulaKind formula, NodeMode mode, int n,
                           const FuncSpec& f, const TestSet& set,
                           bool allow_step1, int threads) {
  if (set.n != n)
    throw std::invalid_argument("measure_errors: set built for another n");
  if (step1_critical(f, n) && !allow_step1)
    throw step1_refused(f.name + " at " + std::to_string(n + 1) +
                        " nodes: the approximation error itself dominates; "
                        "rerun with --allow-step1 to measure anyway");

  ErrorReport rep;
  rep.formula = formula;
  rep.bins = mode.layout ? mode.layout->bins() : 0;
  rep.n = n;
  rep.func = f.name;

  std::vector<double> y;
  Evaluators ev = make_evaluators(formula, mode, n, f, y);

  const size_t m = set.points.size();
  rep.t = set.points;
  rep.stepII.resize(m);
  rep.stepIII.resize(m);
  rep.overall.resize(m);

  auto work = [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i) {
      double t = set.points[i];
      ExtReal fe = func_eval_ext(f, ExtReal(t));
      ExtReal ve = ev.ext(ExtReal(t));
      double vd = ev.dbl(t);
      rep.stepII[i] = std::fabs(to_double(ve - fe));
      rep.stepIII[i] = std::fabs(to_double(ExtReal(vd) - ve));
      rep.overall[i] = std::fabs(to_double(ExtReal(vd) - fe));
    }
  };
  int nt = std::max(1, threads);
  if (nt == 1 || m < 2 * static_cast<size_t>(nt)) {
    work(0, m);
  } else {
    std::vector<std::thread> pool;
    size_t chunk = (m + nt - 1) / nt;
    for (int c = 0; c < nt; ++c) {
      size_t lo = c * chunk, hi = std::min(m, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // fixed index order: identical aggregates for any thread count
  for (size_t i = 0; i < m; ++i) {
    rep.max_stepII = std::max(rep.max_stepII, rep.stepII[i]);
    rep.max_stepIII = std::max(rep.max_stepIII, rep.stepIII[i]);
    rep.max_overall = std::max(rep.max_overall, rep.overall[i]);
    rep.mean_stepII += rep.stepII[i];
    rep.mean_stepIII += rep.stepIII[i];
    rep.mean_overall += rep.overall[i];
    rep.cross_slack = std::max(
        rep.cross_slack, rep.overall[i] - rep.stepII[i] - rep.stepIII[i]);
  }
  if (m > 0) {
    rep.mean_stepII /= static_cast<double>(m);
    rep.mean_stepIII /= static_cast<double>(m);
    rep.mean_overall /= static_cast<double>(m);
  }
  rep.mean_ratio =
      rep.mean_stepIII > 0.0 ? rep.mean_stepII / rep.mean_stepIII : 0.0;
  return rep;
}

namespace {

double cpu_seconds() {
  timespec ts;
  clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * ts.tv_nsec;
}

}  // namespace

TimingRecord bench_timing(FormulaKind formula, NodeMode mode, int n,
                          const TestSet& set, int repeats) {
  if (repeats < 5) throw std::domain_error("bench_timing: repeats >= 5");
  std::vector<double> y;
  // timing wants only the working-precision path; cos1 keeps setup cheap
  Evaluators ev = make_evaluators(formula, mode, n, *find_func("cos1"), y);
  volatile double sink = 0.0;
  double warm = 0.0;
  for (double t : set.points) warm += ev.dbl(t);  // warmup, untimed
  sink = warm;

  TimingRecord rec;
  for (int r = 0; r < repeats; ++r) {
    double t0 = cpu_seconds();
    double acc = 0.0;
    for (double t : set.points) acc += ev.dbl(t);
    double t1 = cpu_seconds();
    sink = sink + acc;
    rec.samples_ns_per_point.push_back((t1 - t0) * 1e9 /
                                       static_cast<double>(set.points.size()));
  }
  std::vector<double> sorted = rec.samples_ns_per_point;
  std::sort(sorted.begin(), sorted.end());
  rec.median_ns_per_point = sorted[sorted.size() / 2];
  (void)sink;
  return rec;
}

namespace {

void put(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace

void write_error_csv(std::ostream& os, const ErrorReport& rep) {
  os << "t,stepII,stepIII,overall\n";
  for (size_t i = 0; i < rep.t.size(); ++i) {
    put(os, rep.t[i]);
    os << ',';
    put(os, rep.stepII[i]);
    os << ',';
    put(os, rep.stepIII[i]);
    os << ',';
    put(os, rep.overall[i]);
    os << '\n';
  }
}

void write_zstats_csv(std::ostream& os, const ZVector& zv) {
  os << "k,z_k\n";
  for (size_t k = 0; k < zv.z.size(); ++k) {
    os << k << ',';
    put(os, to_double(zv.z[k]));
    os << '\n';
  }
}

void write_epoly_csv(std::ostream& os, const ErrorPolyContext& ctx,
                     const std::vector<double>& ts) {
  os << "t,E,L,Q\n";
  for (double t : ts) {
    auto p = ctx.smooth_factor(t);
    put(os, t);
    os << ',';
    put(os, p.E);
    os << ',';
    put(os, p.L);
    os << ',';
    put(os, p.Q);  // skipped points carry nan
    os << '\n';
  }
}

void write_bn_csv(std::ostream& os, int n, double bn) {
  os << "n_plus_1,bn\n" << (n + 1) << ',';
  put(os, bn);
  os << '\n';
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "case,median_ns_per_point,normalized\n";
  for (const BenchRow& r : rows) {
    os << r.name << ',';
    put(os, r.median_ns_per_point);
    os << ',';
    put(os, r.normalized);
    os << '\n';
  }
}

}  // namespace bary
