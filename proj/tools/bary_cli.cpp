// Command-line front end: grids, weights, evaluation, the error split on
// the clustered point sets, and the analysis dumps, all as CSV.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "bary/harness.hpp"

using namespace bary;

namespace {

struct Options {
  int n = 999;
  std::string formula = "first";
  std::string bins = "0";
  std::string func = "cos100";
  std::string set = "Tm1";
  int scale = 10;
  std::string out;
  int threads = 1;
  bool allow_step1 = false;
  int repeats = 5;
  int samples = 2000;
  std::vector<double> ts;
};

FormulaKind formula_of(const std::string& s) {
  if (s == "first") return FormulaKind::first;
  if (s == "second") return FormulaKind::second;
  throw CLI::ValidationError("--formula", "must be first or second");
}

// "0" = usual rounding; "3" = three bins; "dyadic:<levels>"
std::optional<BinLayout> layout_of(const std::string& s) {
  if (s == "0") return std::nullopt;
  if (s == "3") return layout_three();
  if (s.rfind("dyadic:", 0) == 0) {
    int levels = std::stoi(s.substr(7));
    return layout_dyadic(levels);
  }
  throw CLI::ValidationError("--bins", "must be 0, 3, or dyadic:<levels>");
}

Anchor anchor_of(const std::string& s) {
  if (s == "Tm1") return Anchor::left_end;
  if (s == "T0") return Anchor::center;
  throw CLI::ValidationError("--set", "must be Tm1 or T0");
}

// CSV goes to stdout unless --out names a file.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--n", o.n, "polynomial degree (n+1 nodes)");
  cmd->add_option("--out", o.out, "write CSV here instead of stdout");
}

void print_double(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

int run(int argc, char** argv) {
  CLI::App app{"Barycentric interpolation workbench"};
  app.require_subcommand(1);
  Options o;

  auto* nodes = app.add_subcommand("nodes", "grid coordinates");
  add_common(nodes, o);
  nodes->add_option("--bins", o.bins, "0, 3, or dyadic:<levels>");

  auto* weights = app.add_subcommand("weights", "barycentric weight vectors");
  add_common(weights, o);

  auto* eval = app.add_subcommand("eval", "evaluate the interpolant");
  add_common(eval, o);
  eval->add_option("--formula", o.formula, "first or second");
  eval->add_option("--bins", o.bins, "0, 3, or dyadic:<levels>");
  eval->add_option("--f", o.func, "function name");
  eval->add_option("--t", o.ts, "evaluation points")->expected(-1);

  auto* errors = app.add_subcommand("errors", "per-point error split");
  add_common(errors, o);
  errors->add_option("--formula", o.formula, "first or second");
  errors->add_option("--bins", o.bins, "0, 3, or dyadic:<levels>");
  errors->add_option("--f", o.func, "function name");
  errors->add_option("--set", o.set, "Tm1 or T0");
  errors->add_option("--scale", o.scale, "point-count divisor");
  errors->add_option("--threads", o.threads, "worker threads");
  errors->add_flag("--allow-step1", o.allow_step1,
                   "measure even where approximation error dominates");

  auto* ratio = app.add_subcommand("ratio", "mean stepII / mean stepIII");
  add_common(ratio, o);
  ratio->add_option("--formula", o.formula, "first or second");
  ratio->add_option("--bins", o.bins, "0, 3, or dyadic:<levels>");
  ratio->add_option("--f", o.func, "function name");
  ratio->add_option("--set", o.set, "Tm1 or T0");
  ratio->add_option("--scale", o.scale, "point-count divisor");
  ratio->add_option("--threads", o.threads, "worker threads");
  ratio->add_flag("--allow-step1", o.allow_step1,
                  "measure even where approximation error dominates");

  auto* bn = app.add_subcommand("bn", "worst-case Lipschitz coefficient");
  add_common(bn, o);

  auto* zstats = app.add_subcommand("zstats", "relative weight errors");
  add_common(zstats, o);

  auto* epoly = app.add_subcommand("epoly", "error polynomial dump");
  add_common(epoly, o);
  epoly->add_option("--f", o.func, "function name");
  epoly->add_option("--samples", o.samples, "sample count");

  auto* bounds = app.add_subcommand("bounds", "inequality report");
  add_common(bounds, o);
  bounds->add_option("--bins", o.bins, "0, 3, or dyadic:<levels>");

  auto* bench = app.add_subcommand("bench", "per-point timing");
  add_common(bench, o);
  bench->add_option("--bins", o.bins, "layout for the binned cases");
  bench->add_option("--set", o.set, "Tm1 or T0");
  bench->add_option("--scale", o.scale, "point-count divisor");
  bench->add_option("--repeats", o.repeats, "timed passes");

  auto* verify = app.add_subcommand("verify-layout", "bin layout checks");
  verify->add_option("--bins", o.bins, "3 or dyadic:<levels>");
  verify->add_option("--n", o.n, "also check a grid of this degree");
  verify->add_option("--out", o.out, "write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints the message / help text
    return code == 0 ? 0 : 2;
  }
  Sink sink(o.out);
  std::ostream& os = sink.os();

  if (nodes->parsed()) {
    auto layout = layout_of(o.bins);
    if (!layout) {
      Grid g = gen_nodes_usual(o.n);
      os << "k,x\n";
      for (int k = 0; k <= o.n; ++k) {
        os << k << ',';
        print_double(os, g.nodes[k]);
        os << '\n';
      }
    } else {
      BinnedGrid g = gen_binned_nodes(o.n, *layout);
      os << "k,bin,u\n";
      for (int k = 0; k <= o.n; ++k) {
        os << k << ',' << g.bin_of[k] << ',';
        print_double(os, g.u[k]);
        os << '\n';
      }
    }
    return 0;
  }

  if (weights->parsed()) {
    WeightVector wn = normalized_lambda_closed(o.n);
    WeightVector ws = salzer_weights(o.n);
    os << "k,normalized,salzer\n";
    for (int k = 0; k <= o.n; ++k) {
      os << k << ',';
      print_double(os, wn.values[k]);
      os << ',';
      print_double(os, ws.values[k]);
      os << '\n';
    }
    return 0;
  }

  if (eval->parsed()) {
    const FuncSpec* f = find_func(o.func);
    if (!f) throw std::domain_error("unknown function " + o.func);
    FormulaKind kind = formula_of(o.formula);
    auto layout = layout_of(o.bins);
    WeightVector w = kind == FormulaKind::first ? normalized_lambda_closed(o.n)
                                                : salzer_weights(o.n);
    os << "t,value\n";
    if (!layout) {
      Grid g = gen_nodes_usual(o.n);
      std::vector<double> y(o.n + 1);
      for (int k = 0; k <= o.n; ++k) y[k] = func_eval(*f, g.nodes[k]);
      for (double t : o.ts) {
        double v = kind == FormulaKind::first
                       ? first_formula_eval(t, g, y, w)
                       : second_formula_eval(t, g, y, w);
        print_double(os, t);
        os << ',';
        print_double(os, v);
        os << '\n';
      }
    } else {
      BinnedGrid g = gen_binned_nodes(o.n, *layout);
      std::vector<double> y(o.n + 1);
      for (int k = 0; k <= o.n; ++k)
        y[k] = func_eval(*f, reconstructed_node(g, k));
      for (double t : o.ts) {
        double v = eval_binned(kind, t, g, y, w);
        print_double(os, t);
        os << ',';
        print_double(os, v);
        os << '\n';
      }
    }
    return 0;
  }

  if (errors->parsed() || ratio->parsed()) {
    const FuncSpec* f = find_func(o.func);
    if (!f) throw std::domain_error("unknown function " + o.func);
    auto layout = layout_of(o.bins);
    NodeMode mode{layout ? &*layout : nullptr};
    TestSet set = build_test_set(anchor_of(o.set), o.n, o.scale);
    ErrorReport rep = measure_errors(formula_of(o.formula), mode, o.n, *f,
                                     set, o.allow_step1, o.threads);
    if (errors->parsed()) {
      write_error_csv(os, rep);
      std::ostringstream agg;
      agg << "max stepII " << rep.max_stepII << ", max stepIII "
          << rep.max_stepIII << ", max overall " << rep.max_overall
          << ", mean ratio " << rep.mean_ratio << '\n';
      std::cerr << agg.str();
    } else {
      os << "n_plus_1,mean_stepII,mean_stepIII,ratio\n" << (o.n + 1) << ',';
      print_double(os, rep.mean_stepII);
      os << ',';
      print_double(os, rep.mean_stepIII);
      os << ',';
      print_double(os, rep.mean_ratio);
      os << '\n';
    }
    return 0;
  }

  if (bn->parsed()) {
    auto x = gen_nodes_ext(o.n);
    Grid g = gen_nodes_usual(o.n);
    std::vector<ExtReal> xp;
    xp.reserve(o.n + 1);
    for (double v : g.nodes) xp.push_back(ExtReal(v));
    ZVector zv = z_from_r(x, xp);
    std::vector<double> y(o.n + 1, 0.0);
    ErrorPolyContext ctx(xp, y, zv);
    write_bn_csv(os, o.n, ctx.bn());
    return 0;
  }

  if (zstats->parsed()) {
    auto x = gen_nodes_ext(o.n);
    Grid g = gen_nodes_usual(o.n);
    std::vector<ExtReal> xp;
    xp.reserve(o.n + 1);
    for (double v : g.nodes) xp.push_back(ExtReal(v));
    write_zstats_csv(os, z_from_r(x, xp));
    return 0;
  }

  if (epoly->parsed()) {
    const FuncSpec* f = find_func(o.func);
    if (!f) throw std::domain_error("unknown function " + o.func);
    auto x = gen_nodes_ext(o.n);
    Grid g = gen_nodes_usual(o.n);
    std::vector<ExtReal> xp;
    xp.reserve(o.n + 1);
    for (double v : g.nodes) xp.push_back(ExtReal(v));
    ZVector zv = z_from_r(x, xp);
    std::vector<double> y(o.n + 1);
    for (int k = 0; k <= o.n; ++k) y[k] = func_eval(*f, g.nodes[k]);
    ErrorPolyContext ctx(xp, y, zv);
    std::vector<double> ts;
    for (int i = 1; i <= o.samples; ++i) {
      double t = -1.0 + 2.0 * i / (o.samples + 1.0);
      if (std::fabs(t) < 1.0) ts.push_back(t);
    }
    write_epoly_csv(os, ctx, ts);
    return 0;
  }

  if (bounds->parsed()) {
    auto layout = layout_of(o.bins);
    BoundReport rep = bound_suite(o.n, layout ? &*layout : nullptr);
    os << "name,lhs,rhs,satisfied\n";
    for (const auto& r : rep.records) {
      os << '"' << r.name << "\",";
      print_double(os, r.lhs);
      os << ',';
      print_double(os, r.rhs);
      os << ',' << (r.satisfied ? 1 : 0) << '\n';
    }
    return rep.all_satisfied() ? 0 : 2;
  }

  if (bench->parsed()) {
    TestSet set = build_test_set(anchor_of(o.set), o.n, o.scale);
    std::vector<BenchRow> rows;
    NodeMode usual{nullptr};
    TimingRecord base =
        bench_timing(FormulaKind::first, usual, o.n, set, o.repeats);
    rows.push_back({"usual-first", base.median_ns_per_point, 1.0});
    TimingRecord second =
        bench_timing(FormulaKind::second, usual, o.n, set, o.repeats);
    rows.push_back({"usual-second", second.median_ns_per_point,
                    second.median_ns_per_point / base.median_ns_per_point});
    auto layout = layout_of(o.bins);
    if (layout) {
      NodeMode binned{&*layout};
      TimingRecord bf =
          bench_timing(FormulaKind::first, binned, o.n, set, o.repeats);
      rows.push_back({"binned-first", bf.median_ns_per_point,
                      bf.median_ns_per_point / base.median_ns_per_point});
      TimingRecord bs =
          bench_timing(FormulaKind::second, binned, o.n, set, o.repeats);
      rows.push_back({"binned-second", bs.median_ns_per_point,
                      bs.median_ns_per_point / base.median_ns_per_point});
    }
    write_bench_csv(os, rows);
    return 0;
  }

  if (verify->parsed()) {
    auto layout = layout_of(o.bins);
    if (!layout)
      throw std::domain_error("verify-layout needs --bins 3 or dyadic:<levels>");
    BinnedGrid g = gen_binned_nodes(o.n, *layout);
    auto checks = verify_layout(*layout, &g);
    os << "check,pass,detail\n";
    bool all = true;
    for (const auto& c : checks) {
      os << '"' << c.name << "\"," << (c.pass ? 1 : 0) << ",\"" << c.detail
         << "\"\n";
      all = all && c.pass;
    }
    return all ? 0 : 2;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    assert_round_to_nearest();
    return run(argc, argv);
  } catch (const step1_refused& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
