#include "bary/binned.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace bary {

namespace {

// Both layouts are symmetric with an odd bin count; the central bin gets
// base 0, bins left of it take their left edge, bins right of it their right
// edge, so every base sits on the end nearer the hard endpoint.
BinLayout layout_from_edges(std::vector<double> edges) {
  BinLayout L;
  L.boundaries = std::move(edges);
  int nb = static_cast<int>(L.boundaries.size()) - 1;
  int c = nb / 2;
  L.bases.resize(nb);
  for (int i = 0; i < nb; ++i)
    L.bases[i] = i < c ? L.boundaries[i] : (i == c ? 0.0 : L.boundaries[i + 1]);
  return L;
}

}  // namespace

BinLayout layout_three() { return layout_from_edges({-1.0, -0.5, 0.5, 1.0}); }

BinLayout layout_dyadic(int levels) {
  if (levels < 2 || levels > 40)
    throw std::domain_error("layout_dyadic: levels outside [2, 40]");
  std::vector<double> e;
  e.reserve(4 * levels);
  e.push_back(-1.0);
  for (int k = levels; k >= 2; --k) e.push_back(std::ldexp(1.0, -k) - 1.0);
  for (int k = 1; k <= levels; ++k) e.push_back(-std::ldexp(1.0, -k));
  for (int k = levels; k >= 1; --k) e.push_back(std::ldexp(1.0, -k));
  for (int k = 2; k <= levels; ++k) e.push_back(1.0 - std::ldexp(1.0, -k));
  e.push_back(1.0);
  return layout_from_edges(std::move(e));
}

Located locate_bin(double t, const BinLayout& layout) {
  const auto& e = layout.boundaries;
  if (!(t >= e.front() && t <= e.back()))
    throw std::domain_error("locate_bin: point outside [-1, 1]");
  int l;
  if (t == e.back()) {
    l = layout.bins() - 1;  // the last bin is closed on the right
  } else {
    l = static_cast<int>(std::upper_bound(e.begin(), e.end(), t) - e.begin()) - 1;
  }
  return {l, t - layout.bases[l]};
}

// Bin of the exact node position. Near a boundary the rounded node can land
// on the wrong side of it (libm is not correctly rounded), and the pair value
// itself can round onto the boundary; assigning from the pair keeps every
// stored offset small against its own base.
static int exact_bin(const ExtReal& x, const BinLayout& layout) {
  int l = locate_bin(x.hi, layout).bin;
  if (l > 0 && x.hi == layout.boundaries[l] && x.lo < 0.0) --l;
  return l;
}

BinnedGrid gen_binned_nodes(int n, const BinLayout& layout) {
  std::vector<ExtReal> xe = gen_nodes_ext(n);
  BinnedGrid bg;
  bg.layout = layout;
  bg.n = n;
  bg.bin_of.resize(n + 1);
  bg.u.resize(n + 1);
  bg.u_ext.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    // The offset is the trigonometric formula for x_k - b (2 sin^2(k pi / 2n)
    // against -1, the node itself against 0, mirrored against +1) evaluated
    // in pair precision and rounded once; its pair error sits far below the
    // offset's own ulp, so u is the correctly rounded exact offset. Never the
    // rounded node minus the base, which cancels away the low bits.
    //
    // A node sitting on a boundary (1/6 of the circle gives sin = 1/2
    // exactly) can have its pair approximation a hair on one side and its
    // rounded offset on the other; re-locating the stored pair until the
    // assignment agrees with it keeps every offset inside its own bin.
    int l = exact_bin(xe[k], layout);
    for (int pass = 0;; ++pass) {
      bg.u_ext[k] = xe[k] - ExtReal(layout.bases[l]);
      bg.u[k] = to_double(bg.u_ext[k]);
      int lv = exact_bin(two_sum(layout.bases[l], bg.u[k]), layout);
      if (lv == l) break;
      if (pass == 3)
        throw std::runtime_error("gen_binned_nodes: node will not settle in a bin");
      l = lv;
    }
    bg.bin_of[k] = l;
  }
  for (int k = 0; k < n; ++k)
    if (bg.bin_of[k + 1] < bg.bin_of[k])
      throw std::runtime_error("gen_binned_nodes: bins not monotone over nodes");
  return bg;
}

double binned_diff(const Located& p, const BinnedGrid& g, int k) {
  double db = g.layout.bases[p.bin] - g.layout.bases[g.bin_of[k]];
  return db + (p.offset - g.u[k]);
}

std::vector<ExtReal> reconstructed_nodes_ext(const BinnedGrid& g) {
  std::vector<ExtReal> out(g.u.size());
  for (size_t k = 0; k < g.u.size(); ++k)
    out[k] = two_sum(g.layout.bases[g.bin_of[k]], g.u[k]);
  return out;
}

double reconstructed_node(const BinnedGrid& g, int k) {
  return g.layout.bases[g.bin_of[k]] + g.u[k];
}

namespace {

void check_binned_sizes(const BinnedGrid& g, size_t y, size_t w, const char* who) {
  size_t m = g.u.size();
  if (m != size_t(g.n) + 1 || m != g.bin_of.size() || y != m || w != m || m < 2)
    throw std::invalid_argument(std::string(who) + ": grid, values, weights sizes disagree");
}

template <typename RunT>
std::vector<RunT> bin_runs(const BinnedGrid& g) {
  std::vector<RunT> runs;
  size_t m = g.bin_of.size();
  for (size_t k = 0; k < m;) {
    size_t j = k;
    while (j < m && g.bin_of[j] == g.bin_of[k]) ++j;
    runs.push_back({int(k), int(j), g.layout.bases[g.bin_of[k]]});
    k = j;
  }
  return runs;
}

}  // namespace

BinnedFirstEvaluator::BinnedFirstEvaluator(const BinnedGrid& g,
                                           std::span<const double> y,
                                           const WeightVector& w)
    : layout_(g.layout), u_(g.u), y_(y.begin(), y.end()) {
  check_binned_sizes(g, y.size(), w.values.size(), "BinnedFirstEvaluator");
  if (w.kind != WeightKind::normalized_lambda)
    throw std::invalid_argument("BinnedFirstEvaluator: needs normalized weights");
  runs_ = bin_runs<Run>(g);
  wy_.resize(u_.size());
  for (size_t k = 0; k < u_.size(); ++k) wy_[k] = w.values[k] * y_[k];
}

double BinnedFirstEvaluator::operator()(double t) const {
  Located p = locate_bin(t, layout_);
  double bl = layout_.bases[p.bin];
  double sig = 1.0;
  long e = 0;
  double sum = 0.0;
  for (const Run& r : runs_) {
    double db = bl - r.base;
    for (int k = r.begin; k < r.end; ++k) {
      double d = db + (p.offset - u_[k]);
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
  }
  int es;
  double ms = std::frexp(sum, &es);
  return std::ldexp(0.5 * sig * ms, static_cast<int>(e) + es);
}

BinnedSecondEvaluator::BinnedSecondEvaluator(const BinnedGrid& g,
                                             std::span<const double> y,
                                             const WeightVector& w)
    : layout_(g.layout), u_(g.u), y_(y.begin(), y.end()),
      w_(w.values.begin(), w.values.end()) {
  check_binned_sizes(g, y.size(), w.values.size(), "BinnedSecondEvaluator");
  runs_ = bin_runs<Run>(g);
}

double BinnedSecondEvaluator::operator()(double t) const {
  Located p = locate_bin(t, layout_);
  double bl = layout_.bases[p.bin];
  double num = 0.0, den = 0.0;
  for (const Run& r : runs_) {
    double db = bl - r.base;
    for (int k = r.begin; k < r.end; ++k) {
      double d = db + (p.offset - u_[k]);
      if (d == 0.0) return y_[k];
      double q = w_[k] / d;
      num += q * y_[k];
      den += q;
    }
  }
  return num / den;
}

double eval_binned(FormulaKind f, double t, const BinnedGrid& g,
                   std::span<const double> y, const WeightVector& w) {
  if (f == FormulaKind::first) return BinnedFirstEvaluator(g, y, w)(t);
  return BinnedSecondEvaluator(g, y, w)(t);
}

std::vector<LayoutCheck> verify_layout(const BinLayout& layout,
                                       const BinnedGrid* grid) {
  std::vector<LayoutCheck> out;
  auto add = [&](std::string name, bool pass, std::string detail = {}) {
    out.push_back({std::move(name), pass, std::move(detail)});
  };
  const auto& e = layout.boundaries;
  int nb = layout.bins();

  bool shape = nb >= 1 && static_cast<int>(e.size()) == nb + 1 &&
               e.front() == -1.0 && e.back() == 1.0;
  for (int i = 0; shape && i < nb; ++i)
    if (!(e[i] < e[i + 1])) shape = false;
  add("boundaries strictly increasing, covering [-1,1]", shape);
  if (!shape) return out;

  // Every base difference must round to nothing: two_sum residue zero.
  bool exact = true;
  for (int i = 0; i < nb && exact; ++i)
    for (int j = 0; j < nb; ++j)
      if (two_sum(layout.bases[i], -layout.bases[j]).lo != 0.0) {
        exact = false;
        break;
      }
  add("all pairwise base differences exact in double", exact);

  // t - base must be exact throughout each bin's closure: base 0 is trivial,
  // otherwise Sterbenz needs sign(t) = sign(base) and t/base in [1/2, 2].
  bool ster = true;
  std::string bad;
  for (int i = 0; i < nb; ++i) {
    double b = layout.bases[i];
    if (b == 0.0) continue;
    for (double v : {e[i], e[i + 1]}) {
      double r = v / b;
      if (v == 0.0 || std::signbit(v) != std::signbit(b) || !(r >= 0.5 && r <= 2.0)) {
        ster = false;
        if (bad.empty()) bad = "bin " + std::to_string(i);
      }
    }
  }
  add("exact offsets across each bin (Sterbenz coverage)", ster, bad);

  if (grid) {
    const BinnedGrid& g = *grid;
    bool sane = g.layout.boundaries == e && g.layout.bases == layout.bases &&
                g.u.size() == size_t(g.n) + 1 && g.bin_of.size() == g.u.size() &&
                g.u_ext.size() == g.u.size();
    add("grid sized against this layout", sane);
    if (!sane) return out;

    bool mono = true, contained = true, accurate = true;
    double worst = 0.0;
    for (int k = 0; k <= g.n; ++k) {
      int l = g.bin_of[k];
      if (l < 0 || l >= nb) {
        contained = false;
        continue;
      }
      if (k > 0 && l < g.bin_of[k - 1]) mono = false;
      // The pair (base, offset) is the node as represented; its value can sit
      // within half an ulp of a boundary, where the double sum rounds onto the
      // wrong side, so the containment test must compare the pair.
      ExtReal xr = two_sum(layout.bases[l], g.u[k]);
      bool last = l == nb - 1;
      if (!(xr >= ExtReal(e[l]) && (last ? xr <= ExtReal(e[l + 1]) : xr < ExtReal(e[l + 1]))))
        contained = false;
      double ref = std::fabs(to_double(g.u_ext[k]));
      double err = std::fabs(to_double(g.u_ext[k] - ExtReal(g.u[k])));
      // 4 ulp: the half-angle offsets carry a libm sin plus a square.
      if (err > 9.0e-16 * ref + 1e-30) accurate = false;
      if (ref > 0.0) worst = std::max(worst, err / ref);
    }
    add("node bins monotone along the grid", mono);
    add("reconstructed nodes inside their bins", contained);
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst rel %.3e", worst);
    add("offsets within a few ulp of reference offsets", accurate, buf);
  }
  return out;
}

namespace {

std::string hexd(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

[[noreturn]] void read_fail(const std::string& why) {
  throw std::runtime_error("read_binned_grid: " + why);
}

double parse_hexd(const std::string& s) {
  const char* p = s.c_str();
  char* end = nullptr;
  double v = std::strtod(p, &end);
  if (end == p || *end != '\0') read_fail("bad float token '" + s + "'");
  return v;
}

}  // namespace

void write_binned_grid(std::ostream& os, const BinnedGrid& g) {
  os << "binnedgrid v1\n";
  os << "bins " << g.layout.bins() << '\n';
  os << "boundaries";
  for (double b : g.layout.boundaries) os << ' ' << hexd(b);
  os << "\nbases";
  for (double b : g.layout.bases) os << ' ' << hexd(b);
  os << "\nn " << g.n << "\noffsets\n";
  for (size_t k = 0; k < g.u.size(); ++k)
    os << g.bin_of[k] << ' ' << hexd(g.u[k]) << ' ' << hexd(g.u_ext[k].hi)
       << ' ' << hexd(g.u_ext[k].lo) << '\n';
  os << "end\n";
}

BinnedGrid read_binned_grid(std::istream& is) {
  std::string tok;
  auto word = [&](const char* what) {
    if (!(is >> tok)) read_fail(std::string("truncated before ") + what);
    return tok;
  };
  auto integer = [&](const char* what) {
    long v = 0;
    if (!(is >> v)) read_fail(std::string("bad integer for ") + what);
    return v;
  };
  if (word("magic") != "binnedgrid") read_fail("bad magic");
  if (word("version") != "v1") read_fail("unsupported version '" + tok + "'");
  if (word("bins") != "bins") read_fail("expected 'bins'");
  long nb = integer("bins");
  if (nb < 1 || nb > 1000000) read_fail("unreasonable bin count");
  BinnedGrid g;
  if (word("boundaries") != "boundaries") read_fail("expected 'boundaries'");
  g.layout.boundaries.resize(nb + 1);
  for (double& v : g.layout.boundaries) v = parse_hexd(word("boundary"));
  if (word("bases") != "bases") read_fail("expected 'bases'");
  g.layout.bases.resize(nb);
  for (double& v : g.layout.bases) v = parse_hexd(word("base"));
  if (word("n") != "n") read_fail("expected 'n'");
  long n = integer("n");
  if (n < 1 || n > 100000000) read_fail("unreasonable degree");
  g.n = static_cast<int>(n);
  if (word("offsets") != "offsets") read_fail("expected 'offsets'");
  g.bin_of.resize(n + 1);
  g.u.resize(n + 1);
  g.u_ext.resize(n + 1);
  for (long k = 0; k <= n; ++k) {
    long l = integer("bin index");
    if (l < 0 || l >= nb) read_fail("bin index out of range");
    g.bin_of[k] = static_cast<int>(l);
    g.u[k] = parse_hexd(word("offset"));
    g.u_ext[k].hi = parse_hexd(word("offset hi"));
    g.u_ext[k].lo = parse_hexd(word("offset lo"));
  }
  if (word("end") != "end") read_fail("expected 'end'");
  return g;
}

}  // namespace bary
