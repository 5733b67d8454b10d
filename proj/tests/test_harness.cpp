#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>

#include "bary/harness.hpp"
#include "doctest.h"

using bary::Anchor;
using bary::ErrorReport;
using bary::FormulaKind;
using bary::FuncSpec;
using bary::NodeMode;
using bary::TestSet;

namespace {

std::uint64_t bits(double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, sizeof u);
  return u;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (bits(a[i]) != bits(b[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("full-scale left-end set has exactly 100000 points") {
  TestSet s = bary::build_test_set(Anchor::left_end, 999, 1);
  CHECK(s.interval_count == 100);
  CHECK(s.succ_per_interval == 200);
  CHECK(s.pred_per_interval == 200);
  CHECK(s.equi_per_interval == 600);
  CHECK(s.points.size() == 100000);
  for (double t : s.points) CHECK(std::fpclassify(t) != FP_SUBNORMAL);
}

TEST_CASE("scale divisor cuts every cluster proportionally") {
  TestSet s = bary::build_test_set(Anchor::left_end, 999, 10);
  CHECK(s.succ_per_interval == 20);
  CHECK(s.pred_per_interval == 20);
  CHECK(s.equi_per_interval == 60);
  CHECK(s.points.size() == 10000);
}

TEST_CASE("each interval runs from the first successor to the last predecessor") {
  int n = 999;
  TestSet s = bary::build_test_set(Anchor::left_end, n, 10);
  bary::Grid g = bary::gen_nodes_usual(n);
  int per = s.succ_per_interval + s.pred_per_interval + s.equi_per_interval;
  REQUIRE(s.points.size() == size_t(100) * per);
  for (int k = 0; k < 100; ++k) {
    const double* blk = s.points.data() + size_t(k) * per;
    double a = g.nodes[k], b = g.nodes[k + 1];
    CHECK(blk[0] == std::nextafter(a, 2.0));
    CHECK(blk[per - 1] == std::nextafter(b, -2.0));
    for (int i = 1; i < per; ++i) {
      CAPTURE(k);
      CAPTURE(i);
      CHECK(blk[i] > blk[i - 1]);
    }
    for (int i = 0; i < per; ++i) {
      CHECK(blk[i] > a);
      CHECK(blk[i] < b);
    }
  }
}

TEST_CASE("center sets straddle the middle node and drop subnormal neighbours") {
  // Odd n: intervals n/2-100 <= k < n/2, all points inside (x_399, x_499).
  TestSet odd = bary::build_test_set(Anchor::center, 999, 10);
  bary::Grid g = bary::gen_nodes_usual(999);
  CHECK(odd.points.front() > g.nodes[399]);
  CHECK(odd.points.back() < g.nodes[499]);
  CHECK(odd.points.size() == 10000);

  // Even n: the middle node is exactly zero and its 200 representable
  // predecessors are all subnormal, so the full-scale set loses exactly them.
  TestSet ev = bary::build_test_set(Anchor::center, 1000, 1);
  CHECK(ev.points.size() == 100000 - 200);
  for (double t : ev.points) CHECK(std::fpclassify(t) != FP_SUBNORMAL);
}

TEST_CASE("test-set construction rejects unusable shapes") {
  CHECK_THROWS_AS(bary::build_test_set(Anchor::left_end, 150, 1),
                  std::domain_error);
  CHECK_THROWS_AS(bary::build_test_set(Anchor::center, 300, 1),
                  std::domain_error);
  CHECK_THROWS_AS(bary::build_test_set(Anchor::left_end, 999, 0),
                  std::domain_error);
  CHECK_THROWS_AS(bary::build_test_set(Anchor::left_end, 999, 201),
                  std::domain_error);
}

TEST_CASE("function registry refuses under-resolved frequencies") {
  const FuncSpec* f = bary::find_func("cos100");
  REQUIRE(f != nullptr);
  CHECK(bary::step1_critical(*f, 150));
  CHECK_FALSE(bary::step1_critical(*f, 999));
  const FuncSpec* slow = bary::find_func("cos1");
  REQUIRE(slow != nullptr);
  CHECK_FALSE(bary::step1_critical(*slow, 10));
  CHECK(bary::find_func("tan3") == nullptr);
  CHECK(bary::func_eval(*slow, 0.5) == std::cos(0.5));
}

TEST_CASE("error split obeys the triangle inequality and its own aggregates") {
  int n = 255;
  TestSet s = bary::build_test_set(Anchor::left_end, n, 100);
  const FuncSpec* f = bary::find_func("cos1");
  REQUIRE(f != nullptr);
  ErrorReport rep =
      bary::measure_errors(FormulaKind::second, NodeMode{}, n, *f, s);
  REQUIRE(rep.t.size() == s.points.size());
  REQUIRE(rep.stepII.size() == rep.t.size());
  REQUIRE(rep.stepIII.size() == rep.t.size());
  REQUIRE(rep.overall.size() == rep.t.size());

  // overall <= stepII + stepIII up to the rounding of the differences.
  CHECK(rep.cross_slack <= 1e-28);
  CHECK(rep.max_stepII ==
        *std::max_element(rep.stepII.begin(), rep.stepII.end()));
  CHECK(rep.max_stepIII ==
        *std::max_element(rep.stepIII.begin(), rep.stepIII.end()));
  CHECK(rep.max_overall ==
        *std::max_element(rep.overall.begin(), rep.overall.end()));
  double sum2 = 0, sum3 = 0;
  for (double v : rep.stepII) sum2 += v;
  for (double v : rep.stepIII) sum3 += v;
  CHECK(rep.mean_stepII ==
        doctest::Approx(sum2 / rep.stepII.size()).epsilon(1e-15));
  CHECK(rep.mean_stepIII ==
        doctest::Approx(sum3 / rep.stepIII.size()).epsilon(1e-15));
  CHECK(rep.mean_ratio ==
        doctest::Approx(rep.mean_stepII / rep.mean_stepIII).epsilon(1e-15));
  CHECK(rep.func == "cos1");
  CHECK(rep.bins == 0);
}

TEST_CASE("error measurement is deterministic and thread-count invariant") {
  int n = 255;
  TestSet s = bary::build_test_set(Anchor::left_end, n, 100);
  const FuncSpec* f = bary::find_func("cos1");
  ErrorReport a =
      bary::measure_errors(FormulaKind::first, NodeMode{}, n, *f, s, false, 1);
  ErrorReport b =
      bary::measure_errors(FormulaKind::first, NodeMode{}, n, *f, s, false, 1);
  ErrorReport c =
      bary::measure_errors(FormulaKind::first, NodeMode{}, n, *f, s, false, 2);
  CHECK(bit_equal(a.stepII, b.stepII));
  CHECK(bit_equal(a.stepIII, b.stepIII));
  CHECK(bit_equal(a.overall, b.overall));
  CHECK(bit_equal(a.stepII, c.stepII));
  CHECK(bit_equal(a.stepIII, c.stepIII));
  CHECK(bit_equal(a.overall, c.overall));
  CHECK(bits(a.mean_stepII) == bits(c.mean_stepII));
  CHECK(bits(a.mean_ratio) == bits(c.mean_ratio));
}

TEST_CASE("measurement refuses a set built for a different grid") {
  TestSet s = bary::build_test_set(Anchor::left_end, 255, 100);
  const FuncSpec* f = bary::find_func("cos1");
  CHECK_THROWS_AS(
      bary::measure_errors(FormulaKind::first, NodeMode{}, 300, *f, s),
      std::invalid_argument);
}

TEST_CASE("under-resolved frequency is refused unless explicitly allowed") {
  int n = 999;
  TestSet s = bary::build_test_set(Anchor::left_end, n, 100);
  const FuncSpec* f = bary::find_func("cos1e4");
  REQUIRE(f != nullptr);
  REQUIRE(bary::step1_critical(*f, n));
  CHECK_THROWS_AS(
      bary::measure_errors(FormulaKind::second, NodeMode{}, n, *f, s),
      bary::step1_refused);
  ErrorReport rep =
      bary::measure_errors(FormulaKind::second, NodeMode{}, n, *f, s, true);
  // A thousand nodes against frequency 1e4: the approximation error itself
  // dominates everything the split could attribute.
  CHECK(rep.max_overall > 1e-8);
}

TEST_CASE("input rounding dominates the first formula and not the second") {
  int n = 999;
  TestSet s = bary::build_test_set(Anchor::left_end, n, 100);
  const FuncSpec* f = bary::find_func("cos100");
  ErrorReport first =
      bary::measure_errors(FormulaKind::first, NodeMode{}, n, *f, s);
  ErrorReport second =
      bary::measure_errors(FormulaKind::second, NodeMode{}, n, *f, s);
  CHECK(first.mean_ratio > 10.0);
  CHECK(second.mean_ratio < 1.0);
}

TEST_CASE("binned rounding collapses the first formula's input error") {
  int n = 999;
  TestSet s = bary::build_test_set(Anchor::left_end, n, 100);
  const FuncSpec* f = bary::find_func("cos100");
  ErrorReport usual =
      bary::measure_errors(FormulaKind::first, NodeMode{}, n, *f, s);
  bary::BinLayout three = bary::layout_three();
  ErrorReport binned =
      bary::measure_errors(FormulaKind::first, NodeMode{&three}, n, *f, s);
  CHECK(binned.bins == 3);
  CHECK(binned.max_stepII * 50.0 < usual.max_stepII);
}

TEST_CASE("error table round-trips through its CSV form") {
  int n = 255;
  TestSet s = bary::build_test_set(Anchor::left_end, n, 200);
  const FuncSpec* f = bary::find_func("cos1");
  ErrorReport rep =
      bary::measure_errors(FormulaKind::first, NodeMode{}, n, *f, s);
  std::ostringstream os;
  bary::write_error_csv(os, rep);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "t,stepII,stepIII,overall");
  size_t i = 0;
  while (std::getline(is, line)) {
    REQUIRE(i < rep.t.size());
    double t, s2, s3, ov;
    REQUIRE(std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg", &t, &s2, &s3, &ov) ==
            4);
    CHECK(bits(t) == bits(rep.t[i]));
    CHECK(bits(s2) == bits(rep.stepII[i]));
    CHECK(bits(s3) == bits(rep.stepIII[i]));
    CHECK(bits(ov) == bits(rep.overall[i]));
    ++i;
  }
  CHECK(i == rep.t.size());
}

TEST_CASE("remaining CSV emitters pin their headers") {
  std::vector<bary::ExtReal> xe = bary::gen_nodes_ext(64);
  bary::Grid g = bary::gen_nodes_usual(64);
  std::vector<bary::ExtReal> xp(xe.size());
  for (size_t i = 0; i < xp.size(); ++i) xp[i] = bary::ExtReal(g.nodes[i]);
  bary::ZVector zv = bary::z_from_r(xe, xp);
  {
    std::ostringstream os;
    bary::write_zstats_csv(os, zv);
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "k,z_k");
    size_t rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == size_t(65));
  }
  {
    std::vector<double> y(65);
    for (int k = 0; k <= 64; ++k) y[k] = std::cos(g.nodes[k]);
    bary::ErrorPolyContext ctx(xp, y, zv);
    std::ostringstream os;
    bary::write_epoly_csv(os, ctx, {0.1, 0.2});
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "t,E,L,Q");
    size_t rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 2);
  }
  {
    std::ostringstream os;
    bary::write_bn_csv(os, 64, 2.5e-16);
    CHECK(os.str() == "n_plus_1,bn\n65,2.5000000000000002e-16\n");
  }
  {
    std::ostringstream os;
    bary::write_bench_csv(os, {{"usual-first", 12.5, 1.0}});
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "case,median_ns_per_point,normalized");
    REQUIRE(std::getline(is, line));
    CHECK(line == "usual-first,12.5,1");
  }
}

TEST_CASE("timing keeps every repeat and reports the median") {
  int n = 255;
  TestSet s = bary::build_test_set(Anchor::left_end, n, 100);
  bary::TimingRecord r =
      bary::bench_timing(FormulaKind::second, NodeMode{}, n, s, 5);
  REQUIRE(r.samples_ns_per_point.size() == 5);
  std::vector<double> sorted = r.samples_ns_per_point;
  std::sort(sorted.begin(), sorted.end());
  CHECK(r.median_ns_per_point == sorted[2]);
  CHECK(r.median_ns_per_point > 0.0);
  CHECK_THROWS_AS(bary::bench_timing(FormulaKind::second, NodeMode{}, n, s, 3),
                  std::domain_error);
}
