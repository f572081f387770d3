#include <doctest.h>

#include <set>

#include "falsilab/corpus.hpp"
#include "falsilab/eval.hpp"
#include "falsilab/vc.hpp"
#include "support.hpp"

using namespace falsilab;
using namespace testing;

namespace {

SignaturePtr r_sig() {
  static const SignaturePtr sig = make_signature(Signature("r").add_relation("R", 2));
  return sig;
}

// Largest X with every subset cut out by some trace {x in X : R(x,y)}.
int oracle_vc(const Structure& m) {
  const int n = m.size();
  int best = 0;
  for (unsigned x = 1; x < (1U << n); ++x) {
    std::set<unsigned> traces;
    for (int y = 0; y < n; ++y) {
      unsigned t = 0;
      for (int e = 0; e < n; ++e) {
        if ((x >> e & 1U) && m.holds(0, std::vector<int>{e, y})) t |= 1U << e;
      }
      traces.insert(t);
    }
    const int size = __builtin_popcount(x);
    if (traces.size() == (std::size_t{1} << size)) best = std::max(best, size);
  }
  return best;
}

}  // namespace

TEST_CASE("G_n shatters its index set") {
  for (int n = 1; n <= 3; ++n) {
    Structure g = make_gn(n);
    PartitionedFormula pf = parse_partitioned("R(x;y)", g.signature());
    std::vector<ElementTuple> set;
    for (int i = 0; i < n; ++i) set.push_back({i});
    auto w = shatters(g, pf, set);
    REQUIRE(w);
    for (unsigned j = 0; j < (1U << n); ++j) {
      std::string want = "S_";
      for (int i = 0; i < n; ++i) {
        if (j >> i & 1U) want += std::to_string(i + 1);
      }
      const int y = w->params[j][0];
      for (int i = 0; i < n; ++i) CHECK(g.holds(0, std::vector<int>{i, y}) == static_cast<bool>(j >> i & 1U));
      // Nonempty traces are cut out only by S_J.
      if (j != 0) CHECK(g.element_name(y) == want);
    }
    VcResult r = vc_dimension(g, pf);
    CHECK(r.dimension == n);
    CHECK(r.exact);
    CHECK(r.dimension == oracle_vc(g));
  }
}

TEST_CASE("empty set and small cases") {
  Structure cycle = digraph(3, {{0, 1}, {1, 2}, {2, 0}});
  PartitionedFormula pf = parse_partitioned("edge(x;y)", cycle.signature());
  CHECK(shatters(cycle, pf, {}));
  CHECK_FALSE(shatters(cycle, pf, {{0}, {1}, {2}}));
  Structure empty = digraph(3, {});
  CHECK(vc_dimension(empty, pf).dimension == 0);
}

TEST_CASE("general partitioned formulas") {
  Structure path = digraph(4, {{0, 1}, {1, 2}, {2, 3}});
  PartitionedFormula pf = parse_partitioned("x ; y1, y2 : edge(y1,x) | edge(y2,x)", path.signature());
  CHECK(pf.objects == std::vector<std::string>{"x"});
  CHECK(pf.params.size() == 2);
  CHECK(vc_dimension(path, pf).dimension == 2);
  CHECK_THROWS_AS(parse_partitioned("x ; y : edge(x,z)", path.signature()), Error);
}

TEST_CASE("VC sentences on G_2") {
  Structure g2 = make_gn(2);
  PartitionedFormula pf = parse_partitioned("R(x;y)", g2.signature());
  CHECK_FALSE(evaluate(g2, vc_sentence(pf, 2)));
  CHECK(evaluate(g2, vc_sentence(pf, 3)));
  Structure loop(r_sig(), 1);
  loop.set_relation(0, std::vector<int>{0, 0}, true);
  CHECK(evaluate(loop, vc_sentence(parse_partitioned("R(x;y)", *r_sig()), 2)));
  CHECK_THROWS_AS(vc_sentence(pf, 6), Error);
  CHECK(vc_parameter_variable(pf, 0b11, 2, 0) == "y_12");
  CHECK(vc_object_variable(pf, 1, 0) == "x1");
}

TEST_CASE("VC sentences agree with the brute-force dimension on three nodes") {
  PartitionedFormula pf = parse_partitioned("R(x;y)", *r_sig());
  std::vector<CompiledFormula> sentences;
  for (int n = 1; n <= 3; ++n) sentences.emplace_back(vc_sentence(pf, n), *r_sig());
  for_each_structure(r_sig(), 3, [&](const Structure& m) {
    const int d = oracle_vc(m);
    CHECK(vc_dimension(m, pf).dimension == d);
    for (int n = 1; n <= 3; ++n) CHECK(sentences[n - 1].holds(m) == (d < n));
  });
}

TEST_CASE("parametric families") {
  std::vector<RationalPoint> tri = {{0, 0}, {1, 0}, {0, 1}};
  auto fat = parse_rational_csv(read_file(corpus_path("fatline_grid.csv")));
  auto line = parse_rational_csv(read_file(corpus_path("line_grid.csv")));
  ParametricReport r = parametric_vc_report(fat_line_family(), tri, fat);
  CHECK(r.lower_bound == 3);
  CHECK(r.shattered == std::vector<int>{0, 1, 2});
  // Oracle: evaluate the slab inequality directly for the reported rows.
  for (unsigned mask = 0; mask < 8; ++mask) {
    const auto& p = fat[static_cast<std::size_t>(r.parameter_for_subset[mask])];
    for (int i = 0; i < 3; ++i) {
      Rational v = p[0] * tri[i][0] + p[1] * tri[i][1] + p[2];
      const bool inside = v * v < p[3] * (p[0] * p[0] + p[1] * p[1]);
      CHECK(inside == static_cast<bool>(mask >> i & 1U));
    }
  }
  CHECK(parametric_vc_lower_bound(line_family(), tri, line) == 2);
  CHECK_THROWS_AS(parametric_vc_lower_bound(line_family(), tri, fat), Error);
  CHECK(parametric_vc_lower_bound(fat_line_family(), {}, fat) == 0);
  CHECK(family_by_name("line").parameters == 3);
  CHECK_THROWS_AS(family_by_name("circle"), Error);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("1/2") == Rational(1, 2));
  CHECK(parse_rational("-3") == -3);
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("010") == 10);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  auto rows = parse_rational_csv("# c\n1, 2/3\n\n-1,0.5\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][1] == Rational(1, 2));
}
