#include <doctest.h>

#include <algorithm>
#include <array>
#include <set>

#include "falsilab/canonical.hpp"
#include "falsilab/fraisse.hpp"
#include "falsilab/time_indexed.hpp"
#include "support.hpp"

using namespace falsilab;
using namespace testing;

namespace {

Structure chain(const SignaturePtr& sig, int n) {
  Structure m(sig, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) m.set_relation(0, std::vector<int>{a, b}, true);
  }
  return m;
}

ClassSpec t_tau_class() { return load_class_spec(corpus_path("t_tau.spec")); }

}  // namespace

TEST_CASE("ages") {
  auto order = corpus_class("linear_orders").signature_ptr();
  auto a = age(chain(order, 3));
  REQUIRE(a.size() == 3);
  for (int n = 1; n <= 3; ++n) {
    CHECK(std::find(a.begin(), a.end(), canonicalize(chain(order, n))) != a.end());
  }
  CHECK(age(digraph(1, {{0, 0}})).size() == 1);
  auto edgeless = age(digraph(2, {}));
  CHECK(edgeless.size() == 2);
  CHECK(edgeless == std::vector<IsoClassId>{std::min(canonicalize(digraph(1, {})), canonicalize(digraph(2, {}))),
                                            std::max(canonicalize(digraph(1, {})), canonicalize(digraph(2, {})))});
}

TEST_CASE("hereditary property") {
  CHECK(check_hp(corpus_class("linear_orders"), 5).holds);
  CHECK(check_hp(corpus_class("digraphs"), 4).holds);
  HpVerdict v = check_hp(corpus_class("three_chain"), 3);
  CHECK_FALSE(v.holds);
  REQUIRE(v.counterexample);
  // The smallest failure: a single point of the chain.
  CHECK(v.counterexample->member.size() == 3);
  CHECK(v.counterexample->substructure.size() == 1);
  CHECK(v.counterexample->elements.size() == 1);
}

TEST_CASE("joint embedding") {
  CHECK(check_jep(corpus_class("linear_orders"), 3).holds);
  JepVerdict v = check_jep(corpus_class("separate_points"), 2);
  CHECK_FALSE(v.holds);
  REQUIRE(v.counterexample);
  CHECK(v.counterexample->first.size() == 1);
  CHECK(v.counterexample->second.size() == 1);
}

TEST_CASE("amalgamation") {
  ApVerdict lin = check_ap(corpus_class("linear_orders"), 4);
  CHECK(lin.holds);
  CHECK(lin.problems_checked > 0);

  ApVerdict small = check_ap(corpus_class("small_orders"), 4);
  CHECK_FALSE(small.holds);
  REQUIRE(small.counterexample);
  const auto& c = *small.counterexample;
  // A point a, N: a < b, Q: c < a.
  CHECK(c.base.size() == 1);
  CHECK(c.n.holds(0, std::vector<int>{c.f_n[0], 1 - c.f_n[0]}));
  CHECK(c.q.holds(0, std::vector<int>{1 - c.f_q[0], c.f_q[0]}));
}

TEST_CASE("amalgams commute") {
  ClassSpec k = corpus_class("linear_orders");
  auto order = k.signature_ptr();
  AmalgamProblem p{chain(order, 1), chain(order, 2), chain(order, 2), {0}, {1}};
  int observed = 0;
  AmalgamOptions options;
  options.on_embedding = [&](const Structure& s, const Structure& t, std::span<const int> map) {
    CHECK(is_embedding(s, t, map));
    ++observed;
  };
  auto a = find_amalgam(k, p, options);
  REQUIRE(a);
  CHECK(a->target.size() == 3);
  CHECK(a->g_n[p.f_n[0]] == a->g_q[p.f_q[0]]);
  CHECK(observed == 2);
  options.strong = true;
  CHECK(find_amalgam(k, p, options));
  CHECK_FALSE(find_amalgam(corpus_class("small_orders"), p));
}

TEST_CASE("finite linear orders and T_tau are Fraisse up to the bound") {
  CHECK(check_fraisse(corpus_class("linear_orders"), 4).fraisse());
  FraisseReport t = check_fraisse(t_tau_class(), 3);
  CHECK(t.hp.holds);
  CHECK(t.jep.holds);
  CHECK(t.ap.holds);
}

TEST_CASE("the corpus T_tau matches the generated axioms") {
  Signature base("H");
  base.add_relation("H", 1);
  Theory generated = time_indexed_theory(base);
  Theory shipped = load_theory(corpus_path("t_tau.fot"));
  CHECK(generated.signature->relations() == shipped.signature->relations());
  REQUIRE(generated.sentences.size() == shipped.sentences.size());
  for (int n = 1; n <= 3; ++n) {
    for_each_structure(shipped.signature, n, [&](const Structure& m) {
      CHECK(generated.holds_in(m) == shipped.holds_in(m));
    });
  }
}

TEST_CASE("time-indexed encoding") {
  Signature base("coin");
  base.add_relation("H", 1);
  auto indexed = time_indexed_signature(base, true);
  CHECK(indexed->relation_index("succ"));
  CHECK(indexed->relations()[0].arity == 2);
  Structure heads(make_signature(base), 1);
  heads.set_relation(0, std::vector<int>{0}, true);
  Structure tails(make_signature(base), 1);
  Structure run = time_indexed_structure(indexed, {heads, tails, heads});
  CHECK(run.size() == 4);
  CHECK(time_indexed_theory(base, true).holds_in(run));
  std::vector<int> id = {0, 1, 2, 3};
  CHECK(restricts_to_order_embedding(run, run, id));
  CHECK_THROWS_AS(time_indexed_signature(parse_signature("sig f { fun f/1 }")), Error);
}

TEST_CASE("generic chain for digraphs saturates level 2") {
  ClassSpec k = corpus_class("digraphs");
  ChainState st = generic_chain(k, 2, 3);
  CHECK(st.level_achieved == 2);
  CHECK(st.closed);
  for (std::size_t i = 0; i < st.inclusions.size(); ++i) {
    CHECK(is_embedding(st.stages[i], st.stages[i + 1], st.inclusions[i]));
  }
  // Every one-point extension of every vertex occurs.
  const Structure& g = st.current();
  for (int a = 0; a < g.size(); ++a) {
    std::set<std::array<bool, 3>> seen;
    for (int b = 0; b < g.size(); ++b) {
      if (b == a) continue;
      seen.insert({g.holds(0, std::vector<int>{a, b}), g.holds(0, std::vector<int>{b, a}),
                   g.holds(0, std::vector<int>{b, b})});
    }
    CHECK(seen.size() == 8);
  }
  CHECK(realized_types(g, 2) == allowed_types(k, 2));
}

TEST_CASE("generic chains are reproducible") {
  ClassSpec k = corpus_class("digraphs");
  ChainState a = generic_chain(k, 2, 17);
  ChainState b = generic_chain(k, 2, 17);
  CHECK(same_interpretation(a.current(), b.current()));
  CHECK(a.seed == 17);
}

TEST_CASE("generic chain for linear orders becomes dense") {
  ChainOptions options;
  options.max_size = 40;
  ChainState st = generic_chain(corpus_class("linear_orders"), 3, 0, options);
  REQUIRE(st.stages.size() >= 3);
  const Structure& before = st.stages[st.stages.size() - 3];
  const Structure& after = st.stages[st.stages.size() - 2];
  for (int a = 0; a < before.size(); ++a) {
    for (int b = 0; b < before.size(); ++b) {
      if (!after.holds(0, std::vector<int>{a, b})) continue;
      bool between = false;
      for (int c = 0; c < after.size() && !between; ++c) {
        between = after.holds(0, std::vector<int>{a, c}) && after.holds(0, std::vector<int>{c, b});
      }
      CHECK(between);
    }
  }
  CHECK(corpus_class("linear_orders").contains(st.current()));
}

TEST_CASE("generic chain for T_tau stays in the class") {
  ChainOptions options;
  options.max_size = 14;
  ChainState st = generic_chain(t_tau_class(), 2, 1, options);
  CHECK(load_theory(corpus_path("t_tau.fot")).holds_in(st.current()));
  CHECK(st.current().size() > 1);
}
