#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "falsilab/canonical.hpp"
#include "falsilab/error.hpp"
#include "support.hpp"

using namespace falsilab;
using namespace testing;

namespace {

SignaturePtr sig_of(const std::string& text) { return make_signature(parse_signature(text)); }

Structure succ_mod3() {
  Structure m(sig_of("sig s { fun f/1 }"), 3);
  for (int e = 0; e < 3; ++e) m.set_function(0, std::vector<int>{e}, (e + 1) % 3);
  return m;
}

// Isomorphism by trying every bijection.
bool oracle_isomorphic(const Structure& a, const Structure& b) {
  if (a.size() != b.size()) return false;
  std::vector<int> perm(static_cast<std::size_t>(a.size()));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (same_interpretation(a.relabel(perm), b)) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace

TEST_CASE("enumeration counts") {
  CHECK(enumerate_structures(sig_of("sig a { rel H/1 }"), 1).size() == 2);
  CHECK(enumerate_structures(sig_of("sig a { rel R/2 }"), 2).size() == 16);
  CHECK(enumerate_structures(sig_of("sig a { fun f/1 }"), 2).size() == 4);
  CHECK(enumerate_structures(sig_of("sig a { const c }"), 3).size() == 3);
  CHECK(*structure_count(parse_signature("sig a { rel R/2; fun f/1 }"), 2) == 64);
}

TEST_CASE("enumeration order starts empty and is exhaustive") {
  auto all = enumerate_structures(sig_of("sig a { rel R/2 }"), 2);
  CHECK(all.front().tuples(0).empty());
  CHECK(all.back().tuples(0).size() == 4);
  std::set<std::vector<std::uint8_t>> tables;
  for (const auto& m : all) tables.insert(m.relation_table(0));
  CHECK(tables.size() == 16);
}

TEST_CASE("enumeration respects the budget") {
  Budget b;
  b.enumeration = 100;
  CHECK_THROWS_AS(enumerate_structures(sig_of("sig a { rel R/2 }"), 3, b), Error);
}

TEST_CASE("substructures") {
  Structure cycle = digraph(3, {{0, 1}, {1, 2}, {2, 0}});
  auto subs = substructures(cycle, 2);
  CHECK(subs.size() == 6);
  CHECK(std::count_if(subs.begin(), subs.end(), [](const Structure& s) { return s.size() == 1; }) == 3);
  for (const auto& s : subs) {
    if (s.size() == 2) CHECK(s.tuples(0).size() == 1);
  }
  CHECK(substructures(succ_mod3(), 2).empty());
  auto whole = substructures(cycle, 3);
  CHECK(std::any_of(whole.begin(), whole.end(), [&](const Structure& s) { return same_interpretation(s, cycle); }));
}

TEST_CASE("generated substructures") {
  Structure cycle = digraph(3, {{0, 1}, {1, 2}, {2, 0}});
  CHECK(generated_substructure(cycle, std::vector<int>{0}).size() == 1);
  CHECK(generated_substructure(succ_mod3(), std::vector<int>{0}).size() == 3);
  CHECK(same_interpretation(generated_substructure(cycle, std::vector<int>{0, 1, 2}), cycle));
  Structure c(sig_of("sig a { const c }"), 3);
  c.set_constant(0, 2);
  CHECK(closure(c, std::vector<int>{0}) == std::vector<int>{0, 2});
}

TEST_CASE("isomorphism") {
  Structure a(digraph_sig(), std::vector<std::string>{"a"});
  a.set_relation(0, std::vector<int>{0, 0}, true);
  Structure z(digraph_sig(), std::vector<std::string>{"z"});
  z.set_relation(0, std::vector<int>{0, 0}, true);
  auto iso = isomorphic(a, z);
  REQUIRE(iso);
  CHECK(iso->map == std::vector<int>{0});

  Structure cycle = digraph(3, {{0, 1}, {1, 2}, {2, 0}});
  Structure path = digraph(3, {{0, 1}, {1, 2}});
  CHECK_FALSE(isomorphic(cycle, path));
  CHECK_FALSE(oracle_isomorphic(cycle, path));
  auto self = isomorphic(cycle, cycle);
  REQUIRE(self);
  CHECK(is_embedding(cycle, cycle, self->map));
  CHECK_THROWS_AS(isomorphic(cycle, Structure(sig_of("sig b { rel S/2 }"), 3)), Error);
}

TEST_CASE("canonical ids are invariant and separate classes") {
  Structure m = digraph(4, {{0, 1}, {1, 2}, {2, 0}, {3, 3}, {0, 3}});
  std::vector<int> perm = {0, 1, 2, 3};
  const IsoClassId id = canonicalize(m);
  do {
    CHECK(canonicalize(m.relabel(perm)) == id);
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(canonicalize(digraph(3, {{0, 1}, {1, 2}, {2, 0}})) != canonicalize(digraph(3, {{0, 1}, {1, 2}})));
}

TEST_CASE("16 digraphs on two nodes fall into 10 classes") {
  auto all = enumerate_structures(digraph_sig(), 2);
  // Oracle: partition by pairwise isomorphism over all bijections.
  std::vector<int> cls(all.size(), -1);
  int classes = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (cls[i] >= 0) continue;
    cls[i] = classes;
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (cls[j] < 0 && oracle_isomorphic(all[i], all[j])) cls[j] = classes;
    }
    ++classes;
  }
  CHECK(classes == 10);
  std::set<IsoClassId> ids;
  for (std::size_t i = 0; i < all.size(); ++i) {
    ids.insert(canonicalize(all[i]));
    for (std::size_t j = 0; j < all.size(); ++j) {
      CHECK((canonicalize(all[i]) == canonicalize(all[j])) == (cls[i] == cls[j]));
    }
  }
  CHECK(ids.size() == 10);
  CHECK(iso_representatives(digraph_sig(), 2).size() == 10);
}

TEST_CASE("iso representatives on three nodes agree with the brute-force partition") {
  auto all = enumerate_structures(digraph_sig(), 3);
  std::vector<Structure> reps;
  for (const auto& m : all) {
    if (std::none_of(reps.begin(), reps.end(), [&](const Structure& r) { return oracle_isomorphic(r, m); })) {
      reps.push_back(m);
    }
  }
  CHECK(reps.size() == 104);
  CHECK(iso_representatives(digraph_sig(), 3).size() == reps.size());
}

TEST_CASE("canonical ids with functions and constants") {
  auto sig = sig_of("sig u { fun f/1; const c }");
  auto all = enumerate_structures(sig, 3);
  std::vector<Structure> reps;
  for (const auto& m : all) {
    if (std::none_of(reps.begin(), reps.end(), [&](const Structure& r) { return oracle_isomorphic(r, m); })) {
      reps.push_back(m);
    }
  }
  std::set<IsoClassId> ids;
  for (const auto& m : all) ids.insert(canonicalize(m));
  CHECK(ids.size() == reps.size());
}

TEST_CASE("embeddings") {
  Structure edge = digraph(2, {{0, 1}});
  Structure path = digraph(3, {{0, 1}, {1, 2}});
  int count = 0;
  for_each_embedding(edge, path, [&](std::span<const int>) {
    ++count;
    return true;
  });
  CHECK(count == 2);
  CHECK_FALSE(is_embedding(edge, path, std::vector<int>{0, 2}));
  CHECK(find_embedding(digraph(2, {}), path) == std::vector<int>{0, 2});
}

TEST_CASE("text format round trip") {
  const std::string text =
      "sig mixed { rel R/2; rel P/1; fun f/1; const c }\n"
      "structure w over mixed { dom = {a,b}; R = {(a,b)}; P = {b}; f = {a->b, b->b}; c = a }\n";
  Document doc = parse_document(text);
  REQUIRE(doc.structures.size() == 1);
  const Structure& m = doc.structures[0].structure;
  CHECK(m.holds(0, std::vector<int>{0, 1}));
  CHECK(m.apply(0, std::vector<int>{0}) == 1);
  CHECK(m.constant(0) == 0);
  Document again = parse_document(to_text(m.signature()) + "\n" + to_text(m, "w"));
  CHECK(same_interpretation(again.structures[0].structure, m));
  CHECK(again.structures[0].structure.elements() == m.elements());
}

TEST_CASE("text format errors") {
  CHECK_THROWS_AS(parse_document("sig s { rel R/2 }\nstructure w over s { dom = {a}; R = {(a,b)} }"), Error);
  CHECK_THROWS_AS(parse_document("sig s { rel R/2 }\nstructure w over s { dom = {}; R = {} }"), Error);
  CHECK_THROWS_AS(parse_document("sig s { rel R/2 }\nstructure w over s { dom = {a}; R = {(a)} }"), Error);
  try {
    parse_document("sig s { rel R/2 \nstructure");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() >= 1);
  }
}
