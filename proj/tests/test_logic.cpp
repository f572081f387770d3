#include <doctest.h>

#include <functional>
#include <random>

#include "falsilab/eval.hpp"
#include "falsilab/syntax.hpp"
#include "support.hpp"

using namespace falsilab;
using namespace testing;

namespace {

SignaturePtr graph_p() {
  static const SignaturePtr sig = make_signature(Signature("gp").add_relation("edge", 2).add_relation("P", 1));
  return sig;
}

// Direct recursive semantics over the syntax tree (relational, variables only).
bool oracle_eval(const Structure& m, const Formula& f, std::map<std::string, int>& env) {
  using K = Formula::Kind;
  auto value = [&](const Term& t) { return env.at(t.name); };
  switch (f.kind()) {
    case K::True: return true;
    case K::False: return false;
    case K::Atom: {
      std::vector<int> args;
      for (const auto& t : f.terms()) args.push_back(value(t));
      return m.holds(*m.signature().relation_index(f.symbol()), args);
    }
    case K::Equal: return value(f.terms()[0]) == value(f.terms()[1]);
    case K::Not: return !oracle_eval(m, f.child(), env);
    case K::And:
      for (const auto& c : f.children()) {
        if (!oracle_eval(m, c, env)) return false;
      }
      return true;
    case K::Or:
      for (const auto& c : f.children()) {
        if (oracle_eval(m, c, env)) return true;
      }
      return false;
    case K::Implies: return !oracle_eval(m, f.child(0), env) || oracle_eval(m, f.child(1), env);
    case K::Iff: return oracle_eval(m, f.child(0), env) == oracle_eval(m, f.child(1), env);
    case K::Forall:
    case K::Exists: {
      const bool all = f.kind() == K::Forall;
      std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
        if (i == f.variables().size()) return oracle_eval(m, f.child(), env);
        const std::string& v = f.variables()[i];
        auto saved = env.find(v) == env.end() ? std::optional<int>{} : std::optional<int>{env[v]};
        bool result = all;
        for (int e = 0; e < m.size(); ++e) {
          env[v] = e;
          const bool r = go(i + 1);
          if (all && !r) { result = false; break; }
          if (!all && r) { result = true; break; }
        }
        if (saved) env[v] = *saved; else env.erase(v);
        return result;
      };
      return go(0);
    }
  }
  return false;
}

bool oracle_sentence(const Structure& m, const Formula& f) {
  std::map<std::string, int> env;
  return oracle_eval(m, f, env);
}

std::size_t prefix_length(const Formula& f) {
  if (f.kind() != Formula::Kind::Forall && f.kind() != Formula::Kind::Exists) return 0;
  return f.variables().size() + prefix_length(f.child());
}

Formula random_formula(std::mt19937_64& rng, int depth) {
  const std::vector<std::string> vars = {"x", "y", "z"};
  auto var = [&] { return Term::var(vars[rng() % vars.size()]); };
  if (depth == 0) {
    switch (rng() % 3) {
      case 0: return Formula::atom("edge", {var(), var()});
      case 1: return Formula::atom("P", {var()});
      default: return Formula::equal(var(), var());
    }
  }
  switch (rng() % 7) {
    case 0: return Formula::negate(random_formula(rng, depth - 1));
    case 1: return Formula::conj({random_formula(rng, depth - 1), random_formula(rng, depth - 1)});
    case 2: return Formula::disj({random_formula(rng, depth - 1), random_formula(rng, depth - 1)});
    case 3: return Formula::implies(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 4: return Formula::iff(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 5: return Formula::forall({vars[rng() % 3]}, random_formula(rng, depth - 1));
    default: return Formula::exists({vars[rng() % 3]}, random_formula(rng, depth - 1));
  }
}

Formula close(const Formula& f) {
  auto free = free_variables(f);
  return free.empty() ? f : Formula::forall(free, f);
}

}  // namespace

TEST_CASE("parsing the displayed sentences") {
  Signature sig("digraph");
  sig.add_relation("edge", 2);
  Formula a1 = parse_sentence("forall x0. !edge(x0,x0)", sig);
  CHECK(a1.kind() == Formula::Kind::Forall);
  CHECK(a1.child().kind() == Formula::Kind::Not);
  CHECK(to_string(a1) == "forall x0. !edge(x0,x0)");
  Formula taut = parse_sentence("forall x,y. x = y | !(x = y)", sig);
  CHECK(taut.child().kind() == Formula::Kind::Or);
  Signature swans;
  swans.add_relation("S", 1).add_relation("W", 1);
  Formula swan = parse_sentence("forall x0. !(S(x0) & !W(x0))", swans);
  CHECK(to_string(swan) == "forall x0. !(S(x0) & !W(x0))");
  CHECK(parse_sentence(to_string(swan), swans) == swan);
}

TEST_CASE("parser errors") {
  Signature sig;
  sig.add_relation("edge", 2);
  CHECK_THROWS_AS(parse_formula("edge(x)", sig), Error);
  CHECK_THROWS_AS(parse_formula("other(x)", sig), Error);
  CHECK_THROWS_AS(parse_sentence("edge(x,y)", sig), Error);
  CHECK_THROWS_AS(parse_formula("forall x. (edge(x,x)", sig), ParseError);
  Signature inferred;
  ParseOptions options;
  options.infer_signature = true;
  CHECK_THROWS_AS(parse_formula_into("R(x) & R(x,y)", inferred, options), Error);
}

TEST_CASE("printing round trips on random formulas") {
  std::mt19937_64 rng(11);
  Signature sig = *graph_p();
  for (int i = 0; i < 200; ++i) {
    Formula f = close(random_formula(rng, 4));
    Formula g = parse_sentence(to_string(f), sig);
    CHECK(to_string(g) == to_string(parse_sentence(to_string(g), sig)));
    for (const auto& m : {digraph_from_mask(2, 5), digraph_from_mask(2, 6)}) {
      Structure mp(graph_p(), 2);
      for (const auto& t : m.tuples(0)) mp.set_relation(0, t, true);
      CHECK(oracle_sentence(mp, f) == oracle_sentence(mp, g));
    }
  }
}

TEST_CASE("syntactic classes") {
  Signature sig;
  ParseOptions options;
  options.infer_signature = true;
  auto cls = [&](const std::string& text) { return classify_syntax(parse_formula_into(text, sig, options)); };
  for (int n = 1; n <= 4; ++n) {
    auto c = classify_syntax(acyclicity_axiom("edge", n));
    CHECK(c.universal);
    CHECK(c.uncaf);
  }
  auto swan = cls("forall x0. !(S(x0) & !W(x0))");
  CHECK(swan.universal);
  CHECK_FALSE(swan.uncaf);
  auto complete = cls("forall x,y. weak(x,y) | weak(y,x)");
  CHECK(complete.universal);
  CHECK_FALSE(complete.uncaf);
  CHECK(cls("exists x. P(x)").existential);
  CHECK_FALSE(cls("exists x. P(x)").universal);
  CHECK(cls("forall x. exists y. edge(x,y)").pi_level == 2);
  CHECK(cls("forall x. exists y. edge(x,y)").prenex_class() == "Pi2");
  CHECK(classify_formula(parse_formula_into("P(c) & !P(c)", sig, options)).quantifier_free);
  CHECK(cls("forall x. forall y. !(edge(x,y) & x = y)").uncaf);
  // A vacuous quantifier does not raise the level.
  CHECK(cls("forall x. exists y. P(x)").universal);
  CHECK_THROWS_AS(classify_syntax(parse_formula_into("P(x)", sig, options)), Error);
}

TEST_CASE("evaluation on the displayed examples") {
  Structure cycle = digraph(3, {{0, 1}, {1, 2}, {2, 0}});
  CHECK_FALSE(evaluate(cycle, acyclicity_axiom("edge", 3)));
  CHECK(evaluate(cycle, acyclicity_axiom("edge", 1)));
  CHECK(evaluate(cycle, acyclicity_axiom("edge", 2)));
  CHECK(evaluate(cycle, parse_sentence("forall x. x = x", cycle.signature())));
  Formula open = parse_formula("edge(x,y)", cycle.signature());
  CHECK(evaluate(cycle, open, {{"x", 0}, {"y", 1}}));
  CHECK_THROWS_AS(evaluate(cycle, open, {{"x", 0}}), Error);
}

TEST_CASE("evaluation with functions and constants") {
  auto sig = make_signature(parse_signature("sig s { fun f/1; const c }"));
  Structure m(sig, 3);
  for (int e = 0; e < 3; ++e) m.set_function(0, std::vector<int>{e}, (e + 1) % 3);
  m.set_constant(0, 0);
  CHECK(evaluate(m, parse_sentence("f(f(f(c))) = c", *sig)));
  CHECK(evaluate(m, parse_sentence("forall x. f(x) != x", *sig)));
  CHECK_FALSE(evaluate(m, parse_sentence("exists x. f(x) = c & x = c", *sig)));
}

TEST_CASE("compiled evaluation agrees with the recursive oracle") {
  std::mt19937_64 rng(5);
  std::vector<Structure> models;
  for (int n = 1; n <= 3; ++n) {
    for (int k = 0; k < 6; ++k) {
      Structure m(graph_p(), n);
      for (int a = 0; a < n; ++a) {
        if (rng() & 1U) m.set_relation(1, std::vector<int>{a}, true);
        for (int b = 0; b < n; ++b) {
          if (rng() % 3 == 0) m.set_relation(0, std::vector<int>{a, b}, true);
        }
      }
      models.push_back(m);
    }
  }
  for (int i = 0; i < 300; ++i) {
    Formula f = close(random_formula(rng, 5));
    for (const auto& m : models) {
      const bool want = oracle_sentence(m, f);
      CHECK(evaluate(m, f) == want);
      // The oracle is exponential in the prefix length.
      Formula pf = to_prenex(f);
      CHECK((prefix_length(pf) <= 9 ? oracle_sentence(m, pf) : evaluate(m, pf)) == want);
      CHECK(oracle_sentence(m, to_nnf(f)) == want);
      CHECK(oracle_sentence(m, miniscope(to_nnf(f))) == want);
      CHECK(oracle_sentence(m, strip_vacuous(f)) == want);
    }
  }
}

TEST_CASE("prenex forms") {
  Signature sig;
  ParseOptions options;
  options.infer_signature = true;
  Formula f = parse_formula_into("forall x. !(exists y. R(x,y))", sig, options);
  CHECK(to_string(to_prenex(f)) == "forall x0,x1. !R(x0,x1)");
  Formula g = parse_formula_into("forall x,y. (exists t. Q(x,y,t)) | (exists t. Q(y,x,t))", sig, options);
  Formula pg = to_prenex(g);
  CHECK(classify_syntax(pg).prenex_class() == "Pi2");
  CHECK(pg.kind() == Formula::Kind::Forall);
  CHECK(pg.child().kind() == Formula::Kind::Exists);
  CHECK(is_quantifier_free(pg.child().child()));
  Formula qf = parse_formula_into("R(a,b) -> !Q(a,b,a)", sig, options);
  CHECK(to_prenex(qf) == qf);
}

TEST_CASE("three-valued evaluation") {
  auto sig = digraph_sig();
  PartialStructure p(sig, 2);
  p.set_relation(0, std::vector<int>{0, 0}, Truth::False);
  p.set_relation(0, std::vector<int>{0, 1}, Truth::True);
  p.set_relation(0, std::vector<int>{1, 0}, Truth::Unknown);
  p.set_relation(0, std::vector<int>{1, 1}, Truth::False);
  CHECK(evaluate3(p, acyclicity_axiom("edge", 1)) == Truth::True);
  CHECK(evaluate3(p, acyclicity_axiom("edge", 2)) == Truth::Unknown);
  CHECK(evaluate3(p, parse_sentence("exists x,y. edge(x,y)", *sig)) == Truth::True);
  p.set_relation(0, std::vector<int>{1, 0}, Truth::True);
  CHECK(evaluate3(p, acyclicity_axiom("edge", 2)) == Truth::False);
}

TEST_CASE("three-valued evaluation is monotone under completion") {
  std::mt19937_64 rng(9);
  auto sig = graph_p();
  for (int i = 0; i < 150; ++i) {
    Formula f = close(random_formula(rng, 4));
    PartialStructure p(sig, 2);
    std::vector<std::pair<int, std::vector<int>>> unknown;
    for (int a = 0; a < 2; ++a) {
      const int u = static_cast<int>(rng() % 3);
      p.set_relation(1, std::vector<int>{a}, static_cast<Truth>(u));
      if (u == 2) unknown.push_back({1, {a}});
      for (int b = 0; b < 2; ++b) {
        const int t = static_cast<int>(rng() % 3);
        p.set_relation(0, std::vector<int>{a, b}, static_cast<Truth>(t));
        if (t == 2) unknown.push_back({0, {a, b}});
      }
    }
    const Truth partial = evaluate3(p, f);
    bool seen_true = false, seen_false = false;
    for (unsigned mask = 0; mask < (1U << unknown.size()); ++mask) {
      Structure m(sig, 2);
      for (int r = 0; r < 2; ++r) {
        for (const auto& t : (r == 0 ? std::vector<std::vector<int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}
                                     : std::vector<std::vector<int>>{{0}, {1}})) {
          if (p.holds(r, t) == Truth::True) m.set_relation(r, t, true);
        }
      }
      for (std::size_t k = 0; k < unknown.size(); ++k) {
        if (mask >> k & 1U) m.set_relation(unknown[k].first, unknown[k].second, true);
      }
      (oracle_sentence(m, f) ? seen_true : seen_false) = true;
    }
    if (partial == Truth::True) CHECK_FALSE(seen_false);
    if (partial == Truth::False) CHECK_FALSE(seen_true);
  }
}

TEST_CASE("theories") {
  Theory t = load_theory(corpus_path("acyclic.fot"));
  CHECK(t.sentences.size() == 2);
  CHECK(t.is_universal());
  CHECK(t.holds_in(digraph(3, {{0, 1}, {1, 2}})));
  CHECK_FALSE(t.holds_in(digraph(3, {{0, 1}, {1, 2}, {2, 0}})));
  Theory again = parse_theory(to_text(t));
  CHECK(again.sentences == t.sentences);
  CHECK_THROWS_AS(parse_theory("sig s { rel R/1 }\nR(x)"), Error);
}
