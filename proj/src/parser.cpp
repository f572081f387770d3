#include "falsilab/parser.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "falsilab/error.hpp"
#include "lexer.hpp"

namespace falsilab {

namespace {

using detail::Lexer;
using detail::Token;

struct RawTerm {
  std::string name;
  bool applied = false;
  std::vector<RawTerm> args;
  Token at;
};

struct RawFormula {
  Formula::Kind kind = Formula::Kind::True;
  std::string symbol;
  Token at;
  std::vector<RawTerm> terms;
  std::vector<RawFormula> children;
  std::vector<std::string> vars;
  int split = -1;  // position of ';' inside an atom's argument list
};

bool is_keyword(const std::string& s) {
  return s == "forall" || s == "exists" || s == "true" || s == "false";
}

class RawParser {
 public:
  RawParser(Lexer& lex, bool allow_split) : lex_(lex), allow_split_(allow_split) {}

  RawFormula formula() {
    if (lex_.is_ident("forall") || lex_.is_ident("exists")) return quantifier();
    return iff();
  }

 private:
  RawFormula quantifier() {
    RawFormula q;
    q.at = lex_.peek();
    q.kind = lex_.next().text == "forall" ? Formula::Kind::Forall : Formula::Kind::Exists;
    do {
      const Token at = lex_.peek();
      std::string v = lex_.expect_ident("variable");
      if (is_keyword(v)) lex_.fail_at(at, "keyword used as variable");
      q.vars.push_back(v);
    } while (lex_.accept(","));
    lex_.expect(".");
    q.children.push_back(formula());
    return q;
  }

  RawFormula iff() {
    RawFormula left = imp();
    while (lex_.is("<->")) {
      RawFormula node;
      node.at = lex_.next();
      node.kind = Formula::Kind::Iff;
      node.children.push_back(std::move(left));
      node.children.push_back(operand_or_quant(&RawParser::imp));
      left = std::move(node);
    }
    return left;
  }

  RawFormula imp() {
    RawFormula left = disj();
    if (lex_.is("->")) {
      RawFormula node;
      node.at = lex_.next();
      node.kind = Formula::Kind::Implies;
      node.children.push_back(std::move(left));
      node.children.push_back(operand_or_quant(&RawParser::imp));
      return node;
    }
    return left;
  }

  RawFormula disj() { return nary(Formula::Kind::Or, "|", &RawParser::conj); }
  RawFormula conj() { return nary(Formula::Kind::And, "&", &RawParser::unary); }

  // A quantifier may appear as the last operand of a binary connective and
  // then extends as far right as possible.
  RawFormula operand_or_quant(RawFormula (RawParser::*next)()) {
    if (lex_.is_ident("forall") || lex_.is_ident("exists")) return quantifier();
    return (this->*next)();
  }

  RawFormula nary(Formula::Kind kind, std::string_view op, RawFormula (RawParser::*next)()) {
    RawFormula first = (this->*next)();
    if (!lex_.is(op)) return first;
    RawFormula node;
    node.kind = kind;
    node.at = first.at;
    node.children.push_back(std::move(first));
    while (lex_.accept(op)) node.children.push_back(operand_or_quant(next));
    return node;
  }

  RawFormula unary() {
    if (lex_.is("!")) {
      RawFormula node;
      node.at = lex_.next();
      node.kind = Formula::Kind::Not;
      node.children.push_back(unary());
      return node;
    }
    if (lex_.is_ident("forall") || lex_.is_ident("exists")) return quantifier();
    if (lex_.accept("(")) {
      RawFormula inner = formula();
      lex_.expect(")");
      return inner;
    }
    if (lex_.is_ident("true") || lex_.is_ident("false")) {
      RawFormula node;
      node.at = lex_.peek();
      node.kind = lex_.next().text == "true" ? Formula::Kind::True : Formula::Kind::False;
      return node;
    }
    return atom();
  }

  RawTerm term(bool top_atom, int* split) {
    RawTerm t;
    t.at = lex_.peek();
    t.name = lex_.expect_ident("term");
    if (is_keyword(t.name)) lex_.fail_at(t.at, "unexpected keyword");
    if (lex_.accept("(")) {
      t.applied = true;
      while (true) {
        t.args.push_back(term(false, nullptr));
        if (lex_.accept(",")) continue;
        if (top_atom && allow_split_ && split && *split < 0 && lex_.is(";")) {
          lex_.next();
          *split = static_cast<int>(t.args.size());
          continue;
        }
        break;
      }
      lex_.expect(")");
    }
    return t;
  }

  RawFormula atom() {
    RawFormula node;
    node.at = lex_.peek();
    if (node.at.kind != Token::Kind::Ident) lex_.fail("expected a formula");
    int split = -1;
    RawTerm lhs = term(true, &split);
    if (lex_.is("=") || lex_.is("!=")) {
      if (split >= 0) lex_.fail("';' is only allowed in relation atoms");
      bool negated = lex_.next().text == "!=";
      RawFormula eq;
      eq.at = node.at;
      eq.kind = Formula::Kind::Equal;
      eq.terms.push_back(std::move(lhs));
      eq.terms.push_back(term(false, nullptr));
      if (!negated) return eq;
      node.kind = Formula::Kind::Not;
      node.children.push_back(std::move(eq));
      return node;
    }
    if (!lhs.applied) lex_.fail_at(node.at, "expected an atom, '=' or '!='");
    node.kind = Formula::Kind::Atom;
    node.symbol = lhs.name;
    node.terms = std::move(lhs.args);
    node.split = split;
    return node;
  }

  Lexer& lex_;
  bool allow_split_;
};

// Resolves names against (or into) a signature and renames bound variables.
class Resolver {
 public:
  Resolver(Signature& sig, bool may_extend, bool free_as_constants)
      : sig_(sig), may_extend_(may_extend), free_as_constants_(free_as_constants) {}

  Formula run(const RawFormula& raw) {
    collect_free(raw);
    return resolve(raw);
  }

  std::vector<std::string> free_names() const { return {free_.begin(), free_.end()}; }

 private:
  [[noreturn]] static void fail(ErrorKind kind, const Token& at, const std::string& message) {
    throw Error(kind, message + " at line " + std::to_string(at.line) + ", column " + std::to_string(at.column));
  }

  bool bound(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (it->count(name)) return true;
    }
    return false;
  }

  void collect_free_term(const RawTerm& t, std::vector<std::set<std::string>>& scopes) {
    if (!t.applied) {
      bool is_bound = std::any_of(scopes.begin(), scopes.end(), [&](const auto& s) { return s.count(t.name) > 0; });
      if (!is_bound && !sig_.constant_index(t.name)) free_.insert(t.name);
      return;
    }
    for (const auto& a : t.args) collect_free_term(a, scopes);
  }

  void collect_free(const RawFormula& f) {
    std::vector<std::set<std::string>> scopes;
    std::function<void(const RawFormula&)> go = [&](const RawFormula& g) {
      for (const auto& t : g.terms) collect_free_term(t, scopes);
      if (g.kind == Formula::Kind::Forall || g.kind == Formula::Kind::Exists) {
        scopes.emplace_back(g.vars.begin(), g.vars.end());
        go(g.children.front());
        scopes.pop_back();
        return;
      }
      for (const auto& c : g.children) go(c);
    };
    go(f);
  }

  std::string fresh() {
    while (true) {
      std::string name = "x" + std::to_string(counter_++);
      if (!free_.count(name)) return name;
    }
  }

  Term resolve_term(const RawTerm& t) {
    if (!t.applied) {
      for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
        auto found = it->find(t.name);
        if (found != it->end()) return Term::var(found->second);
      }
      if (sig_.constant_index(t.name)) return Term::constant(t.name);
      if (sig_.relation_index(t.name) || sig_.function_index(t.name)) {
        fail(ErrorKind::Arity, t.at, "symbol '" + t.name + "' used without arguments");
      }
      if (free_as_constants_ && may_extend_) {
        sig_.add_constant(t.name);
        return Term::constant(t.name);
      }
      return Term::var(t.name);
    }
    const int arity = static_cast<int>(t.args.size());
    if (auto f = sig_.function_index(t.name)) {
      if (sig_.functions()[*f].arity != arity) {
        fail(ErrorKind::Arity, t.at, "function '" + t.name + "' expects " + std::to_string(sig_.functions()[*f].arity) + " arguments");
      }
    } else if (sig_.relation_index(t.name) || sig_.constant_index(t.name)) {
      fail(ErrorKind::Arity, t.at, "'" + t.name + "' is not a function symbol");
    } else if (may_extend_) {
      sig_.add_function(t.name, arity);
    } else {
      fail(ErrorKind::UnknownSymbol, t.at, "unknown function '" + t.name + "'");
    }
    std::vector<Term> args;
    for (const auto& a : t.args) args.push_back(resolve_term(a));
    return Term::apply(t.name, std::move(args));
  }

  Formula resolve(const RawFormula& f) {
    switch (f.kind) {
      case Formula::Kind::True: return Formula::top();
      case Formula::Kind::False: return Formula::bottom();
      case Formula::Kind::Atom: {
        const int arity = static_cast<int>(f.terms.size());
        if (auto r = sig_.relation_index(f.symbol)) {
          if (sig_.relations()[*r].arity != arity) {
            fail(ErrorKind::Arity, f.at, "relation '" + f.symbol + "' expects " + std::to_string(sig_.relations()[*r].arity) + " arguments");
          }
        } else if (sig_.function_index(f.symbol) || sig_.constant_index(f.symbol)) {
          fail(ErrorKind::Arity, f.at, "'" + f.symbol + "' is not a relation symbol");
        } else if (may_extend_) {
          sig_.add_relation(f.symbol, arity);
        } else {
          fail(ErrorKind::UnknownSymbol, f.at, "unknown relation '" + f.symbol + "'");
        }
        std::vector<Term> args;
        for (const auto& t : f.terms) args.push_back(resolve_term(t));
        return Formula::atom(f.symbol, std::move(args));
      }
      case Formula::Kind::Equal:
        return Formula::equal(resolve_term(f.terms[0]), resolve_term(f.terms[1]));
      case Formula::Kind::Not: return Formula::negate(resolve(f.children[0]));
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        std::vector<Formula> parts;
        for (const auto& c : f.children) parts.push_back(resolve(c));
        return f.kind == Formula::Kind::And ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
      }
      case Formula::Kind::Implies: return Formula::implies(resolve(f.children[0]), resolve(f.children[1]));
      case Formula::Kind::Iff: return Formula::iff(resolve(f.children[0]), resolve(f.children[1]));
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        std::map<std::string, std::string> scope;
        std::vector<std::string> vars;
        for (const auto& v : f.vars) {
          if (sig_.has_symbol(v)) fail(ErrorKind::Syntax, f.at, "'" + v + "' is a symbol, not a variable");
          if (scope.count(v)) fail(ErrorKind::Syntax, f.at, "variable '" + v + "' bound twice");
          scope[v] = fresh();
          vars.push_back(scope[v]);
        }
        scopes_.push_back(std::move(scope));
        Formula body = resolve(f.children[0]);
        scopes_.pop_back();
        return Formula::quantify(f.kind, std::move(vars), std::move(body));
      }
    }
    return Formula::top();
  }

  Signature& sig_;
  bool may_extend_;
  bool free_as_constants_;
  std::set<std::string> free_;
  std::vector<std::map<std::string, std::string>> scopes_;
  int counter_ = 0;
};

RawFormula parse_raw(Lexer& lex, bool allow_split) {
  RawParser parser(lex, allow_split);
  RawFormula f = parser.formula();
  if (!lex.at_end()) lex.fail("unexpected trailing input");
  return f;
}

Formula parse_with(std::string_view text, Signature& sig, bool extend, bool free_as_constants) {
  Lexer lex(text, false);
  RawFormula raw = parse_raw(lex, false);
  Resolver resolver(sig, extend, free_as_constants);
  return resolver.run(raw);
}

PartitionedFormula partitioned_with(std::string_view text, Signature& sig, bool extend) {
  Lexer lex(text, false);
  // General form: vars ';' vars ':' formula.
  std::size_t i = 0;
  bool general = false;
  while (lex.peek(i).kind == Token::Kind::Ident && !is_keyword(lex.peek(i).text)) {
    if (lex.is(",", i + 1)) {
      i += 2;
      continue;
    }
    general = lex.is(";", i + 1) || (i == 0 && lex.is(";", 0));
    break;
  }
  if (lex.is(";", 0)) general = true;
  PartitionedFormula pf{Formula::top(), {}, {}};
  RawFormula raw;
  if (general) {
    while (!lex.is(";")) {
      pf.objects.push_back(lex.expect_ident("object variable"));
      if (!lex.accept(",")) break;
    }
    lex.expect(";");
    while (!lex.is(":")) {
      pf.params.push_back(lex.expect_ident("parameter variable"));
      if (!lex.accept(",")) break;
    }
    lex.expect(":");
    raw = parse_raw(lex, false);
  } else {
    raw = parse_raw(lex, true);
    if (raw.kind != Formula::Kind::Atom || raw.split < 0) {
      throw Error(ErrorKind::Syntax, "partitioned formula must be R(x;y) or 'x ; y : formula'");
    }
    for (std::size_t k = 0; k < raw.terms.size(); ++k) {
      const RawTerm& t = raw.terms[k];
      if (t.applied || sig.has_symbol(t.name)) {
        throw Error(ErrorKind::Syntax, "shorthand R(x;y) needs plain variables");
      }
      (static_cast<int>(k) < raw.split ? pf.objects : pf.params).push_back(t.name);
    }
  }
  Resolver resolver(sig, extend, false);
  pf.formula = resolver.run(raw);
  validate_partition(pf);
  return pf;
}

}  // namespace

void validate_partition(const PartitionedFormula& pf) {
  std::set<std::string> seen;
  for (const auto* list : {&pf.objects, &pf.params}) {
    for (const auto& v : *list) {
      if (!seen.insert(v).second) {
        throw Error(ErrorKind::InvalidArgument, "variable '" + v + "' repeated in partition");
      }
    }
  }
  for (const auto& v : free_variables(pf.formula)) {
    if (!seen.count(v)) throw Error(ErrorKind::UnboundVariable, "free variable '" + v + "' not in partition");
  }
}

Formula parse_formula(std::string_view text, const Signature& sig) {
  Signature copy = sig;
  return parse_with(text, copy, false, false);
}

Formula parse_sentence(std::string_view text, const Signature& sig) {
  Formula f = parse_formula(text, sig);
  auto free = free_variables(f);
  if (!free.empty()) throw Error(ErrorKind::OpenFormula, "sentence has free variable '" + free.front() + "'");
  return f;
}

Formula parse_formula_into(std::string_view text, Signature& sig, const ParseOptions& options) {
  return parse_with(text, sig, options.infer_signature, options.free_names_as_constants);
}

PartitionedFormula parse_partitioned(std::string_view text, const Signature& sig) {
  Signature copy = sig;
  return partitioned_with(text, copy, false);
}

PartitionedFormula parse_partitioned_into(std::string_view text, Signature& sig) {
  return partitioned_with(text, sig, true);
}

}  // namespace falsilab
