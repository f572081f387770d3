#include "falsilab/formula.hpp"

#include <algorithm>
#include <functional>

#include "falsilab/error.hpp"

namespace falsilab {

Formula Formula::make(Node node) { return Formula(std::make_shared<const Node>(std::move(node))); }

Formula Formula::top() {
  static const Formula t = make({Kind::True, {}, {}, {}, {}});
  return t;
}

Formula Formula::bottom() {
  static const Formula f = make({Kind::False, {}, {}, {}, {}});
  return f;
}

Formula Formula::atom(std::string relation, std::vector<Term> args) {
  return make({Kind::Atom, std::move(relation), std::move(args), {}, {}});
}

Formula Formula::equal(Term lhs, Term rhs) {
  std::vector<Term> terms;
  terms.push_back(std::move(lhs));
  terms.push_back(std::move(rhs));
  return make({Kind::Equal, {}, std::move(terms), {}, {}});
}

Formula Formula::negate(Formula f) { return make({Kind::Not, {}, {}, {std::move(f)}, {}}); }

Formula Formula::conj(std::vector<Formula> parts) {
  if (parts.empty()) return top();
  if (parts.size() == 1) return std::move(parts.front());
  return make({Kind::And, {}, {}, std::move(parts), {}});
}

Formula Formula::disj(std::vector<Formula> parts) {
  if (parts.empty()) return bottom();
  if (parts.size() == 1) return std::move(parts.front());
  return make({Kind::Or, {}, {}, std::move(parts), {}});
}

Formula Formula::implies(Formula a, Formula b) {
  return make({Kind::Implies, {}, {}, {std::move(a), std::move(b)}, {}});
}

Formula Formula::iff(Formula a, Formula b) {
  return make({Kind::Iff, {}, {}, {std::move(a), std::move(b)}, {}});
}

Formula Formula::forall(std::vector<std::string> vars, Formula body) {
  return quantify(Kind::Forall, std::move(vars), std::move(body));
}

Formula Formula::exists(std::vector<std::string> vars, Formula body) {
  return quantify(Kind::Exists, std::move(vars), std::move(body));
}

Formula Formula::quantify(Kind kind, std::vector<std::string> vars, Formula body) {
  if (kind != Kind::Forall && kind != Kind::Exists) {
    throw Error(ErrorKind::InvalidArgument, "quantify: not a quantifier kind");
  }
  if (vars.empty()) return body;
  return make({kind, {}, {}, {std::move(body)}, std::move(vars)});
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.symbol == y.symbol && x.terms == y.terms && x.vars == y.vars &&
         x.children == y.children;
}

void collect_term_variables(const Term& t, std::vector<std::string>& out) {
  if (t.kind == Term::Kind::Variable) {
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) collect_term_variables(a, out);
}

namespace {

void collect_free(const Formula& f, std::vector<std::string>& bound, std::vector<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::Atom:
    case Formula::Kind::Equal: {
      std::vector<std::string> vars;
      for (const auto& t : f.terms()) collect_term_variables(t, vars);
      for (const auto& v : vars) {
        if (std::find(bound.begin(), bound.end(), v) != bound.end()) continue;
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
      }
      return;
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      const std::size_t mark = bound.size();
      bound.insert(bound.end(), f.variables().begin(), f.variables().end());
      collect_free(f.child(), bound, out);
      bound.resize(mark);
      return;
    }
    default:
      for (const auto& c : f.children()) collect_free(c, bound, out);
  }
}

void collect_all_names(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Variable) out.insert(t.name);
  for (const auto& a : t.args) collect_all_names(a, out);
}

}  // namespace

std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound;
  std::vector<std::string> out;
  collect_free(f, bound, out);
  return out;
}

bool is_closed(const Formula& f) { return free_variables(f).empty(); }

bool is_quantifier_free(const Formula& f) {
  if (f.is_quantifier()) return false;
  return std::all_of(f.children().begin(), f.children().end(), [](const Formula& c) { return is_quantifier_free(c); });
}

std::set<std::string> all_variable_names(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    for (const auto& t : g.terms()) collect_all_names(t, out);
    out.insert(g.variables().begin(), g.variables().end());
    for (const auto& c : g.children()) go(c);
  };
  go(f);
  return out;
}

Term substitute(const Term& t, const std::map<std::string, Term>& sub) {
  if (t.kind == Term::Kind::Variable) {
    auto it = sub.find(t.name);
    return it == sub.end() ? t : it->second;
  }
  Term out = t;
  for (auto& a : out.args) a = substitute(a, sub);
  return out;
}

namespace {

Formula substitute_impl(const Formula& f, const std::map<std::string, Term>& sub, std::set<std::string>& avoid) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Atom: {
      std::vector<Term> args;
      for (const auto& t : f.terms()) args.push_back(substitute(t, sub));
      return Formula::atom(f.symbol(), std::move(args));
    }
    case Formula::Kind::Equal:
      return Formula::equal(substitute(f.terms()[0], sub), substitute(f.terms()[1], sub));
    case Formula::Kind::Not:
      return Formula::negate(substitute_impl(f.child(), sub, avoid));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(substitute_impl(c, sub, avoid));
      return f.kind() == Formula::Kind::And ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    case Formula::Kind::Implies:
      return Formula::implies(substitute_impl(f.child(0), sub, avoid), substitute_impl(f.child(1), sub, avoid));
    case Formula::Kind::Iff:
      return Formula::iff(substitute_impl(f.child(0), sub, avoid), substitute_impl(f.child(1), sub, avoid));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::map<std::string, Term> inner = sub;
      for (const auto& v : f.variables()) inner.erase(v);
      // Variables occurring in the substituted terms must not be captured.
      std::set<std::string> incoming;
      auto body_free = free_variables(f.child());
      for (const auto& [name, term] : inner) {
        if (std::find(body_free.begin(), body_free.end(), name) == body_free.end()) continue;
        std::vector<std::string> vars;
        collect_term_variables(term, vars);
        incoming.insert(vars.begin(), vars.end());
      }
      std::vector<std::string> vars;
      for (const auto& v : f.variables()) {
        if (incoming.count(v)) {
          int k = 0;
          std::string fresh;
          do {
            fresh = v + "_" + std::to_string(k++);
          } while (avoid.count(fresh) || incoming.count(fresh));
          avoid.insert(fresh);
          inner[v] = Term::var(fresh);
          vars.push_back(fresh);
        } else {
          vars.push_back(v);
        }
      }
      return Formula::quantify(f.kind(), std::move(vars), substitute_impl(f.child(), inner, avoid));
    }
  }
  return f;
}

}  // namespace

Formula substitute(const Formula& f, const std::map<std::string, Term>& sub) {
  std::set<std::string> avoid = all_variable_names(f);
  for (const auto& [name, term] : sub) {
    std::vector<std::string> vars;
    collect_term_variables(term, vars);
    avoid.insert(vars.begin(), vars.end());
  }
  return substitute_impl(f, sub, avoid);
}

std::string to_string(const Term& t) {
  if (t.kind != Term::Kind::Function) return t.name;
  std::string out = t.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) out += (i ? "," : "") + to_string(t.args[i]);
  return out + ")";
}

namespace {

int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::And: return 4;
    case Formula::Kind::Not: return 5;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: return 0;
    default: return 6;
  }
}

std::string print(const Formula& f);

std::string operand(const Formula& f, int min_prec) {
  std::string s = print(f);
  int p = precedence(f.kind());
  if (p == 0 || p < min_prec) return "(" + s + ")";
  return s;
}

std::string print(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True: return "true";
    case Formula::Kind::False: return "false";
    case Formula::Kind::Atom: {
      std::string out = f.symbol() + "(";
      for (std::size_t i = 0; i < f.terms().size(); ++i) out += (i ? "," : "") + to_string(f.terms()[i]);
      return out + ")";
    }
    case Formula::Kind::Equal: return to_string(f.terms()[0]) + " = " + to_string(f.terms()[1]);
    case Formula::Kind::Not: {
      const Formula& c = f.child();
      if (c.kind() == Formula::Kind::Atom || c.kind() == Formula::Kind::Not || c.kind() == Formula::Kind::True ||
          c.kind() == Formula::Kind::False) {
        return "!" + print(c);
      }
      return "!(" + print(c) + ")";
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      const char* sep = f.kind() == Formula::Kind::And ? " & " : " | ";
      const int p = precedence(f.kind());
      std::string out;
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) out += sep;
        // Nested same-kind operands keep their grouping explicit.
        out += operand(f.children()[i], p + 1);
      }
      return out;
    }
    case Formula::Kind::Implies:
      // Right associative.
      return operand(f.child(0), 3) + " -> " + operand(f.child(1), 2);
    case Formula::Kind::Iff:
      // Left associative.
      return operand(f.child(0), 1) + " <-> " + operand(f.child(1), 2);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::string out = f.kind() == Formula::Kind::Forall ? "forall " : "exists ";
      for (std::size_t i = 0; i < f.variables().size(); ++i) out += (i ? "," : "") + f.variables()[i];
      return out + ". " + print(f.child());
    }
  }
  return "?";
}

}  // namespace

std::string to_string(const Formula& f) { return print(f); }

std::size_t formula_size(const Formula& f) {
  std::size_t n = 1;
  for (const auto& c : f.children()) n += formula_size(c);
  return n;
}

}  // namespace falsilab
