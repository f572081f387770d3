#include "falsilab/syntax.hpp"

#include <algorithm>
#include <set>

#include "falsilab/error.hpp"

namespace falsilab {

std::string SyntaxClass::prenex_class() const {
  if (quantifier_free) return "qf";
  if (pi_level < sigma_level) return "Pi" + std::to_string(pi_level);
  if (sigma_level < pi_level) return "Sigma" + std::to_string(sigma_level);
  return "Pi" + std::to_string(pi_level) + ",Sigma" + std::to_string(sigma_level);
}

Formula strip_vacuous(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Not: {
      Formula inner = strip_vacuous(f.child());
      if (inner.kind() == K::Not) return inner.child();
      return Formula::negate(std::move(inner));
    }
    case K::And:
    case K::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(strip_vacuous(c));
      return f.kind() == K::And ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    case K::Implies: return Formula::implies(strip_vacuous(f.child(0)), strip_vacuous(f.child(1)));
    case K::Iff: return Formula::iff(strip_vacuous(f.child(0)), strip_vacuous(f.child(1)));
    case K::Forall:
    case K::Exists: {
      Formula body = strip_vacuous(f.child());
      auto free = free_variables(body);
      std::vector<std::string> vars;
      for (const auto& v : f.variables()) {
        if (std::find(free.begin(), free.end(), v) != free.end() &&
            std::find(vars.begin(), vars.end(), v) == vars.end()) {
          vars.push_back(v);
        }
      }
      return Formula::quantify(f.kind(), std::move(vars), std::move(body));
    }
    default: return f;
  }
}

namespace {

struct Levels {
  int s = 0;
  int p = 0;
  bool qf = true;
};

Levels levels(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Not: {
      Levels a = levels(f.child());
      return {a.p, a.s, a.qf};
    }
    case K::And:
    case K::Or: {
      Levels out;
      for (const auto& c : f.children()) {
        Levels a = levels(c);
        out.s = std::max(out.s, a.s);
        out.p = std::max(out.p, a.p);
        out.qf = out.qf && a.qf;
      }
      return out;
    }
    case K::Implies: {
      Levels a = levels(f.child(0));
      Levels b = levels(f.child(1));
      return {std::max(a.p, b.s), std::max(a.s, b.p), a.qf && b.qf};
    }
    case K::Iff: {
      Levels a = levels(f.child(0));
      Levels b = levels(f.child(1));
      int m = std::max({a.s, a.p, b.s, b.p});
      return {m, m, a.qf && b.qf};
    }
    case K::Forall: {
      Levels a = levels(f.child());
      int p = std::max(1, std::min(a.p, a.s + 1));
      return {p + 1, p, false};
    }
    case K::Exists: {
      Levels a = levels(f.child());
      int s = std::max(1, std::min(a.s, a.p + 1));
      return {s, s + 1, false};
    }
    default: return {};
  }
}

bool conjunction_of_atoms(const Formula& f) {
  if (f.is_literal_atom()) return true;
  if (f.kind() != Formula::Kind::And) return false;
  return std::all_of(f.children().begin(), f.children().end(), conjunction_of_atoms);
}

bool uncaf_shape(const Formula& f) {
  const Formula* g = &f;
  while (g->kind() == Formula::Kind::Forall) g = &g->child();
  return g->kind() == Formula::Kind::Not && conjunction_of_atoms(g->child());
}

}  // namespace

SyntaxClass classify_formula(const Formula& f) {
  Formula g = strip_vacuous(f);
  Levels l = levels(g);
  SyntaxClass out;
  out.quantifier_free = l.qf;
  out.pi_level = l.p;
  out.sigma_level = l.s;
  out.universal = l.p <= 1;
  out.existential = l.s <= 1;
  out.uncaf = uncaf_shape(g);
  return out;
}

SyntaxClass classify_syntax(const Formula& f) {
  auto free = free_variables(f);
  if (!free.empty()) throw Error(ErrorKind::OpenFormula, "classify_syntax: free variable '" + free.front() + "'");
  return classify_formula(f);
}

namespace {

struct Block {
  Formula::Kind kind;
  std::vector<std::string> vars;
};

struct Prenex {
  std::vector<Block> prefix;
  Formula matrix;
};

Formula::Kind dual(Formula::Kind k) {
  return k == Formula::Kind::Forall ? Formula::Kind::Exists : Formula::Kind::Forall;
}

void push_block(std::vector<Block>& prefix, Formula::Kind kind, const std::vector<std::string>& vars) {
  if (vars.empty()) return;
  if (!prefix.empty() && prefix.back().kind == kind) {
    prefix.back().vars.insert(prefix.back().vars.end(), vars.begin(), vars.end());
  } else {
    prefix.push_back({kind, vars});
  }
}

class Prenexer {
 public:
  explicit Prenexer(const Formula& f) : reserved_(all_variable_names(f)) {
    for (const auto& v : free_variables(f)) used_.insert(v);
  }

  Prenex run(const Formula& f) {
    if (is_quantifier_free(f)) return {{}, f};
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Not: {
        Prenex a = run(f.child());
        for (auto& b : a.prefix) b.kind = dual(b.kind);
        return {std::move(a.prefix), Formula::negate(a.matrix)};
      }
      case K::And:
      case K::Or: {
        std::vector<Prenex> parts;
        for (const auto& c : f.children()) parts.push_back(run(c));
        return combine(f.kind(), std::move(parts));
      }
      case K::Implies: {
        std::vector<Prenex> parts;
        parts.push_back(run(Formula::negate(f.child(0))));
        parts.push_back(run(f.child(1)));
        return combine(K::Or, std::move(parts));
      }
      case K::Iff: {
        Formula a = f.child(0);
        Formula b = f.child(1);
        Formula expanded = Formula::conj({Formula::disj({Formula::negate(a), b}), Formula::disj({Formula::negate(b), a})});
        return run(expanded);
      }
      case K::Forall:
      case K::Exists: {
        auto body_free = free_variables(f.child());
        std::map<std::string, Term> renames;
        std::vector<std::string> vars;
        for (const auto& v : f.variables()) {
          if (std::find(body_free.begin(), body_free.end(), v) == body_free.end()) continue;
          std::string name = v;
          if (used_.count(name)) {
            name = fresh();
            renames[v] = Term::var(name);
          }
          used_.insert(name);
          vars.push_back(name);
        }
        Formula body = renames.empty() ? f.child() : substitute(f.child(), renames);
        Prenex inner = run(body);
        std::vector<Block> prefix;
        push_block(prefix, f.kind(), vars);
        for (auto& b : inner.prefix) push_block(prefix, b.kind, b.vars);
        return {std::move(prefix), std::move(inner.matrix)};
      }
      default: return {{}, f};
    }
  }

 private:
  std::string fresh() {
    for (int k = 0;; ++k) {
      std::string name = "x" + std::to_string(k);
      if (!used_.count(name) && !reserved_.count(name)) return name;
    }
  }

  static Prenex combine(Formula::Kind op, std::vector<Prenex> parts) {
    std::vector<Block> prefix;
    std::vector<std::size_t> head(parts.size(), 0);
    while (true) {
      // Among children with remaining blocks, pick the quantifier kind whose
      // child has the most blocks left; pull every head block of that kind.
      std::size_t best_remaining = 0;
      Formula::Kind kind = Formula::Kind::Forall;
      bool any = false;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        std::size_t remaining = parts[i].prefix.size() - head[i];
        if (remaining == 0) continue;
        if (!any || remaining > best_remaining ||
            (remaining == best_remaining && !prefix.empty() && parts[i].prefix[head[i]].kind == prefix.back().kind)) {
          best_remaining = remaining;
          kind = parts[i].prefix[head[i]].kind;
        }
        any = true;
      }
      if (!any) break;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (head[i] < parts[i].prefix.size() && parts[i].prefix[head[i]].kind == kind) {
          push_block(prefix, kind, parts[i].prefix[head[i]].vars);
          ++head[i];
        }
      }
    }
    std::vector<Formula> matrices;
    for (auto& p : parts) matrices.push_back(std::move(p.matrix));
    Formula matrix = op == Formula::Kind::And ? Formula::conj(std::move(matrices)) : Formula::disj(std::move(matrices));
    return {std::move(prefix), std::move(matrix)};
  }

  std::set<std::string> reserved_;
  std::set<std::string> used_;
};

}  // namespace

Formula to_prenex(const Formula& f) {
  if (is_quantifier_free(f)) return f;
  Prenexer p(f);
  Prenex result = p.run(f);
  Formula out = result.matrix;
  for (auto it = result.prefix.rbegin(); it != result.prefix.rend(); ++it) {
    out = Formula::quantify(it->kind, it->vars, std::move(out));
  }
  return out;
}

}  // namespace falsilab
