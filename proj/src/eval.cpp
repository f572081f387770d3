#include "falsilab/eval.hpp"

#include <algorithm>
#include <set>

#include "falsilab/error.hpp"

namespace falsilab {

std::string_view to_string(Truth t) {
  switch (t) {
    case Truth::False: return "false";
    case Truth::True: return "true";
    case Truth::Unknown: return "unknown";
  }
  return "unknown";
}

PartialStructure::PartialStructure(SignaturePtr sig, std::vector<std::string> elements)
    : sig_(std::move(sig)), elements_(std::move(elements)) {
  if (elements_.empty()) throw Error(ErrorKind::EmptyDomain, "structures must have a nonempty domain");
  const int n = size();
  for (const auto& r : sig_->relations()) {
    relations_.emplace_back(tuple_count(n, r.arity), static_cast<std::uint8_t>(Truth::Unknown));
  }
  for (const auto& f : sig_->functions()) functions_.emplace_back(tuple_count(n, f.arity), -1);
  constants_.assign(sig_->constants().size(), -1);
}

PartialStructure::PartialStructure(SignaturePtr sig, int n)
    : PartialStructure(sig, [n] {
        if (n < 1) throw Error(ErrorKind::EmptyDomain, "structures must have a nonempty domain");
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
        return names;
      }()) {}

PartialStructure::PartialStructure(const Structure& m) : PartialStructure(m.signature_ptr(), m.elements()) {
  for (std::size_t r = 0; r < relations_.size(); ++r) {
    const auto& table = m.relation_table(static_cast<int>(r));
    for (std::size_t t = 0; t < table.size(); ++t) relations_[r][t] = table[t];
  }
  for (std::size_t f = 0; f < functions_.size(); ++f) functions_[f] = m.function_table(static_cast<int>(f));
  for (std::size_t c = 0; c < constants_.size(); ++c) constants_[c] = m.constant(static_cast<int>(c));
}

std::optional<int> PartialStructure::find_element(std::string_view name) const {
  for (int i = 0; i < size(); ++i) {
    if (elements_[i] == name) return i;
  }
  return std::nullopt;
}

void PartialStructure::set_relation(int rel, std::span<const int> args, Truth value) {
  if (static_cast<int>(args.size()) != sig_->relations().at(rel).arity) {
    throw Error(ErrorKind::Arity, "wrong tuple length for " + sig_->relations()[rel].name);
  }
  relations_[rel][encode_tuple(args, size())] = static_cast<std::uint8_t>(value);
}

bool PartialStructure::is_complete() const {
  for (const auto& t : relations_) {
    if (std::find(t.begin(), t.end(), static_cast<std::uint8_t>(Truth::Unknown)) != t.end()) return false;
  }
  for (const auto& t : functions_) {
    if (std::find(t.begin(), t.end(), -1) != t.end()) return false;
  }
  return std::find(constants_.begin(), constants_.end(), -1) == constants_.end();
}

Structure PartialStructure::to_structure() const {
  if (!is_complete()) throw Error(ErrorKind::InvalidArgument, "partial structure is not complete");
  Structure m(sig_, elements_);
  for (std::size_t r = 0; r < relations_.size(); ++r) {
    for (std::size_t t = 0; t < relations_[r].size(); ++t) m.set_relation_index(static_cast<int>(r), t, relations_[r][t] == 1);
  }
  for (std::size_t f = 0; f < functions_.size(); ++f) {
    for (std::size_t t = 0; t < functions_[f].size(); ++t) m.set_function_index(static_cast<int>(f), t, functions_[f][t]);
  }
  for (std::size_t c = 0; c < constants_.size(); ++c) m.set_constant(static_cast<int>(c), constants_[c]);
  return m;
}

Formula to_nnf(const Formula& f) {
  using K = Formula::Kind;
  std::function<Formula(const Formula&, bool)> go = [&](const Formula& g, bool neg) -> Formula {
    switch (g.kind()) {
      case K::True: return neg ? Formula::bottom() : Formula::top();
      case K::False: return neg ? Formula::top() : Formula::bottom();
      case K::Atom:
      case K::Equal: return neg ? Formula::negate(g) : g;
      case K::Not: return go(g.child(), !neg);
      case K::And:
      case K::Or: {
        const bool is_and = (g.kind() == K::And) != neg;
        std::vector<Formula> parts;
        for (const auto& c : g.children()) {
          Formula p = go(c, neg);
          if (p.kind() == (is_and ? K::True : K::False)) continue;
          if (p.kind() == (is_and ? K::False : K::True)) return p;
          if (p.kind() == (is_and ? K::And : K::Or)) {
            parts.insert(parts.end(), p.children().begin(), p.children().end());
          } else {
            parts.push_back(std::move(p));
          }
        }
        return is_and ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
      }
      case K::Implies: {
        Formula rewritten = Formula::disj({Formula::negate(g.child(0)), g.child(1)});
        if (rewritten.kind() != K::Or) return go(rewritten, neg);
        return go(rewritten, neg);
      }
      case K::Iff: {
        Formula a = go(g.child(0), false);
        Formula b = go(g.child(1), neg);
        if (a.kind() == K::True) return b;
        if (a.kind() == K::False) return go(g.child(1), !neg);
        if (b.kind() == K::True) return a;
        if (b.kind() == K::False) return go(g.child(0), true);
        return Formula::iff(std::move(a), std::move(b));
      }
      case K::Forall:
      case K::Exists: {
        const K kind = (g.kind() == K::Forall) != neg ? K::Forall : K::Exists;
        Formula body = go(g.child(), neg);
        if (body.kind() == K::True || body.kind() == K::False) return body;
        return Formula::quantify(kind, g.variables(), std::move(body));
      }
    }
    return g;
  };
  return go(f, false);
}

namespace {

bool mentions(const Formula& f, const std::string& v) {
  auto free = free_variables(f);
  return std::find(free.begin(), free.end(), v) != free.end();
}

Formula flatten(Formula::Kind kind, std::vector<Formula> parts) {
  std::vector<Formula> flat;
  for (auto& p : parts) {
    if (p.kind() == kind) flat.insert(flat.end(), p.children().begin(), p.children().end());
    else flat.push_back(std::move(p));
  }
  return kind == Formula::Kind::And ? Formula::conj(std::move(flat)) : Formula::disj(std::move(flat));
}

Formula push(Formula::Kind q, const std::string& v, const Formula& b) {
  using K = Formula::Kind;
  if (!mentions(b, v)) return b;
  const K distributes = q == K::Forall ? K::And : K::Or;
  const K splits = q == K::Forall ? K::Or : K::And;
  if (b.kind() == distributes) {
    std::vector<Formula> parts;
    for (const auto& c : b.children()) parts.push_back(push(q, v, c));
    return flatten(distributes, std::move(parts));
  }
  if (b.kind() == splits) {
    std::vector<Formula> with;
    std::vector<Formula> without;
    for (const auto& c : b.children()) (mentions(c, v) ? with : without).push_back(c);
    if (!without.empty()) {
      Formula inner = with.size() == 1 ? push(q, v, with.front())
                                       : Formula::quantify(q, {v}, flatten(splits, std::move(with)));
      without.push_back(std::move(inner));
      return flatten(splits, std::move(without));
    }
    return Formula::quantify(q, {v}, b);
  }
  if (b.kind() == q) {
    std::vector<std::string> vars{v};
    vars.insert(vars.end(), b.variables().begin(), b.variables().end());
    return Formula::quantify(q, std::move(vars), b.child());
  }
  return Formula::quantify(q, {v}, b);
}

}  // namespace

Formula miniscope(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::And:
    case K::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(miniscope(c));
      return flatten(f.kind(), std::move(parts));
    }
    case K::Not: return Formula::negate(miniscope(f.child()));
    case K::Implies: return Formula::implies(miniscope(f.child(0)), miniscope(f.child(1)));
    case K::Iff: return Formula::iff(miniscope(f.child(0)), miniscope(f.child(1)));
    case K::Forall:
    case K::Exists: {
      Formula body = miniscope(f.child());
      const auto& vars = f.variables();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = push(f.kind(), *it, body);
      return body;
    }
    default: return f;
  }
}

namespace {

class Compiler {
 public:
  Compiler(const Signature& sig, std::vector<CompiledFormula::TermNode>& terms,
           std::vector<CompiledFormula::Node>& nodes, int& slot_count)
      : sig_(sig), terms_(terms), nodes_(nodes), slot_count_(slot_count) {}

  void bind_free(const std::vector<std::string>& names) {
    std::map<std::string, int> scope;
    for (const auto& n : names) scope[n] = slot_count_++;
    scopes_.push_back(std::move(scope));
  }

  int term(const Term& t) {
    using TK = CompiledFormula::TermNode::Kind;
    switch (t.kind) {
      case Term::Kind::Variable: {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
          auto f = it->find(t.name);
          if (f != it->end()) return add_term({TK::Var, f->second, {}});
        }
        throw Error(ErrorKind::UnboundVariable, "unbound variable '" + t.name + "'");
      }
      case Term::Kind::Constant: {
        auto c = sig_.constant_index(t.name);
        if (!c) throw Error(ErrorKind::SignatureMismatch, "constant '" + t.name + "' is not in the signature");
        return add_term({TK::Const, *c, {}});
      }
      case Term::Kind::Function: {
        auto fn = sig_.function_index(t.name);
        if (!fn || sig_.functions()[*fn].arity != static_cast<int>(t.args.size())) {
          throw Error(ErrorKind::SignatureMismatch, "function '" + t.name + "' does not match the signature");
        }
        std::vector<int> args;
        for (const auto& a : t.args) args.push_back(term(a));
        return add_term({TK::Func, *fn, std::move(args)});
      }
    }
    return -1;
  }

  int node(const Formula& f) {
    using K = Formula::Kind;
    using Op = CompiledFormula::Op;
    CompiledFormula::Node nd;
    switch (f.kind()) {
      case K::True: nd.op = Op::True; break;
      case K::False: nd.op = Op::False; break;
      case K::Atom: atom(f, nd, false); break;
      case K::Equal:
        nd.op = Op::Eq;
        nd.args = {term(f.terms()[0]), term(f.terms()[1])};
        break;
      case K::Not: {
        const Formula& c = f.child();
        if (c.kind() == K::Atom) {
          atom(c, nd, true);
        } else if (c.kind() == K::Equal) {
          nd.op = Op::NotEq;
          nd.args = {term(c.terms()[0]), term(c.terms()[1])};
        } else {
          throw Error(ErrorKind::InvalidArgument, "compiler expects negation normal form");
        }
        break;
      }
      case K::And:
      case K::Or:
        nd.op = f.kind() == K::And ? Op::And : Op::Or;
        for (const auto& c : f.children()) nd.kids.push_back(node(c));
        break;
      case K::Iff:
        nd.op = Op::Iff;
        nd.kids = {node(f.child(0)), node(f.child(1))};
        break;
      case K::Implies: throw Error(ErrorKind::InvalidArgument, "compiler expects negation normal form");
      case K::Forall:
      case K::Exists: {
        nd.op = f.kind() == K::Forall ? Op::Forall : Op::Exists;
        std::map<std::string, int> scope;
        for (const auto& v : f.variables()) {
          if (scope.count(v)) continue;
          scope[v] = slot_count_++;
          nd.slots.push_back(scope[v]);
        }
        scopes_.push_back(std::move(scope));
        nd.kids.push_back(node(f.child()));
        scopes_.pop_back();
        break;
      }
    }
    nodes_.push_back(std::move(nd));
    return static_cast<int>(nodes_.size()) - 1;
  }

 private:
  int add_term(CompiledFormula::TermNode t) {
    terms_.push_back(std::move(t));
    return static_cast<int>(terms_.size()) - 1;
  }

  void atom(const Formula& f, CompiledFormula::Node& nd, bool negated) {
    auto r = sig_.relation_index(f.symbol());
    if (!r || sig_.relations()[*r].arity != static_cast<int>(f.terms().size())) {
      throw Error(ErrorKind::SignatureMismatch, "relation '" + f.symbol() + "' does not match the signature");
    }
    nd.op = negated ? CompiledFormula::Op::NotAtom : CompiledFormula::Op::Atom;
    nd.rel = *r;
    nd.plain_vars = true;
    for (const auto& t : f.terms()) {
      int id = term(t);
      nd.args.push_back(id);
      if (terms_[id].kind != CompiledFormula::TermNode::Kind::Var) nd.plain_vars = false;
    }
  }

  const Signature& sig_;
  std::vector<CompiledFormula::TermNode>& terms_;
  std::vector<CompiledFormula::Node>& nodes_;
  int& slot_count_;
  std::vector<std::map<std::string, int>> scopes_;
};

}  // namespace

CompiledFormula::CompiledFormula(const Formula& f, const Signature& sig, std::vector<std::string> free_order) {
  auto free = falsilab::free_variables(f);
  if (free_order.empty()) {
    free_order = free;
  } else {
    for (const auto& v : free) {
      if (std::find(free_order.begin(), free_order.end(), v) == free_order.end()) {
        throw Error(ErrorKind::UnboundVariable, "free variable '" + v + "' missing from slot order");
      }
    }
  }
  free_ = std::move(free_order);
  signature_functions_ = static_cast<int>(sig.functions().size());
  Formula prepared = miniscope(to_nnf(f));
  Compiler c(sig, terms_, nodes_, slot_count_);
  c.bind_free(free_);
  root_ = c.node(prepared);
}

namespace {

inline std::uint8_t rel_truth(const Structure& m, int rel, std::size_t idx) { return m.holds_index(rel, idx) ? 1 : 0; }
inline std::uint8_t rel_truth(const PartialStructure& m, int rel, std::size_t idx) {
  return static_cast<std::uint8_t>(m.holds_index(rel, idx));
}

constexpr std::uint8_t F = 0;
constexpr std::uint8_t T = 1;
constexpr std::uint8_t U = 2;

}  // namespace

struct EvalAccess {
  template <class Model>
  class Runner {
   public:
    Runner(const CompiledFormula& cf, const Model& m, int limit, std::span<const int> free_values)
        : cf_(cf), m_(m), n_(m.size()), limit_(limit), slots_(static_cast<std::size_t>(cf.slot_count_), 0) {
      if (free_values.size() < cf.free_.size()) {
        throw Error(ErrorKind::UnboundVariable, "missing values for free variables");
      }
      for (std::size_t i = 0; i < cf.free_.size(); ++i) {
        if (free_values[i] < 0 || free_values[i] >= n_) throw Error(ErrorKind::InvalidArgument, "assignment out of range");
        slots_[i] = free_values[i];
      }
    }

    std::uint8_t run() { return node(cf_.root_); }

   private:
    int term(int id) {
      const auto& t = cf_.terms_[id];
      switch (t.kind) {
        case CompiledFormula::TermNode::Kind::Var: return slots_[t.index];
        case CompiledFormula::TermNode::Kind::Const: return m_.constant(t.index);
        case CompiledFormula::TermNode::Kind::Func: {
          std::size_t idx = 0;
          for (int a : t.args) {
            int v = term(a);
            if (v < 0) return -1;
            idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
          }
          return m_.apply_index(t.index, idx);
        }
      }
      return -1;
    }

    std::uint8_t atom(const CompiledFormula::Node& nd) {
      std::size_t idx = 0;
      if (nd.plain_vars) {
        for (int a : nd.args) idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(slots_[cf_.terms_[a].index]);
      } else {
        for (int a : nd.args) {
          int v = term(a);
          if (v < 0) return U;
          idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
        }
      }
      return rel_truth(m_, nd.rel, idx);
    }

    std::uint8_t node(int id) {
      using Op = CompiledFormula::Op;
      const auto& nd = cf_.nodes_[id];
      switch (nd.op) {
        case Op::True: return T;
        case Op::False: return F;
        case Op::Atom: return atom(nd);
        case Op::NotAtom: {
          std::uint8_t v = atom(nd);
          return v == U ? U : static_cast<std::uint8_t>(1 - v);
        }
        case Op::Eq:
        case Op::NotEq: {
          int a = term(nd.args[0]);
          int b = term(nd.args[1]);
          if (a < 0 || b < 0) return U;
          bool eq = a == b;
          return (nd.op == Op::Eq) == eq ? T : F;
        }
        case Op::And: {
          std::uint8_t result = T;
          for (int k : nd.kids) {
            std::uint8_t v = node(k);
            if (v == F) return F;
            if (v == U) result = U;
          }
          return result;
        }
        case Op::Or: {
          std::uint8_t result = F;
          for (int k : nd.kids) {
            std::uint8_t v = node(k);
            if (v == T) return T;
            if (v == U) result = U;
          }
          return result;
        }
        case Op::Iff: {
          std::uint8_t a = node(nd.kids[0]);
          if (a == U) return U;
          std::uint8_t b = node(nd.kids[1]);
          if (b == U) return U;
          return a == b ? T : F;
        }
        case Op::Forall:
        case Op::Exists: {
          const bool universal = nd.op == Op::Forall;
          const std::uint8_t stop = universal ? F : T;
          std::uint8_t result = universal ? T : F;
          const std::size_t k = nd.slots.size();
          for (int s : nd.slots) slots_[s] = 0;
          while (true) {
            std::uint8_t v = node(nd.kids[0]);
            if (v == stop) return stop;
            if (v == U) result = U;
            std::size_t i = k;
            while (i > 0) {
              int& slot = slots_[nd.slots[i - 1]];
              if (++slot < limit_) break;
              slot = 0;
              --i;
            }
            if (i == 0) break;
          }
          return result;
        }
      }
      return U;
    }

    const CompiledFormula& cf_;
    const Model& m_;
    int n_;
    int limit_;
    std::vector<int> slots_;
  };
};

bool CompiledFormula::holds(const Structure& m, std::span<const int> free_values) const {
  return EvalAccess::Runner<Structure>(*this, m, m.size(), free_values).run() == T;
}

bool CompiledFormula::holds_prefix(const Structure& m, int limit, std::span<const int> free_values) const {
  return EvalAccess::Runner<Structure>(*this, m, std::min(limit, m.size()), free_values).run() == T;
}

Truth CompiledFormula::holds3(const PartialStructure& m, std::span<const int> free_values) const {
  return static_cast<Truth>(EvalAccess::Runner<PartialStructure>(*this, m, m.size(), free_values).run());
}

Truth CompiledFormula::holds3_prefix(const PartialStructure& m, int limit, std::span<const int> free_values) const {
  return static_cast<Truth>(EvalAccess::Runner<PartialStructure>(*this, m, std::min(limit, m.size()), free_values).run());
}

namespace {

std::vector<int> env_values(const Formula& f, const Assignment& env, std::vector<std::string>& order) {
  order = free_variables(f);
  std::vector<int> values;
  for (const auto& v : order) {
    auto it = env.find(v);
    if (it == env.end()) throw Error(ErrorKind::UnboundVariable, "no value for free variable '" + v + "'");
    values.push_back(it->second);
  }
  return values;
}

}  // namespace

bool evaluate(const Structure& m, const Formula& f, const Assignment& env) {
  std::vector<std::string> order;
  auto values = env_values(f, env, order);
  CompiledFormula cf(f, m.signature(), order);
  return cf.holds(m, values);
}

Truth evaluate3(const PartialStructure& m, const Formula& f, const Assignment& env) {
  std::vector<std::string> order;
  auto values = env_values(f, env, order);
  CompiledFormula cf(f, m.signature(), order);
  return cf.holds3(m, values);
}

}  // namespace falsilab
