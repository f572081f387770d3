#include "falsilab/falsify.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "falsilab/parser.hpp"
#include "falsilab/syntax.hpp"
#include "falsilab/text_format.hpp"
#include "lexer.hpp"

namespace falsilab {

namespace {

std::string var_name(int i) { return "x" + std::to_string(i + 1); }

// Atoms over k variables: every relation (signature order) applied to every
// variable tuple in lexicographic order.
struct AtomTable {
  int k = 0;
  std::vector<std::pair<int, std::vector<int>>> atoms;
  std::map<std::pair<int, std::vector<int>>, int> index;

  AtomTable(const Signature& sig, int vars) : k(vars) {
    for (std::size_t r = 0; r < sig.relations().size(); ++r) {
      const int arity = sig.relations()[r].arity;
      std::vector<int> tuple(static_cast<std::size_t>(arity));
      const std::size_t total = tuple_count(k, arity);
      for (std::size_t t = 0; t < total; ++t) {
        decode_tuple(t, k, arity, tuple);
        index[{static_cast<int>(r), tuple}] = static_cast<int>(atoms.size());
        atoms.emplace_back(static_cast<int>(r), tuple);
      }
    }
  }
  [[nodiscard]] int size() const { return static_cast<int>(atoms.size()); }
};

std::vector<std::uint64_t> powers_of_three(int m) {
  std::vector<std::uint64_t> p(static_cast<std::size_t>(m) + 1, 1);
  for (int i = 1; i <= m; ++i) p[i] = p[i - 1] * 3;
  return p;
}

// Digit j of a cube code: 0 negative literal, 1 positive literal, 2 absent.
inline int digit(std::uint64_t code, const std::vector<std::uint64_t>& pow3, int j) {
  return static_cast<int>((code / pow3[j]) % 3);
}

std::vector<std::vector<int>> permutations(int k) {
  std::vector<int> p(static_cast<std::size_t>(k));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// perm_atom[π][i] = index of atom i after renaming variable v to π[v].
std::vector<std::vector<int>> atom_permutations(const AtomTable& atoms) {
  std::vector<std::vector<int>> out;
  for (const auto& perm : permutations(atoms.k)) {
    std::vector<int> map(atoms.atoms.size());
    for (std::size_t i = 0; i < atoms.atoms.size(); ++i) {
      auto [r, tuple] = atoms.atoms[i];
      for (auto& v : tuple) v = perm[v];
      map[i] = atoms.index.at({r, tuple});
    }
    out.push_back(std::move(map));
  }
  return out;
}

std::uint64_t permute_code(std::uint64_t code, const std::vector<int>& map, const std::vector<std::uint64_t>& pow3) {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < map.size(); ++i) out += static_cast<std::uint64_t>(digit(code, pow3, static_cast<int>(i))) * pow3[map[i]];
  return out;
}

// Realized complete types of injective k-tuples, closed into a cube table.
struct CubeTable {
  int k = 0;
  AtomTable atoms;
  std::vector<std::uint64_t> pow3;
  std::vector<std::uint8_t> realized;  // indexed by cube code

  CubeTable(const Signature& sig, int vars) : k(vars), atoms(sig, vars), pow3(powers_of_three(atoms.size())) {}

  [[nodiscard]] bool is_realized(std::uint64_t code) const { return realized[code] != 0; }
};

void collect_types(const Structure& m, int k, const AtomTable& atoms, std::vector<std::uint8_t>& types) {
  const int n = m.size();
  if (n < k) return;
  std::vector<int> tuple(static_cast<std::size_t>(k));
  std::vector<int> image;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::function<void(int)> go = [&](int depth) {
    if (depth == k) {
      std::uint64_t mask = 0;
      for (std::size_t i = 0; i < atoms.atoms.size(); ++i) {
        const auto& [r, vars] = atoms.atoms[i];
        image.resize(vars.size());
        for (std::size_t j = 0; j < vars.size(); ++j) image[j] = tuple[vars[j]];
        if (m.holds(r, image)) mask |= std::uint64_t{1} << i;
      }
      types[mask] = 1;
      return;
    }
    for (int e = 0; e < n; ++e) {
      if (used[e]) continue;
      used[e] = 1;
      tuple[depth] = e;
      go(depth + 1);
      used[e] = 0;
    }
  };
  go(0);
}

int default_bound(const ClassSpec& k, int n) {
  if (!k.is_intensional()) return k.max_member_size();
  return std::max(n + 2, 5);
}

CubeTable build_cube_table(const ClassSpec& cls, int k, int bound, int max_atoms) {
  CubeTable table(cls.signature(), k);
  const int m = table.atoms.size();
  if (m > max_atoms) {
    throw Error(ErrorKind::BudgetExceeded, "diagram search over " + std::to_string(k) + " variables needs " +
                                               std::to_string(m) + " atoms, above the cap " + std::to_string(max_atoms));
  }
  std::vector<std::uint8_t> types(std::size_t{1} << m, 0);
  // Universal theories: every injective k-tuple spans a k-element model.
  const int top = cls.known_hereditary() ? k : bound;
  for (int size = k; size <= top; ++size) {
    cls.visit_members(size, [&](const Structure& s) { collect_types(s, k, table.atoms, types); });
  }
  const std::uint64_t total = table.pow3[m];
  table.realized.assign(total, 0);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t rest = code;
    int j = 0;
    std::uint64_t mask = 0;
    int first_free = -1;
    for (; j < m; ++j) {
      int d = static_cast<int>(rest % 3);
      rest /= 3;
      if (d == 2) {
        first_free = j;
        break;
      }
      if (d == 1) mask |= std::uint64_t{1} << j;
    }
    if (first_free < 0) {
      table.realized[code] = types[mask];
    } else {
      const std::uint64_t w = table.pow3[first_free];
      table.realized[code] = table.realized[code - 2 * w] | table.realized[code - w];
    }
  }
  return table;
}

Diagram decode_diagram(std::uint64_t code, const CubeTable& t) {
  Diagram d;
  d.vars = t.k;
  for (int i = 0; i < t.atoms.size(); ++i) {
    int dg = digit(code, t.pow3, i);
    if (dg == 2) continue;
    d.literals.push_back({t.atoms.atoms[i].first, t.atoms.atoms[i].second, dg == 1});
  }
  return d;
}

std::uint64_t encode_diagram(const Diagram& d, const CubeTable& t) {
  std::uint64_t code = t.pow3[t.atoms.size()] - 1;  // all digits 2
  for (const auto& lit : d.literals) {
    int i = t.atoms.index.at({lit.relation, lit.vars});
    code -= (lit.positive ? 1 : 2) * t.pow3[i];
  }
  return code;
}

std::uint64_t canonical_code(std::uint64_t code, const std::vector<std::vector<int>>& perms,
                             const std::vector<std::uint64_t>& pow3) {
  std::uint64_t best = code;
  for (const auto& p : perms) best = std::min(best, permute_code(code, p, pow3));
  return best;
}

// Drops variable v from a cube that does not mention it.
std::uint64_t restrict_code(std::uint64_t code, int v, const CubeTable& from, const CubeTable& to) {
  std::uint64_t out = to.pow3[to.atoms.size()] - 1;
  for (int i = 0; i < from.atoms.size(); ++i) {
    int dg = digit(code, from.pow3, i);
    if (dg == 2) continue;
    auto [r, vars] = from.atoms.atoms[i];
    for (auto& x : vars) x = x > v ? x - 1 : x;
    out -= static_cast<std::uint64_t>(2 - dg) * to.pow3[to.atoms.index.at({r, vars})];
  }
  return out;
}

void require_relational(const ClassSpec& k) {
  if (!k.signature().is_relational()) {
    throw Error(ErrorKind::InvalidArgument, "forbidden configurations are computed for relational signatures only");
  }
}

}  // namespace

std::string Diagram::to_string(const Signature& sig) const {
  if (literals.empty()) {
    std::string out = "true[";
    for (int i = 0; i < vars; ++i) out += (i ? "," : "") + var_name(i);
    return out + "]";
  }
  std::string out;
  for (std::size_t i = 0; i < literals.size(); ++i) {
    const auto& lit = literals[i];
    if (i) out += " & ";
    if (!lit.positive) out += "!";
    out += sig.relations().at(lit.relation).name + "(";
    for (std::size_t j = 0; j < lit.vars.size(); ++j) out += (j ? "," : "") + var_name(lit.vars[j]);
    out += ")";
  }
  return out;
}

Formula Diagram::as_formula(const Signature& sig) const {
  std::vector<Formula> parts;
  for (const auto& lit : literals) {
    std::vector<Term> args;
    for (int v : lit.vars) args.push_back(Term::var(var_name(v)));
    Formula a = Formula::atom(sig.relations().at(lit.relation).name, std::move(args));
    parts.push_back(lit.positive ? a : Formula::negate(a));
  }
  return Formula::conj(std::move(parts));
}

Formula Diagram::as_sentence(const Signature& sig) const {
  std::vector<std::string> names;
  for (int i = 0; i < vars; ++i) names.push_back(var_name(i));
  std::vector<Formula> distinct;
  for (int i = 0; i < vars; ++i) {
    for (int j = i + 1; j < vars; ++j) {
      distinct.push_back(Formula::negate(Formula::equal(Term::var(names[i]), Term::var(names[j]))));
    }
  }
  Formula body = Formula::negate(as_formula(sig));
  if (!distinct.empty()) body = Formula::implies(Formula::conj(std::move(distinct)), body);
  return Formula::forall(std::move(names), std::move(body));
}

Diagram canonical_diagram(const Diagram& d, const Signature& sig) {
  CubeTable t(sig, d.vars);
  auto perms = atom_permutations(t.atoms);
  return decode_diagram(canonical_code(encode_diagram(d, t), perms, t.pow3), t);
}

bool realizes(const Structure& m, const Diagram& d) {
  const int n = m.size();
  if (n < d.vars) return false;
  std::vector<int> assign(static_cast<std::size_t>(d.vars));
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::vector<int> image;
  std::function<bool(int)> go = [&](int depth) -> bool {
    if (depth == d.vars) {
      for (const auto& lit : d.literals) {
        image.resize(lit.vars.size());
        for (std::size_t j = 0; j < lit.vars.size(); ++j) image[j] = assign[lit.vars[j]];
        if (m.holds(lit.relation, image) != lit.positive) return false;
      }
      return true;
    }
    for (int e = 0; e < n; ++e) {
      if (used[e]) continue;
      used[e] = 1;
      assign[depth] = e;
      bool ok = go(depth + 1);
      used[e] = 0;
      if (ok) return true;
    }
    return false;
  };
  return go(0);
}

ForbiddenSet forbidden_configurations(const ClassSpec& cls, int n, const ForbidOptions& options) {
  require_relational(cls);
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "forbidden_configurations needs n >= 1");
  const int bound = options.enumeration_bound.value_or(default_bound(cls, n));
  ForbiddenSet out;
  out.bound = n;
  out.enumeration_bound = cls.known_hereditary() ? n : bound;
  out.exact = cls.known_hereditary() || !cls.is_intensional();
  out.signature = cls.signature_ptr();
  std::optional<CubeTable> previous;
  for (int k = 1; k <= n; ++k) {
    CubeTable table = build_cube_table(cls, k, bound, options.max_atoms);
    auto perms = atom_permutations(table.atoms);
    const int m = table.atoms.size();
    std::vector<std::pair<std::pair<int, std::uint64_t>, std::uint64_t>> found;
    const std::uint64_t total = table.pow3[m];
    for (std::uint64_t code = 0; code < total; ++code) {
      if (table.realized[code]) continue;
      bool minimal = true;
      int literals = 0;
      std::vector<char> mentioned(static_cast<std::size_t>(k), 0);
      for (int j = 0; j < m && minimal; ++j) {
        int dg = digit(code, table.pow3, j);
        if (dg == 2) continue;
        ++literals;
        for (int v : table.atoms.atoms[j].second) mentioned[v] = 1;
        if (!table.realized[code + static_cast<std::uint64_t>(2 - dg) * table.pow3[j]]) minimal = false;
      }
      if (!minimal) continue;
      if (k > 1) {
        for (int v = 0; v < k && minimal; ++v) {
          if (mentioned[v]) continue;
          if (!previous->realized[restrict_code(code, v, table, *previous)]) minimal = false;
        }
      }
      if (!minimal) continue;
      if (canonical_code(code, perms, table.pow3) != code) continue;
      found.push_back({{literals, code}, code});
    }
    std::sort(found.begin(), found.end());
    for (const auto& f : found) out.diagrams.push_back(decode_diagram(f.second, table));
    previous.emplace(std::move(table));
  }
  return out;
}

std::string_view to_string(Falsifiability f) {
  return f == Falsifiability::Falsifiable ? "falsifiable" : "not-falsifiable-at-scale";
}

Falsifiability falsifiable_at(const ClassSpec& k, int n, const ForbidOptions& options) {
  return forbidden_configurations(k, n, options).diagrams.empty() ? Falsifiability::NotFalsifiableAtScale
                                                                  : Falsifiability::Falsifiable;
}

RelativeReport relative_falsifiability_at(const ClassSpec& k, const ClassSpec& kp, int n, const ForbidOptions& options) {
  require_same_signature(k.signature(), kp.signature());
  require_relational(k);
  const int bound = options.enumeration_bound.value_or(default_bound(k, n));
  for (int size = 1; size <= bound; ++size) {
    for (const auto& m : k.representatives(size)) {
      if (!kp.contains(m)) {
        throw Error(ErrorKind::NotASubclass, "a member of '" + k.name() + "' of size " + std::to_string(size) +
                                                 " is not in '" + kp.name() + "': " + to_text(m, "witness"));
      }
    }
  }
  ForbidOptions kp_options = options;
  if (!kp_options.enumeration_bound) kp_options.enumeration_bound = default_bound(kp, n);
  RelativeReport report;
  auto fk = forbidden_configurations(k, n, options);
  auto fkp = forbidden_configurations(kp, n, kp_options);
  report.forbidden_in_k = fk.diagrams.size();
  report.forbidden_in_kp = fkp.diagrams.size();
  std::vector<std::optional<CubeTable>> kp_tables(static_cast<std::size_t>(n) + 1);
  for (const auto& d : fk.diagrams) {
    auto& table = kp_tables[d.vars];
    if (!table) table.emplace(build_cube_table(kp, d.vars, *kp_options.enumeration_bound, options.max_atoms));
    if (table->is_realized(encode_diagram(d, *table))) {
      report.relatively_falsifiable = true;
      report.witness = d;
      break;
    }
  }
  return report;
}

ObservationSet parse_observations(std::string_view text) {
  ObservationSet obs;
  detail::Lexer lex(text);
  std::set<std::string> seen;
  while (!lex.at_end()) {
    GroundLiteral lit;
    if (lex.accept("!")) lit.positive = false;
    lit.relation = lex.expect_ident("relation name");
    lex.expect("(");
    do {
      std::string c = lex.expect_ident("constant");
      if (seen.insert(c).second) obs.constants.push_back(c);
      lit.args.push_back(std::move(c));
    } while (lex.accept(","));
    lex.expect(")");
    lex.accept(";");
    obs.literals.push_back(std::move(lit));
  }
  return obs;
}

ObservationSet load_observations(const std::string& path) { return parse_observations(read_file(path)); }

std::string to_text(const ObservationSet& obs) {
  std::string out;
  for (const auto& lit : obs.literals) {
    out += lit.positive ? "" : "!";
    out += lit.relation + "(";
    for (std::size_t i = 0; i < lit.args.size(); ++i) out += (i ? "," : "") + lit.args[i];
    out += ")\n";
  }
  return out;
}

PartialStructure observation_structure(const Signature& sig, const SignaturePtr& ptr, const ObservationSet& obs) {
  if (obs.constants.empty()) throw Error(ErrorKind::EmptyDomain, "observation set names no constants");
  PartialStructure p(ptr, obs.constants);
  for (const auto& lit : obs.literals) {
    auto r = sig.relation_index(lit.relation);
    if (!r) throw Error(ErrorKind::UnknownSymbol, "observed relation '" + lit.relation + "' is not in the signature");
    if (sig.relations()[*r].arity != static_cast<int>(lit.args.size())) {
      throw Error(ErrorKind::Arity, "observed literal on '" + lit.relation + "' has the wrong arity");
    }
    std::vector<int> args;
    for (const auto& a : lit.args) args.push_back(*p.find_element(a));
    Truth current = p.holds(*r, args);
    Truth wanted = truth_of(lit.positive);
    if (current != Truth::Unknown && current != wanted) {
      throw Error(ErrorKind::InconsistentObservations, "observations contain both " + lit.relation +
                                                           " and its negation on the same constants");
    }
    p.set_relation(*r, args, wanted);
  }
  return p;
}

RefutationReport refute(const Theory& t, const ObservationSet& obs) {
  RefutationReport report;
  if (obs.constants.empty()) return report;
  PartialStructure p = observation_structure(*t.signature, t.signature, obs);
  const int n = p.size();
  for (std::size_t s = 0; s < t.sentences.size(); ++s) {
    const Formula& sentence = t.sentences[s];
    if (!classify_syntax(sentence).universal) {
      report.skipped.push_back(s);
      continue;
    }
    Formula prenex = to_prenex(strip_vacuous(sentence));
    std::vector<std::string> vars;
    const Formula* body = &prenex;
    while (body->kind() == Formula::Kind::Forall) {
      vars.insert(vars.end(), body->variables().begin(), body->variables().end());
      body = &body->child();
    }
    CompiledFormula matrix(*body, *t.signature, vars);
    const int k = static_cast<int>(vars.size());
    std::vector<int> values(static_cast<std::size_t>(k), 0);
    while (true) {
      if (matrix.holds3(p, values) == Truth::False) {
        report.refuted = true;
        report.sentence_index = s;
        report.witness_sentence = to_string(prenex);
        std::map<std::string, Term> sub;
        for (int i = 0; i < k; ++i) {
          report.substitution.emplace_back(vars[i], obs.constants[values[i]]);
          sub[vars[i]] = Term::constant(obs.constants[values[i]]);
        }
        report.instance = to_string(substitute(*body, sub));
        return report;
      }
      int i = k;
      while (i > 0) {
        if (++values[i - 1] < n) break;
        values[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
    }
  }
  return report;
}

std::pair<std::string, DerivedRelation> parse_definition(std::string_view text, Signature& sig) {
  auto pos = text.find(":=");
  if (pos == std::string_view::npos) throw Error(ErrorKind::Syntax, "definition needs ':='");
  detail::Lexer head(text.substr(0, pos));
  std::string name = head.expect_ident("relation name");
  DerivedRelation def{{}, Formula::top()};
  head.expect("(");
  do {
    def.params.push_back(head.expect_ident("parameter"));
  } while (head.accept(","));
  head.expect(")");
  if (!head.at_end()) head.fail("unexpected input in definition head");
  ParseOptions options;
  options.infer_signature = true;
  def.body = parse_formula_into(text.substr(pos + 2), sig, options);
  for (const auto& v : free_variables(def.body)) {
    if (std::find(def.params.begin(), def.params.end(), v) == def.params.end()) {
      throw Error(ErrorKind::UnboundVariable, "definition body has free variable '" + v + "'");
    }
  }
  return {name, std::move(def)};
}

Formula rewrite_derived_relation(const Formula& f, const std::map<std::string, DerivedRelation>& defs) {
  for (const auto& [name, def] : defs) {
    if (!classify_formula(def.body).existential) {
      throw Error(ErrorKind::InvalidArgument, "definition of '" + name + "' is not existential");
    }
  }
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    using K = Formula::Kind;
    switch (g.kind()) {
      case K::Atom: {
        auto it = defs.find(g.symbol());
        if (it == defs.end()) return g;
        const auto& def = it->second;
        if (def.params.size() != g.terms().size()) {
          throw Error(ErrorKind::Arity, "derived relation '" + g.symbol() + "' expects " +
                                            std::to_string(def.params.size()) + " arguments");
        }
        std::map<std::string, Term> sub;
        for (std::size_t i = 0; i < def.params.size(); ++i) sub[def.params[i]] = g.terms()[i];
        return substitute(def.body, sub);
      }
      case K::Not: return Formula::negate(go(g.child()));
      case K::And:
      case K::Or: {
        std::vector<Formula> parts;
        for (const auto& c : g.children()) parts.push_back(go(c));
        return g.kind() == K::And ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
      }
      case K::Implies: return Formula::implies(go(g.child(0)), go(g.child(1)));
      case K::Iff: return Formula::iff(go(g.child(0)), go(g.child(1)));
      case K::Forall:
      case K::Exists: {
        // Bound variables must not capture definition variables.
        Formula body = go(g.child());
        return Formula::quantify(g.kind(), g.variables(), std::move(body));
      }
      default: return g;
    }
  };
  return go(f);
}

}  // namespace falsilab
