#include "falsilab/fraisse.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "falsilab/syntax.hpp"

namespace falsilab {

namespace {

void require_relational(const ClassSpec& k, const char* what) {
  if (!k.signature().is_relational()) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " is implemented for relational signatures only");
  }
}

std::vector<std::string> numbered(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return names;
}

TupleType tables_of(const Structure& m) {
  TupleType key;
  for (std::size_t r = 0; r < m.signature().relations().size(); ++r) {
    const auto& t = m.relation_table(static_cast<int>(r));
    key.insert(key.end(), t.begin(), t.end());
  }
  return key;
}

// Largest universal prefix over the sentences of a universal theory.
int universal_width(const Theory& t) {
  int width = t.sentences.empty() ? 0 : 1;
  for (const auto& s : t.sentences) {
    Formula p = to_prenex(strip_vacuous(s));
    int count = 0;
    const Formula* f = &p;
    while (f->kind() == Formula::Kind::Forall) {
      count += static_cast<int>(f->variables().size());
      f = &f->child();
    }
    width = std::max(width, count);
  }
  return width;
}

// Decides the unknown relation entries of a partial structure so that the
// result is a member of k. Entries are grouped by the two latest elements
// they mention (positions in `order`); for hereditary intensional classes
// every small subset containing a fresh element is checked as soon as all
// its entries are decided, which makes the final membership test redundant.
class Completer {
 public:
  Completer(const ClassSpec& k, PartialStructure start, const std::vector<int>& order, const std::vector<char>& fresh,
            std::mt19937_64* rng, std::uint64_t budget)
      : k_(k), p_(std::move(start)), order_(order), fresh_(fresh), rng_(rng), budget_(budget) {
    const int n = p_.size();
    pos_.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) pos_[order_[i]] = i;
    local_ = k_.known_hereditary();
    if (local_) width_ = universal_width(k_.theory());
    if (width_ == 0) local_ = false;

    std::map<std::pair<int, int>, std::vector<Entry>> buckets;
    const Signature& sig = p_.signature();
    std::vector<int> tuple;
    for (std::size_t r = 0; r < sig.relations().size(); ++r) {
      const int arity = sig.relations()[r].arity;
      tuple.resize(static_cast<std::size_t>(arity));
      for (std::size_t t = 0; t < tuple_count(n, arity); ++t) {
        if (p_.holds_index(static_cast<int>(r), t) != Truth::Unknown) continue;
        decode_tuple(t, n, arity, tuple);
        int a = -1, b = -1;
        for (int e : tuple) a = std::max(a, pos_[e]);
        for (int e : tuple) {
          if (pos_[e] != a) b = std::max(b, pos_[e]);
        }
        if (b < 0) b = a;
        buckets[{a, b}].push_back({static_cast<int>(r), t});
      }
    }
    int first_fresh = n;
    for (int e = 0; e < n; ++e) {
      if (fresh_[e]) first_fresh = std::min(first_fresh, pos_[e]);
    }
    if (local_) {
      for (int a = first_fresh; a < n; ++a) {
        bool has = false;
        for (const auto& [key, entries] : buckets) has = has || key.first == a;
        if (!has) buckets[{a, a}];
      }
    }
    for (auto& [key, entries] : buckets) groups_.push_back({key.first, key.second, std::move(entries), 0, 0});
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      auto& gr = groups_[g];
      const bool same_prev = g > 0 && groups_[g - 1].a == gr.a;
      const bool same_next = g + 1 < groups_.size() && groups_[g + 1].a == gr.a;
      gr.lo = same_prev ? groups_[g - 1].b + 1 : 0;
      gr.hi = same_next ? gr.b : gr.a;
    }
  }

  std::optional<Structure> run() {
    if (dfs(0, 0)) return result_;
    return std::nullopt;
  }

 private:
  struct Entry {
    int rel;
    std::size_t tuple;
  };
  struct Group {
    int a, b;
    std::vector<Entry> entries;
    int lo, hi;
  };

  bool subset_ok(const std::vector<int>& positions) {
    bool any_fresh = false;
    std::vector<int> elems;
    for (int q : positions) {
      elems.push_back(order_[q]);
      any_fresh = any_fresh || fresh_[order_[q]];
    }
    if (!any_fresh) return true;
    std::sort(elems.begin(), elems.end());
    const Signature& sig = p_.signature();
    Structure s(p_.signature_ptr(), static_cast<int>(elems.size()));
    std::vector<int> local, global;
    for (std::size_t r = 0; r < sig.relations().size(); ++r) {
      const int arity = sig.relations()[r].arity;
      local.resize(static_cast<std::size_t>(arity));
      global.resize(static_cast<std::size_t>(arity));
      for (std::size_t t = 0; t < tuple_count(s.size(), arity); ++t) {
        decode_tuple(t, s.size(), arity, local);
        for (int i = 0; i < arity; ++i) global[i] = elems[local[i]];
        if (p_.holds(static_cast<int>(r), global) == Truth::True) s.set_relation_index(static_cast<int>(r), t, true);
      }
    }
    return k_.contains(s);
  }

  bool check(const Group& g) {
    if (!local_) return true;
    for (int second = g.lo; second <= g.hi; ++second) {
      if (second == g.a) {
        if (!subset_ok({g.a})) return false;
        continue;
      }
      std::vector<int> chosen = {g.a, second};
      if (!extend(chosen, second, width_ - 2)) return false;
    }
    return true;
  }

  // Adds up to `room` positions below `below` to chosen and checks each set.
  bool extend(std::vector<int>& chosen, int below, int room) {
    if (!subset_ok(chosen)) return false;
    if (room <= 0) return true;
    for (int q = below - 1; q >= 0; --q) {
      chosen.push_back(q);
      bool ok = extend(chosen, q, room - 1);
      chosen.pop_back();
      if (!ok) return false;
    }
    return true;
  }

  bool dfs(std::size_t g, std::size_t i) {
    if (++nodes_ > budget_) throw Error(ErrorKind::BudgetExceeded, "amalgam search exceeded its node budget");
    if (g == groups_.size()) {
      Structure s = p_.to_structure();
      if (!local_ && !k_.contains(s)) return false;
      result_ = std::move(s);
      return true;
    }
    const Group& gr = groups_[g];
    if (i == gr.entries.size()) {
      if (!check(gr)) return false;
      return dfs(g + 1, 0);
    }
    const Entry& e = gr.entries[i];
    const bool first = rng_ ? ((*rng_)() & 1U) != 0 : false;
    for (bool v : {first, !first}) {
      p_.set_relation_index(e.rel, e.tuple, truth_of(v));
      if (dfs(g, i + 1)) return true;
    }
    p_.set_relation_index(e.rel, e.tuple, Truth::Unknown);
    return false;
  }

  const ClassSpec& k_;
  PartialStructure p_;
  std::vector<int> order_;
  std::vector<char> fresh_;
  std::mt19937_64* rng_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<int> pos_;
  bool local_ = false;
  int width_ = 0;
  std::vector<Group> groups_;
  std::optional<Structure> result_;
};

// Copies every tuple over the listed elements of src into p, with element i
// of src placed at map[i]. Returns false on a clash with a known entry.
bool paste(PartialStructure& p, const Structure& src, const std::vector<int>& map) {
  const Signature& sig = src.signature();
  std::vector<int> local, global;
  for (std::size_t r = 0; r < sig.relations().size(); ++r) {
    const int arity = sig.relations()[r].arity;
    local.resize(static_cast<std::size_t>(arity));
    global.resize(static_cast<std::size_t>(arity));
    for (std::size_t t = 0; t < tuple_count(src.size(), arity); ++t) {
      decode_tuple(t, src.size(), arity, local);
      for (int i = 0; i < arity; ++i) global[i] = map[local[i]];
      Truth want = truth_of(src.holds_index(static_cast<int>(r), t));
      Truth have = p.holds(static_cast<int>(r), global);
      if (have != Truth::Unknown && have != want) return false;
      p.set_relation(static_cast<int>(r), global, want);
    }
  }
  return true;
}

// Glue pairs (element of n, element of q) that must meet in the amalgam.
using Glue = std::vector<std::pair<int, int>>;

std::optional<Amalgam> amalgam_by_construction(const ClassSpec& k, const Structure& n, const Structure& q,
                                               const Glue& glue, const AmalgamOptions& options) {
  std::vector<int> q_to_n(static_cast<std::size_t>(q.size()), -1);
  std::vector<char> n_used(static_cast<std::size_t>(n.size()), 0);
  for (auto [a, b] : glue) {
    q_to_n[b] = a;
    n_used[a] = 1;
  }
  std::vector<int> loose_q;
  for (int b = 0; b < q.size(); ++b) {
    if (q_to_n[b] < 0) loose_q.push_back(b);
  }
  std::vector<int> free_n;
  for (int a = 0; a < n.size(); ++a) {
    if (!n_used[a]) free_n.push_back(a);
  }
  // Identification patterns: choice[i] is an element of free_n or -1 (new).
  std::vector<std::vector<int>> patterns;
  std::vector<int> choice(loose_q.size(), -1);
  std::vector<char> taken(static_cast<std::size_t>(n.size()), 0);
  std::function<void(std::size_t)> gen = [&](std::size_t i) {
    if (i == loose_q.size()) {
      patterns.push_back(choice);
      return;
    }
    choice[i] = -1;
    gen(i + 1);
    if (options.strong) return;
    for (int a : free_n) {
      if (taken[a]) continue;
      taken[a] = 1;
      choice[i] = a;
      gen(i + 1);
      taken[a] = 0;
    }
    choice[i] = -1;
  };
  gen(0);
  std::stable_sort(patterns.begin(), patterns.end(), [](const auto& x, const auto& y) {
    return std::count(x.begin(), x.end(), -1) > std::count(y.begin(), y.end(), -1);
  });
  for (const auto& pat : patterns) {
    const int fresh_count = static_cast<int>(std::count(pat.begin(), pat.end(), -1));
    const int size = n.size() + fresh_count;
    std::vector<int> g_n(static_cast<std::size_t>(n.size()));
    std::iota(g_n.begin(), g_n.end(), 0);
    std::vector<int> g_q = q_to_n;
    int next = n.size();
    for (std::size_t i = 0; i < loose_q.size(); ++i) g_q[loose_q[i]] = pat[i] >= 0 ? pat[i] : next++;
    PartialStructure p(k.signature_ptr(), numbered(size));
    for (std::size_t r = 0; r < k.signature().relations().size(); ++r) {
      const int arity = k.signature().relations()[r].arity;
      for (std::size_t t = 0; t < tuple_count(size, arity); ++t) p.set_relation_index(static_cast<int>(r), t, Truth::Unknown);
    }
    if (!paste(p, n, g_n) || !paste(p, q, g_q)) continue;
    std::vector<int> order(static_cast<std::size_t>(size));
    std::iota(order.begin(), order.end(), 0);
    std::vector<char> fresh(static_cast<std::size_t>(size), 0);
    for (int e = n.size(); e < size; ++e) fresh[e] = 1;
    Completer c(k, std::move(p), order, fresh, nullptr, options.node_budget);
    if (auto target = c.run()) {
      return Amalgam{std::move(*target), std::move(g_n), std::move(g_q)};
    }
  }
  return std::nullopt;
}

std::optional<Amalgam> amalgam_by_members(const ClassSpec& k, const Structure& n, const Structure& q, const Glue& glue,
                                          int base_size, const AmalgamOptions& options) {
  const int lo = std::max(n.size(), q.size());
  const int hi = std::min(n.size() + q.size() - base_size, k.max_member_size());
  for (int s = lo; s <= hi; ++s) {
    for (const auto& r : k.representatives(s)) {
      std::optional<Amalgam> found;
      for_each_embedding(n, r, [&](std::span<const int> gn) {
        for_each_embedding(q, r, [&](std::span<const int> gq) {
          for (auto [a, b] : glue) {
            if (gn[a] != gq[b]) return true;
          }
          if (options.strong) {
            std::vector<char> hit(static_cast<std::size_t>(r.size()), 0);
            for (int x : gn) hit[x] = 1;
            std::vector<char> glued_q(static_cast<std::size_t>(q.size()), 0);
            for (auto [a, b] : glue) glued_q[b] = 1;
            for (int b = 0; b < q.size(); ++b) {
              if (!glued_q[b] && hit[gq[b]]) return true;
            }
          }
          found = Amalgam{r, {gn.begin(), gn.end()}, {gq.begin(), gq.end()}};
          return false;
        });
        return !found;
      });
      if (found) return found;
    }
  }
  return std::nullopt;
}

std::optional<Amalgam> solve(const ClassSpec& k, const Structure& n, const Structure& q, const Glue& glue,
                             int base_size, const AmalgamOptions& options) {
  auto result = k.is_intensional() ? amalgam_by_construction(k, n, q, glue, options)
                                   : amalgam_by_members(k, n, q, glue, base_size, options);
  if (result && options.on_embedding) {
    options.on_embedding(n, result->target, result->g_n);
    options.on_embedding(q, result->target, result->g_q);
  }
  return result;
}

std::vector<const Structure*> members_up_to(const ClassSpec& k, int bound) {
  std::vector<const Structure*> out;
  for (int s = 1; s <= bound; ++s) {
    for (const auto& m : k.representatives(s)) out.push_back(&m);
  }
  return out;
}

}  // namespace

std::vector<IsoClassId> age(const Structure& m, int size_cap) {
  std::vector<IsoClassId> ids;
  for (const auto& s : closed_subsets(m, m.size())) ids.push_back(canonicalize(m.induced(s), size_cap));
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::optional<Amalgam> find_amalgam(const ClassSpec& k, const AmalgamProblem& problem, const AmalgamOptions& options) {
  require_relational(k, "amalgamation");
  if (!is_embedding(problem.base, problem.n, problem.f_n) || !is_embedding(problem.base, problem.q, problem.f_q)) {
    throw Error(ErrorKind::InvalidArgument, "amalgamation problem maps are not embeddings");
  }
  Glue glue;
  for (int a = 0; a < problem.base.size(); ++a) glue.emplace_back(problem.f_n[a], problem.f_q[a]);
  auto result = solve(k, problem.n, problem.q, glue, problem.base.size(), options);
  if (result) {
    for (int a = 0; a < problem.base.size(); ++a) {
      if (result->g_n[problem.f_n[a]] != result->g_q[problem.f_q[a]]) {
        throw Error(ErrorKind::InvalidArgument, "internal error: amalgam does not commute");
      }
    }
  }
  return result;
}

HpVerdict check_hp(const ClassSpec& k, int bound) {
  HpVerdict v;
  for (const Structure* m : members_up_to(k, bound)) {
    for (const auto& elems : closed_subsets(*m, m->size() - 1 > 0 ? m->size() - 1 : 1)) {
      if (static_cast<int>(elems.size()) == m->size()) continue;
      Structure sub = m->induced(elems);
      if (!k.contains(sub)) {
        v.holds = false;
        v.counterexample = HpCounterexample{*m, std::move(sub), elems};
        return v;
      }
    }
  }
  return v;
}

JepVerdict check_jep(const ClassSpec& k, int bound, const AmalgamOptions& options) {
  require_relational(k, "joint embedding");
  JepVerdict v;
  auto members = members_up_to(k, bound);
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i; j < members.size(); ++j) {
      ++v.pairs_checked;
      if (!solve(k, *members[i], *members[j], {}, 0, options)) {
        v.holds = false;
        v.counterexample = JepCounterexample{*members[i], *members[j]};
        return v;
      }
    }
  }
  return v;
}

ApVerdict check_ap(const ClassSpec& k, int bound, const AmalgamOptions& options) {
  require_relational(k, "amalgamation");
  ApVerdict v;
  auto members = members_up_to(k, bound);
  for (const Structure* n : members) {
    for (const auto& a : subsets_by_size(n->size(), 1, n->size() - 1)) {
      Structure base = n->induced(a);
      if (!k.contains(base)) continue;
      for (const Structure* q : members) {
        if (q->size() <= base.size()) continue;
        std::optional<AmalgamProblem> failed;
        for_each_embedding(base, *q, [&](std::span<const int> fq) {
          ++v.problems_checked;
          Glue glue;
          for (std::size_t i = 0; i < a.size(); ++i) glue.emplace_back(a[i], fq[i]);
          if (!solve(k, *n, *q, glue, base.size(), options)) {
            failed = AmalgamProblem{base, *n, *q, a, {fq.begin(), fq.end()}};
            return false;
          }
          return true;
        });
        if (failed) {
          v.holds = false;
          v.counterexample = std::move(failed);
          return v;
        }
      }
    }
  }
  return v;
}

FraisseReport check_fraisse(const ClassSpec& k, int bound, const AmalgamOptions& options) {
  FraisseReport r;
  r.bound = bound;
  r.hp = check_hp(k, bound);
  r.jep = check_jep(k, bound, options);
  r.ap = check_ap(k, bound, options);
  return r;
}

namespace {

// Tuples over {0..k} that mention k, by relation then lexicographically.
struct Slots {
  std::vector<std::pair<int, std::vector<int>>> list;
  Slots(const Signature& sig, int k) {
    for (std::size_t r = 0; r < sig.relations().size(); ++r) {
      const int arity = sig.relations()[r].arity;
      std::vector<int> t(static_cast<std::size_t>(arity));
      for (std::size_t i = 0; i < tuple_count(k + 1, arity); ++i) {
        decode_tuple(i, k + 1, arity, t);
        if (std::find(t.begin(), t.end(), k) != t.end()) list.emplace_back(static_cast<int>(r), t);
      }
    }
  }
};

std::uint64_t pattern_of(const Structure& c, const std::vector<int>& a, int point, const Slots& slots) {
  std::uint64_t mask = 0;
  std::vector<int> g;
  for (std::size_t s = 0; s < slots.list.size(); ++s) {
    const auto& [r, t] = slots.list[s];
    g.resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) g[i] = t[i] == static_cast<int>(a.size()) ? point : a[t[i]];
    if (c.holds(r, g)) mask |= std::uint64_t{1} << s;
  }
  return mask;
}

class ChainBuilder {
 public:
  ChainBuilder(const ClassSpec& k, int level, std::uint64_t seed, const ChainOptions& options)
      : k_(k), level_(level), rng_(seed), options_(options) {}

  // Extension patterns over c|a that give members, in increasing order.
  const std::vector<std::uint64_t>& types(const Structure& c, const std::vector<int>& a) {
    std::optional<Structure> base;
    if (!a.empty()) base = c.induced(a);
    TupleType key = base ? tables_of(*base) : TupleType{};
    key.push_back(static_cast<std::uint8_t>(a.size()));
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Slots slots(k_.signature(), static_cast<int>(a.size()));
    if (slots.list.size() > 20) throw Error(ErrorKind::BudgetExceeded, "too many extension patterns at this level");
    std::vector<std::uint64_t> out;
    const int kk = static_cast<int>(a.size());
    std::vector<int> ident(a.size());
    std::iota(ident.begin(), ident.end(), 0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.list.size()); ++mask) {
      PartialStructure p(k_.signature_ptr(), kk + 1);
      if (base) paste(p, *base, ident);
      for (std::size_t s = 0; s < slots.list.size(); ++s) {
        p.set_relation(slots.list[s].first, slots.list[s].second, truth_of((mask >> s) & 1U));
      }
      if (k_.contains(p.to_structure())) out.push_back(mask);
    }
    return cache_.emplace(std::move(key), std::move(out)).first->second;
  }

  // Realizes the pattern over a by a new point; returns false at the size cap.
  bool extend(Structure& c, const std::vector<int>& a, std::uint64_t mask) {
    const int n = c.size();
    if (n >= options_.max_size) return false;
    PartialStructure p(k_.signature_ptr(), numbered(n + 1));
    const Signature& sig = k_.signature();
    for (std::size_t r = 0; r < sig.relations().size(); ++r) {
      for (std::size_t t = 0; t < tuple_count(n + 1, sig.relations()[r].arity); ++t) {
        p.set_relation_index(static_cast<int>(r), t, Truth::Unknown);
      }
    }
    std::vector<int> ident(static_cast<std::size_t>(n));
    std::iota(ident.begin(), ident.end(), 0);
    paste(p, c, ident);
    Slots slots(sig, static_cast<int>(a.size()));
    std::vector<int> g;
    for (std::size_t s = 0; s < slots.list.size(); ++s) {
      const auto& [r, t] = slots.list[s];
      g.resize(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) g[i] = t[i] == static_cast<int>(a.size()) ? n : a[t[i]];
      p.set_relation(r, g, truth_of((mask >> s) & 1U));
    }
    std::vector<int> order = a;
    order.push_back(n);
    for (int e = 0; e < n; ++e) {
      if (std::find(a.begin(), a.end(), e) == a.end()) order.push_back(e);
    }
    std::vector<char> fresh(static_cast<std::size_t>(n + 1), 0);
    fresh[n] = 1;
    Completer completer(k_, std::move(p), order, fresh, &rng_, 1ULL << 26);
    auto next = completer.run();
    if (!next) {
      std::string where;
      for (int e : a) where += (where.empty() ? "" : ",") + std::to_string(e);
      throw Error(ErrorKind::ExtensionUnsolvable, "no member extends the current stage by pattern " +
                                                      std::to_string(mask) + " over {" + where + "}");
    }
    c = std::move(*next);
    return true;
  }

  // Unrealized (subset, pattern) problems over the first `limit` elements
  // with subsets of size <= max_subset; visit returns false to stop.
  void for_each_problem(Structure& c, int limit, int max_subset,
                        const std::function<bool(const std::vector<int>&, std::uint64_t)>& visit) {
    for (const auto& a : subsets_by_size(limit, 0, max_subset)) {
      Slots slots(k_.signature(), static_cast<int>(a.size()));
      const auto allowed = types(c, a);
      for (std::uint64_t mask : allowed) {
        bool realized = false;
        for (int e = 0; e < c.size() && !realized; ++e) {
          if (std::find(a.begin(), a.end(), e) != a.end()) continue;
          realized = pattern_of(c, a, e, slots) == mask;
        }
        if (!realized && !visit(a, mask)) return;
      }
    }
  }

  ChainState run() {
    ChainState state;
    state.level = level_;
    state.seed = 0;
    const auto& singles = k_.representatives(1);
    if (singles.empty()) throw Error(ErrorKind::ExtensionUnsolvable, "the class has no one-element member");
    Structure c = singles.front();
    c.rename_elements(numbered(1));
    state.stages.push_back(c);
    bool capped = false;
    while (state.rounds < options_.max_rounds && !capped) {
      const int limit = c.size();
      bool added = false;
      for_each_problem(c, limit, level_ - 1, [&](const std::vector<int>& a, std::uint64_t mask) {
        if (!extend(c, a, mask)) {
          capped = true;
          return false;
        }
        added = true;
        return true;
      });
      ++state.rounds;
      if (!added) {
        state.closed = true;
        break;
      }
      std::vector<int> inc(static_cast<std::size_t>(state.stages.back().size()));
      std::iota(inc.begin(), inc.end(), 0);
      state.inclusions.push_back(std::move(inc));
      state.stages.push_back(c);
    }
    state.level_achieved = 0;
    for (int l = 1; l <= level_; ++l) {
      bool ok = true;
      for_each_problem(c, c.size(), l - 1, [&](const std::vector<int>&, std::uint64_t) {
        ok = false;
        return false;
      });
      if (!ok) break;
      state.level_achieved = l;
    }
    return state;
  }

 private:
  const ClassSpec& k_;
  int level_;
  std::mt19937_64 rng_;
  ChainOptions options_;
  std::map<TupleType, std::vector<std::uint64_t>> cache_;
};

}  // namespace

ChainState generic_chain(const ClassSpec& k, int level, std::uint64_t seed, const ChainOptions& options) {
  require_relational(k, "generic_chain");
  if (level < 1) throw Error(ErrorKind::InvalidArgument, "level must be at least 1");
  ChainBuilder builder(k, level, seed, options);
  ChainState state = builder.run();
  state.seed = seed;
  return state;
}

std::set<TupleType> realized_types(const Structure& m, int k) {
  std::set<TupleType> out;
  if (m.size() < k) return out;
  std::vector<int> tuple(static_cast<std::size_t>(k));
  std::vector<char> used(static_cast<std::size_t>(m.size()), 0);
  std::function<void(int)> go = [&](int d) {
    if (d == k) {
      out.insert(tables_of(m.induced(tuple)));
      return;
    }
    for (int e = 0; e < m.size(); ++e) {
      if (used[e]) continue;
      used[e] = 1;
      tuple[d] = e;
      go(d + 1);
      used[e] = 0;
    }
  };
  go(0);
  return out;
}

std::set<TupleType> allowed_types(const ClassSpec& cls, int k) {
  std::set<TupleType> out;
  cls.visit_members(k, [&](const Structure& m) {
    auto t = realized_types(m, k);
    out.insert(t.begin(), t.end());
  });
  return out;
}

}  // namespace falsilab
