#include "falsilab/fitness.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace falsilab {

namespace {

std::string x(int i) { return "x" + std::to_string(i + 1); }

std::vector<std::vector<int>> proper_substructure_sets(const Structure& m, bool fg) {
  std::vector<std::vector<int>> out;
  if (!fg) {
    for (auto& s : closed_subsets(m, m.size() - 1)) out.push_back(std::move(s));
    return out;
  }
  std::set<std::vector<int>> seen;
  for (const auto& seed : subsets_by_size(m.size(), 1, m.size())) {
    auto c = closure(m, seed);
    if (static_cast<int>(c.size()) == m.size()) continue;
    if (seen.insert(c).second) out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return out;
}

FitReport check(const ClassSpec& k, int bound, bool fg) {
  if (bound < 1) throw Error(ErrorKind::InvalidArgument, "fit bound must be at least 1");
  FitReport report;
  report.bound = bound;
  report.finitely_generated = fg;
  const auto& sig = k.signature_ptr();
  for (int n = 1; n <= bound; ++n) {
    for (const auto& m : iso_representatives(sig, n, k.budget())) {
      if (k.contains(m)) continue;
      if (!report.nontrivial_witness) report.nontrivial_witness = m;
      if (n >= 2 && proper_substructure_sets(m, fg).empty()) report.vacuous_substructure_warning.push_back(m);
    }
  }
  for (int n = 2; n <= bound && !report.irrevocability_counterexample; ++n) {
    for (const auto& m : k.representatives(n)) {
      for (const auto& elems : proper_substructure_sets(m, fg)) {
        Structure sub = m.induced(elems);
        if (!k.contains(sub)) {
          report.irrevocability_counterexample = IrrevocabilityCounterexample{m, std::move(sub), elems};
          break;
        }
      }
      if (report.irrevocability_counterexample) break;
    }
  }
  return report;
}

// Labelings of [n] onto the domain of m (n >= |m|), lexicographic.
void for_each_surjection(int n, int size, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> lab(static_cast<std::size_t>(n), 0);
  std::vector<int> hits(static_cast<std::size_t>(size), 0);
  std::function<void(int)> go = [&](int i) {
    if (i == n) {
      if (std::all_of(hits.begin(), hits.end(), [](int h) { return h > 0; })) visit(lab);
      return;
    }
    int missing = static_cast<int>(std::count(hits.begin(), hits.end(), 0));
    if (missing > n - i) return;
    for (int e = 0; e < size; ++e) {
      lab[i] = e;
      ++hits[e];
      go(i + 1);
      --hits[e];
    }
  };
  go(0);
}

}  // namespace

FitReport check_fit(const ClassSpec& k, int bound) { return check(k, bound, false); }
FitReport check_fg_fit(const ClassSpec& k, int bound) { return check(k, bound, true); }

Formula labeled_diagram(const Structure& m, const std::vector<int>& labeling) {
  const Signature& sig = m.signature();
  const int n = static_cast<int>(labeling.size());
  std::vector<int> rep(static_cast<std::size_t>(m.size()), -1);
  for (int i = 0; i < n; ++i) {
    if (rep[labeling[i]] < 0) rep[labeling[i]] = i;
  }
  if (std::find(rep.begin(), rep.end(), -1) != rep.end()) {
    throw Error(ErrorKind::InvalidArgument, "labeling does not cover the domain");
  }
  auto var_of = [&](int e) { return Term::var(x(rep[e])); };
  std::vector<Formula> parts;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Formula eq = Formula::equal(Term::var(x(i)), Term::var(x(j)));
      parts.push_back(labeling[i] == labeling[j] ? eq : Formula::negate(eq));
    }
  }
  const int size = m.size();
  std::vector<int> tuple;
  for (std::size_t r = 0; r < sig.relations().size(); ++r) {
    const int arity = sig.relations()[r].arity;
    tuple.resize(static_cast<std::size_t>(arity));
    for (std::size_t t = 0; t < tuple_count(size, arity); ++t) {
      decode_tuple(t, size, arity, tuple);
      std::vector<Term> args;
      for (int e : tuple) args.push_back(var_of(e));
      Formula a = Formula::atom(sig.relations()[r].name, std::move(args));
      parts.push_back(m.holds_index(static_cast<int>(r), t) ? a : Formula::negate(a));
    }
  }
  for (std::size_t f = 0; f < sig.functions().size(); ++f) {
    const int arity = sig.functions()[f].arity;
    tuple.resize(static_cast<std::size_t>(arity));
    for (std::size_t t = 0; t < tuple_count(size, arity); ++t) {
      decode_tuple(t, size, arity, tuple);
      std::vector<Term> args;
      for (int e : tuple) args.push_back(var_of(e));
      parts.push_back(Formula::equal(Term::apply(sig.functions()[f].name, std::move(args)),
                                     var_of(m.apply_index(static_cast<int>(f), t))));
    }
  }
  for (std::size_t c = 0; c < sig.constants().size(); ++c) {
    parts.push_back(Formula::equal(Term::constant(sig.constants()[c]), var_of(m.constant(static_cast<int>(c)))));
  }
  return Formula::conj(std::move(parts));
}

Formula synthesize_chi(const Signature& sig, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "chi_n needs n >= 1");
  std::vector<Formula> parts;
  std::vector<int> tuple;
  for (const auto& f : sig.functions()) {
    tuple.resize(static_cast<std::size_t>(f.arity));
    for (std::size_t t = 0; t < tuple_count(n, f.arity); ++t) {
      decode_tuple(t, n, f.arity, tuple);
      std::vector<Term> args;
      for (int i : tuple) args.push_back(Term::var(x(i)));
      Term image = Term::apply(f.name, std::move(args));
      std::vector<Formula> options;
      for (int j = 0; j < n; ++j) options.push_back(Formula::equal(image, Term::var(x(j))));
      parts.push_back(Formula::disj(std::move(options)));
    }
  }
  for (const auto& c : sig.constants()) {
    std::vector<Formula> options;
    for (int i = 0; i < n; ++i) options.push_back(Formula::equal(Term::var(x(i)), Term::constant(c)));
    parts.push_back(Formula::disj(std::move(options)));
  }
  return Formula::conj(std::move(parts));
}

Formula synthesize_psi(const ClassSpec& k, int n) { return synthesize_psi(k, n, k.signature()); }

Formula synthesize_psi(const ClassSpec& k, int n, const Signature& sig) {
  require_same_signature(k.signature(), sig);
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "psi_n needs n >= 1");
  const bool relational = sig.functions().empty() && sig.constants().empty();
  std::vector<Formula> disjuncts;
  std::set<std::string> seen;
  auto add = [&](const Structure& m, const std::vector<int>& lab) {
    Formula d = labeled_diagram(m, lab);
    if (seen.insert(to_string(d)).second) disjuncts.push_back(std::move(d));
  };
  if (relational) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (const auto& m : k.representatives(n)) {
      std::iota(perm.begin(), perm.end(), 0);
      do {
        add(m, perm);
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  } else {
    for (int size = 1; size <= n; ++size) {
      for (const auto& m : k.representatives(size)) {
        for_each_surjection(n, size, [&](const std::vector<int>& lab) { add(m, lab); });
      }
    }
  }
  std::vector<std::string> vars;
  for (int i = 0; i < n; ++i) vars.push_back(x(i));
  Formula body = Formula::disj(std::move(disjuncts));
  if (relational) {
    std::vector<Formula> guard;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        guard.push_back(Formula::negate(Formula::equal(Term::var(x(i)), Term::var(x(j)))));
      }
    }
    if (!guard.empty()) body = Formula::implies(Formula::conj(std::move(guard)), std::move(body));
  } else {
    body = Formula::implies(synthesize_chi(sig, n), std::move(body));
  }
  return Formula::forall(std::move(vars), std::move(body));
}

std::vector<Formula> synthesize_psi_theory(const ClassSpec& k, int n) {
  std::vector<Formula> out;
  for (int i = 1; i <= n; ++i) out.push_back(synthesize_psi(k, i));
  return out;
}

}  // namespace falsilab
