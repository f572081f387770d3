#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "falsilab/canonical.hpp"
#include "falsilab/class_spec.hpp"

namespace falsilab {

// Canonical ids of all generated substructures of m, sorted and distinct.
std::vector<IsoClassId> age(const Structure& m, int size_cap = 10);

// Embeddings f_n: base -> n and f_q: base -> q, as element maps.
struct AmalgamProblem {
  Structure base;
  Structure n;
  Structure q;
  std::vector<int> f_n;
  std::vector<int> f_q;
};

struct Amalgam {
  Structure target;
  std::vector<int> g_n;
  std::vector<int> g_q;
};

using EmbeddingObserver = std::function<void(const Structure& source, const Structure& target, std::span<const int>)>;

struct AmalgamOptions {
  // Images of n and q may only meet in the image of the base.
  bool strong = false;
  // Called with g_n and g_q of every amalgam found.
  EmbeddingObserver on_embedding;
  std::uint64_t node_budget = 1ULL << 24;
};

// Searches members of k with at most |n| + |q| - |base| elements for
// commuting embeddings. Non-base points may be identified unless strong.
std::optional<Amalgam> find_amalgam(const ClassSpec& k, const AmalgamProblem& problem,
                                    const AmalgamOptions& options = {});

struct HpCounterexample {
  Structure member;
  Structure substructure;
  std::vector<int> elements;
};

struct JepCounterexample {
  Structure first;
  Structure second;
};

struct HpVerdict {
  bool holds = true;
  std::optional<HpCounterexample> counterexample;
};

struct JepVerdict {
  bool holds = true;
  std::optional<JepCounterexample> counterexample;
  std::size_t pairs_checked = 0;
};

struct ApVerdict {
  bool holds = true;
  std::optional<AmalgamProblem> counterexample;
  std::size_t problems_checked = 0;
};

// Members of size <= bound, in order of size then canonical id. All verdicts
// hold up to the bound only.
HpVerdict check_hp(const ClassSpec& k, int bound);
JepVerdict check_jep(const ClassSpec& k, int bound, const AmalgamOptions& options = {});
// Problems: a member n, a nonempty proper subset A of its domain, a member q
// larger than A and every embedding of n|A into q.
ApVerdict check_ap(const ClassSpec& k, int bound, const AmalgamOptions& options = {});

struct FraisseReport {
  int bound = 0;
  HpVerdict hp;
  JepVerdict jep;
  ApVerdict ap;
  [[nodiscard]] bool fraisse() const { return hp.holds && jep.holds && ap.holds; }
};

FraisseReport check_fraisse(const ClassSpec& k, int bound, const AmalgamOptions& options = {});

struct ChainOptions {
  int max_rounds = 64;
  int max_size = 200;
};

// A finite approximation of the Fraisse limit. Stage i+1 extends stage i and
// inclusions[i] is the embedding stage i -> stage i+1.
struct ChainState {
  std::vector<Structure> stages;
  std::vector<std::vector<int>> inclusions;
  int level = 0;
  // Largest l <= level such that every one-point extension over a subset of
  // size <= l-1 is realized in the final stage.
  int level_achieved = 0;
  bool closed = false;  // the last round added nothing
  int rounds = 0;
  std::uint64_t seed = 0;
  [[nodiscard]] const Structure& current() const { return stages.back(); }
};

// Repeatedly realizes every one-point extension over subsets of size <=
// level-1, in order of subset then extension pattern. New tuples between the
// added point and the rest are chosen depth-first in a seeded order.
ChainState generic_chain(const ClassSpec& k, int level, std::uint64_t seed, const ChainOptions& options = {});

// Complete types of injective k-tuples, as the relation tables of the induced
// labeled structure.
using TupleType = std::vector<std::uint8_t>;
std::set<TupleType> realized_types(const Structure& m, int k);
std::set<TupleType> allowed_types(const ClassSpec& cls, int k);

}  // namespace falsilab
