#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "falsilab/class_spec.hpp"
#include "falsilab/eval.hpp"
#include "falsilab/formula.hpp"

namespace falsilab {

struct DiagramLiteral {
  int relation = 0;
  std::vector<int> vars;  // 0-based variable indices
  bool positive = true;
  bool operator==(const DiagramLiteral&) const = default;
};

// A conjunction of literals over k distinct variables x1..xk.
struct Diagram {
  int vars = 0;
  std::vector<DiagramLiteral> literals;

  [[nodiscard]] std::string to_string(const Signature& sig) const;
  // The conjunction itself, free in x1..xk.
  [[nodiscard]] Formula as_formula(const Signature& sig) const;
  // The universal sentence forbidding the diagram on distinct elements:
  // ∀x1..xk (⋀_{i<j} xi ≠ xj → ¬D).
  [[nodiscard]] Formula as_sentence(const Signature& sig) const;
  bool operator==(const Diagram&) const = default;
};

// Canonical representative of a diagram under renaming of its variables.
Diagram canonical_diagram(const Diagram& d, const Signature& sig);

// Whether some injective assignment of x1..xk into m satisfies d.
bool realizes(const Structure& m, const Diagram& d);

struct ForbiddenSet {
  int bound = 0;              // maximum number of variables
  int enumeration_bound = 0;  // largest member size searched
  bool exact = false;         // complete without a size cutoff
  SignaturePtr signature;
  std::vector<Diagram> diagrams;  // minimal, canonical, ordered by (k, #literals, code)
};

struct ForbidOptions {
  // Members of size up to this bound are searched; defaults to max(n+2, 5)
  // for intensional classes and the largest member for extensional ones.
  std::optional<int> enumeration_bound;
  int max_atoms = 16;  // cube table has 3^atoms entries
};

// Minimal quantifier-free diagrams on at most n distinct variables realized
// by no member of K. Relational signatures only.
ForbiddenSet forbidden_configurations(const ClassSpec& k, int n, const ForbidOptions& options = {});

enum class Falsifiability { Falsifiable, NotFalsifiableAtScale };
std::string_view to_string(Falsifiability f);
Falsifiability falsifiable_at(const ClassSpec& k, int n, const ForbidOptions& options = {});

struct RelativeReport {
  bool relatively_falsifiable = false;
  // A diagram forbidden for K but realized in K′, when one exists.
  std::optional<Diagram> witness;
  std::size_t forbidden_in_k = 0;
  std::size_t forbidden_in_kp = 0;
};

// K falsifiable relative to K′ (K ⊆ K′): K forbids strictly more diagrams.
// Throws NotASubclass if a member of K up to the bound is not in K′.
RelativeReport relative_falsifiability_at(const ClassSpec& k, const ClassSpec& kp, int n,
                                          const ForbidOptions& options = {});

struct GroundLiteral {
  std::string relation;
  std::vector<std::string> args;
  bool positive = true;
};

struct ObservationSet {
  std::vector<std::string> constants;  // order of first appearance
  std::vector<GroundLiteral> literals;
};

// One ground literal per line: `edge(a,b)` or `!W(a)`; `#` comments.
ObservationSet parse_observations(std::string_view text);
ObservationSet load_observations(const std::string& path);
std::string to_text(const ObservationSet& obs);

struct RefutationReport {
  bool refuted = false;
  std::optional<std::size_t> sentence_index;
  std::string witness_sentence;
  std::string instance;
  std::vector<std::pair<std::string, std::string>> substitution;  // variable -> constant
  std::vector<std::size_t> skipped;  // non-universal sentences
};

// Grounds the universal sentences of T over the observed constants (distinct
// constants name distinct elements) and evaluates each instance in
// three-valued logic; unobserved atoms are unknown.
RefutationReport refute(const Theory& t, const ObservationSet& obs);

// The partial structure described by the observations over T's signature.
PartialStructure observation_structure(const Signature& sig, const SignaturePtr& ptr, const ObservationSet& obs);

struct DerivedRelation {
  std::vector<std::string> params;
  Formula body;
};

// `R(x,y) := exists t. Q(x,y,t)`; symbols are inferred into sig.
std::pair<std::string, DerivedRelation> parse_definition(std::string_view text, Signature& sig);

// Replaces each atom R(t̄) by the definition body with t̄ substituted.
Formula rewrite_derived_relation(const Formula& f, const std::map<std::string, DerivedRelation>& defs);

}  // namespace falsilab
