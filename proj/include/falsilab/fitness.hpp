#pragma once

#include <optional>
#include <string>
#include <vector>

#include "falsilab/class_spec.hpp"
#include "falsilab/formula.hpp"

namespace falsilab {

struct IrrevocabilityCounterexample {
  Structure member;
  Structure substructure;  // outside the class
  std::vector<int> elements;  // positions of the substructure inside member
};

// Bounded check of the FIT clauses. Every verdict holds "up to bound" only.
struct FitReport {
  int bound = 0;
  bool finitely_generated = false;  // fg-FIT variant
  // A structure of size <= bound outside the class, if any.
  std::optional<Structure> nontrivial_witness;
  // A finite structure outside the class all of whose finite substructures
  // are members. Every finite structure is a substructure of itself, so no
  // finite witness exists; the slot stays empty and exists for the report.
  std::optional<Structure> finite_testability_counterexample;
  std::optional<IrrevocabilityCounterexample> irrevocability_counterexample;
  // Non-members of size >= 2 with no proper (finitely generated)
  // substructure. For these the testability clause carries no information.
  std::vector<Structure> vacuous_substructure_warning;

  [[nodiscard]] bool nontrivial() const { return nontrivial_witness.has_value(); }
  [[nodiscard]] bool finitely_testable() const { return !finite_testability_counterexample; }
  [[nodiscard]] bool irrevocably_testable() const { return !irrevocability_counterexample; }
  [[nodiscard]] bool fit() const { return nontrivial() && finitely_testable() && irrevocably_testable(); }
};

FitReport check_fit(const ClassSpec& k, int bound);
FitReport check_fg_fit(const ClassSpec& k, int bound);

// Conjunction of the complete diagram of m under the assignment
// x_{i+1} -> labeling[i]. The labeling must be onto the domain of m. Atoms use
// the first variable naming each element; equalities fix the rest.
Formula labeled_diagram(const Structure& m, const std::vector<int>& labeling);

// chi_n(x1..xn): the assigned set is closed under every function and
// contains every constant. Empty conjunctions are true.
Formula synthesize_chi(const Signature& sig, int n);

// psi_n. Relational signatures get the distinctness guard and one disjunct per
// labeled member of size n; otherwise chi_n guards disjuncts over the labeled
// members of size <= n. No members gives an empty (false) disjunction.
Formula synthesize_psi(const ClassSpec& k, int n);
Formula synthesize_psi(const ClassSpec& k, int n, const Signature& sig);
// psi_1 .. psi_n.
std::vector<Formula> synthesize_psi_theory(const ClassSpec& k, int n);

}  // namespace falsilab
