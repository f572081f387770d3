#pragma once

#include <string>

#include "falsilab/formula.hpp"

namespace falsilab {

// Syntactic classification of a closed formula. Levels are computed after
// deleting vacuous quantifiers and double negations: pi_level = p means the
// formula is equivalent (by prenex transformations alone) to a Π_p sentence,
// likewise sigma_level for Σ_s. Quantifier-free formulas have both levels 0.
struct SyntaxClass {
  bool quantifier_free = false;
  bool universal = false;    // Π_1 (includes quantifier-free)
  bool existential = false;  // Σ_1 (includes quantifier-free)
  bool uncaf = false;        // ∀x̄ ¬(a_1 ∧ ... ∧ a_k) with atoms a_i
  int pi_level = 0;
  int sigma_level = 0;

  // "qf", "Pi<p>", "Sigma<s>" or "Pi<p>,Sigma<s>" when both are minimal.
  [[nodiscard]] std::string prenex_class() const;
};

// Throws OpenFormula if f has free variables.
SyntaxClass classify_syntax(const Formula& f);
// Same analysis for formulas with free variables (treated as parameters).
SyntaxClass classify_formula(const Formula& f);

// Removes quantified variables that do not occur free in the body and
// collapses double negations.
Formula strip_vacuous(const Formula& f);

// Logically equivalent prenex form. Quantifier-free input is returned
// unchanged; quantified variables are renamed apart where needed and merged
// into as few alternating blocks as the greedy merge finds.
Formula to_prenex(const Formula& f);

}  // namespace falsilab
