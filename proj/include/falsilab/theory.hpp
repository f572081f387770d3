#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "falsilab/eval.hpp"
#include "falsilab/formula.hpp"
#include "falsilab/signature.hpp"
#include "falsilab/structure.hpp"

namespace falsilab {

struct Theory {
  std::string name;
  SignaturePtr signature;
  std::vector<Formula> sentences;
  // Source text of each sentence as written (for reports).
  std::vector<std::string> sources;
  // Compiled sentences, shared between copies; filled by make().
  std::shared_ptr<const std::vector<CompiledFormula>> compiled;

  // Builds a theory, checking that every sentence is closed and well-signed.
  static Theory make(std::string name, SignaturePtr sig, std::vector<Formula> sentences);

  [[nodiscard]] bool holds_in(const Structure& m) const;
  [[nodiscard]] bool is_universal() const;
};

// Theory files: one sentence per line, `#` starts a comment. An optional
// `sig ...` line (or block) fixes the signature; otherwise it is given by
// `sig` or inferred from usage, with unbound names read as constants.
Theory parse_theory(std::string_view text, std::string name = "T", SignaturePtr sig = nullptr);
Theory load_theory(const std::string& path, SignaturePtr sig = nullptr);

std::string to_text(const Theory& t);

// The displayed acyclicity axiom A_n over a binary relation:
// ∀x1..xn ¬(R(x1,x2) ∧ ... ∧ R(x_{n-1},x_n) ∧ R(x_n,x1)).
Formula acyclicity_axiom(const std::string& relation, int n);

}  // namespace falsilab
