#pragma once

#include <string_view>

#include "falsilab/formula.hpp"
#include "falsilab/signature.hpp"

namespace falsilab {

// Grammar (loosest to tightest):
//   formula  := quant | iff
//   quant    := ('forall' | 'exists') var (',' var)* '.' formula
//   iff      := imp ('<->' imp)*          left associative
//   imp      := or ('->' imp)?            right associative
//   or       := and ('|' and)*
//   and      := unary ('&' unary)*
//   unary    := '!' unary | quant | '(' formula ')' | 'true' | 'false' | atom
//   atom     := R '(' term (',' term)* ')' | term '=' term | term '!=' term
//   term     := var | const | f '(' term (',' term)* ')'
// `t != u` is sugar for `!(t = u)`. Bound variables are renamed to x0, x1, ...
// in binder preorder, skipping names that occur free.

struct ParseOptions {
  // Infer symbols and arities from usage instead of requiring a signature.
  bool infer_signature = false;
  // When inferring, treat unbound bare names as constants rather than free
  // variables (used for theory files and observation data).
  bool free_names_as_constants = false;
};

Formula parse_formula(std::string_view text, const Signature& sig);
Formula parse_sentence(std::string_view text, const Signature& sig);

// Inference mode: symbols found in the text are added to `sig` (which may
// already hold symbols). Throws Arity on conflicting uses.
Formula parse_formula_into(std::string_view text, Signature& sig, const ParseOptions& options);

// `R(x;y)` shorthand or the general form `x1,x2 ; y1 : formula`.
PartitionedFormula parse_partitioned(std::string_view text, const Signature& sig);
PartitionedFormula parse_partitioned_into(std::string_view text, Signature& sig);

}  // namespace falsilab
