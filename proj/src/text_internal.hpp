#pragma once

#include <vector>

#include "falsilab/text_format.hpp"
#include "lexer.hpp"

namespace falsilab::detail {

// Parses `sig NAME { ... }` starting at the `sig` keyword.
SignaturePtr parse_signature_block(Lexer& lex);

// Parses `structure NAME over SIG { ... }` starting at the keyword.
NamedStructure parse_structure_block(Lexer& lex, const std::vector<SignaturePtr>& known);

}  // namespace falsilab::detail
