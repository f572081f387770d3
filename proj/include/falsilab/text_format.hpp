#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "falsilab/signature.hpp"
#include "falsilab/structure.hpp"

namespace falsilab {

// Text formats:
//   sig coin { rel H/1; fun f/1; const c0 }
//   structure w over coin { dom = {a,b}; H = {a}; f = {a->b, b->a}; c0 = a }
// Relation bodies list tuples `(a,b)`; unary relations may list bare
// elements. Functions of arity > 1 use `(a,b)->c`. If `over` names a
// signature that is not declared, the signature is inferred from the body.

struct NamedStructure {
  std::string name;
  Structure structure;
};

struct Document {
  std::vector<SignaturePtr> signatures;
  std::vector<NamedStructure> structures;
};

Signature parse_signature(std::string_view text);
Document parse_document(std::string_view text, const std::vector<SignaturePtr>& known = {});
// Parses a document holding exactly one structure.
Structure parse_structure(std::string_view text, const std::vector<SignaturePtr>& known = {});

std::string to_text(const Signature& sig);
std::string to_text(const Structure& m, std::string_view name = "M");

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace falsilab
