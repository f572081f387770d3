#pragma once

#include <string>
#include <vector>

#include "falsilab/signature.hpp"
#include "falsilab/structure.hpp"
#include "falsilab/theory.hpp"

namespace falsilab {

// Names of the symbols added by the time-indexed language.
inline constexpr const char* kObjectPredicate = "O";
inline constexpr const char* kTimePredicate = "tau";
inline constexpr const char* kTimeOrder = "lt";
inline constexpr const char* kSuccessor = "succ";

// L_tau over a relational base signature: each R/m becomes R/(m+1) with the
// time as last argument, plus O/1, tau/1 and lt/2. The discrete variant adds
// the successor as a binary relation succ(t, t').
SignaturePtr time_indexed_signature(const Signature& base, bool discrete = false);

// T_tau: every element is an object or a time and not both; relation
// instances take objects and a time; lt is a strict linear order on the
// times and relates times only. The discrete variant adds that succ only
// links a time to an immediate lt-successor.
Theory time_indexed_theory(const Signature& base, bool discrete = false);

// Renders a sequence of base structures on a common object set as a discrete
// time-indexed structure: objects o0..o{n-1}, times t0..t{h-1}.
Structure time_indexed_structure(const SignaturePtr& indexed, const std::vector<Structure>& worlds);

// Embeddings between time-indexed structures restrict to order embeddings of
// the time points.
bool restricts_to_order_embedding(const Structure& source, const Structure& target, std::span<const int> map);

}  // namespace falsilab
