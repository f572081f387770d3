#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "falsilab/structure.hpp"

namespace falsilab {

// Exact isomorphism certificate: the minimal serialization of a structure.
// Ids compare bytewise; equal ids iff isomorphic structures.
class IsoClassId {
 public:
  IsoClassId() = default;
  explicit IsoClassId(std::string bytes) : bytes_(std::move(bytes)) {}

  [[nodiscard]] const std::string& bytes() const noexcept { return bytes_; }
  [[nodiscard]] std::string hex() const;
  static IsoClassId from_hex(const std::string& hex);

  auto operator<=>(const IsoClassId&) const = default;

 private:
  std::string bytes_;
};

struct CanonicalForm {
  IsoClassId id;
  // order[p] is the element placed at canonical position p.
  std::vector<int> order;
};

// Serialization under an ordering of the domain: the size, then for every
// position p and every relation (signature order) the truth values of the
// tuples over positions 0..p whose largest component is p (lexicographic),
// then every function table over all position tuples, then the constants.
// The canonical form is the minimum over orderings compatible with an
// iso-invariant colour refinement of the domain.
CanonicalForm canonical_form(const Structure& m, int size_cap = 10);
IsoClassId canonicalize(const Structure& m, int size_cap = 10);

// Canonical relabeling of m; element names become "0".."n-1".
Structure canonical_representative(const Structure& m, int size_cap = 10);

// Throws SignatureMismatch when signatures differ.
std::optional<Morphism> isomorphic(const Structure& m, const Structure& n);

// One canonical representative per isomorphism class of structures of size n,
// sorted by IsoClassId. Results are memoized per (signature, n).
const std::vector<Structure>& iso_representatives(const SignaturePtr& sig, int n, const Budget& budget = {});

// Transposition (a b) is an automorphism of m.
bool transposition_is_automorphism(const Structure& m, int a, int b);

}  // namespace falsilab
