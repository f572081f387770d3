#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "falsilab/error.hpp"
#include "falsilab/signature.hpp"

namespace falsilab {

// Number of tuples of the given arity over an n-element domain. Throws
// SizeOverflow if it does not fit comfortably in memory.
std::size_t tuple_count(int n, int arity);

// Decodes a tuple index (first component most significant).
void decode_tuple(std::size_t index, int n, int arity, std::span<int> out);
std::size_t encode_tuple(std::span<const int> tuple, int n);

// A finite structure with a nonempty domain. Elements are addressed by their
// position 0..size()-1; names are opaque labels used by the text formats.
class Structure {
 public:
  Structure(SignaturePtr sig, std::vector<std::string> elements);
  Structure(SignaturePtr sig, int n);

  [[nodiscard]] const Signature& signature() const noexcept { return *sig_; }
  [[nodiscard]] const SignaturePtr& signature_ptr() const noexcept { return sig_; }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(elements_.size()); }
  [[nodiscard]] const std::vector<std::string>& elements() const noexcept { return elements_; }
  [[nodiscard]] const std::string& element_name(int e) const { return elements_.at(e); }
  [[nodiscard]] std::optional<int> find_element(std::string_view name) const;
  void rename_elements(std::vector<std::string> names);

  [[nodiscard]] bool holds(int rel, std::span<const int> args) const {
    return relations_[rel][encode_tuple(args, size())] != 0;
  }
  [[nodiscard]] bool holds_index(int rel, std::size_t tuple) const {
    return relations_[rel][tuple] != 0;
  }
  void set_relation(int rel, std::span<const int> args, bool value);
  void set_relation_index(int rel, std::size_t tuple, bool value) {
    relations_[rel][tuple] = value ? 1 : 0;
  }

  [[nodiscard]] int apply(int fn, std::span<const int> args) const {
    return functions_[fn][encode_tuple(args, size())];
  }
  [[nodiscard]] int apply_index(int fn, std::size_t tuple) const { return functions_[fn][tuple]; }
  void set_function(int fn, std::span<const int> args, int value);
  void set_function_index(int fn, std::size_t tuple, int value) { functions_[fn][tuple] = value; }

  [[nodiscard]] int constant(int c) const { return constants_[c]; }
  void set_constant(int c, int element);

  [[nodiscard]] const std::vector<std::uint8_t>& relation_table(int rel) const {
    return relations_[rel];
  }
  [[nodiscard]] const std::vector<int>& function_table(int fn) const { return functions_[fn]; }

  // All tuples in a relation, in lexicographic order.
  [[nodiscard]] std::vector<std::vector<int>> tuples(int rel) const;

  // Induced structure on the listed elements (in that order). The caller
  // guarantees closure under functions and constants; otherwise this throws.
  [[nodiscard]] Structure induced(std::span<const int> elems) const;

  // Structure isomorphic to this one where element e becomes perm[e].
  [[nodiscard]] Structure relabel(std::span<const int> perm) const;

  friend bool operator==(const Structure& a, const Structure& b);
  friend bool same_interpretation(const Structure& a, const Structure& b);

 private:
  void allocate();

  SignaturePtr sig_;
  std::vector<std::string> elements_;
  std::vector<std::vector<std::uint8_t>> relations_;
  std::vector<std::vector<int>> functions_;
  std::vector<int> constants_;
};

// Same interpretations on the same element positions, ignoring names.
bool same_interpretation(const Structure& a, const Structure& b);

// An injective map between domains; map[e] is the image of source element e.
struct Morphism {
  Structure source;
  Structure target;
  std::vector<int> map;
};

// Strong embedding test: injective, preserves and reflects relations,
// commutes with functions and fixes constants.
bool is_embedding(const Structure& source, const Structure& target, std::span<const int> map);

// Enumerates all embeddings of source into target in lexicographic order of
// the image vector. The callback returns false to stop early.
void for_each_embedding(const Structure& source, const Structure& target,
                        const std::function<bool(std::span<const int>)>& visit);
std::optional<std::vector<int>> find_embedding(const Structure& source, const Structure& target);

// Total count of structures on n elements, or nullopt on overflow.
std::optional<std::uint64_t> structure_count(const Signature& sig, int n);

// Enumerates every structure on domain {0..n-1} exactly once.
//
// Order: a mixed-radix counter over slots listed as relation tuples (relations
// in signature order, tuples lexicographic), then function entries, then
// constants. The first slot is the most significant digit, so the first
// structure is all-false / all-zero and the last slot changes fastest.
class StructureEnumerator {
 public:
  StructureEnumerator(SignaturePtr sig, int n, const Budget& budget = {});

  [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
  [[nodiscard]] const Structure& current() const noexcept { return current_; }
  // Advances to the next structure; returns false after the last one.
  bool next();

 private:
  struct Slot {
    int kind;  // 0 relation, 1 function, 2 constant
    int symbol;
    std::size_t tuple;
    int radix;
  };
  std::vector<Slot> slots_;
  std::vector<int> digits_;
  Structure current_;
  std::uint64_t count_ = 0;
};

std::vector<Structure> enumerate_structures(const SignaturePtr& sig, int n, const Budget& budget = {});
void for_each_structure(const SignaturePtr& sig, int n,
                        const std::function<void(const Structure&)>& visit,
                        const Budget& budget = {});

// Closure of seed together with all constants under the function tables,
// sorted ascending. Throws CapExceeded after more than cap closure rounds.
std::vector<int> closure(const Structure& m, std::span<const int> seed, int cap = 1 << 20);
Structure generated_substructure(const Structure& m, std::span<const int> seed, int cap = 1 << 20);

// Nonempty subsets of size <= k closed under functions and containing every
// constant, ordered by size then lexicographically.
std::vector<std::vector<int>> closed_subsets(const Structure& m, int k);
std::vector<Structure> substructures(const Structure& m, int k);

// Subsets of the domain with size in [lo, hi], by size then lexicographic.
std::vector<std::vector<int>> subsets_by_size(int n, int lo, int hi);

}  // namespace falsilab
