#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "falsilab/formula.hpp"
#include "falsilab/structure.hpp"

namespace falsilab {

// Kleene truth values.
enum class Truth : std::uint8_t { False = 0, True = 1, Unknown = 2 };

inline Truth truth_of(bool b) { return b ? Truth::True : Truth::False; }
std::string_view to_string(Truth t);

// A structure whose relations may be undetermined and whose function values
// and constants may be unknown (-1).
class PartialStructure {
 public:
  PartialStructure(SignaturePtr sig, std::vector<std::string> elements);
  PartialStructure(SignaturePtr sig, int n);
  explicit PartialStructure(const Structure& m);

  [[nodiscard]] const Signature& signature() const noexcept { return *sig_; }
  [[nodiscard]] const SignaturePtr& signature_ptr() const noexcept { return sig_; }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(elements_.size()); }
  [[nodiscard]] const std::vector<std::string>& elements() const noexcept { return elements_; }
  [[nodiscard]] std::optional<int> find_element(std::string_view name) const;

  [[nodiscard]] Truth holds(int rel, std::span<const int> args) const {
    return static_cast<Truth>(relations_[rel][encode_tuple(args, size())]);
  }
  [[nodiscard]] Truth holds_index(int rel, std::size_t tuple) const {
    return static_cast<Truth>(relations_[rel][tuple]);
  }
  void set_relation(int rel, std::span<const int> args, Truth value);
  void set_relation_index(int rel, std::size_t tuple, Truth value) {
    relations_[rel][tuple] = static_cast<std::uint8_t>(value);
  }

  [[nodiscard]] int apply(int fn, std::span<const int> args) const {
    return functions_[fn][encode_tuple(args, size())];
  }
  [[nodiscard]] int apply_index(int fn, std::size_t tuple) const { return functions_[fn][tuple]; }
  void set_function_index(int fn, std::size_t tuple, int value) { functions_[fn][tuple] = value; }
  [[nodiscard]] int constant(int c) const { return constants_[c]; }
  void set_constant(int c, int element) { constants_.at(c) = element; }

  [[nodiscard]] bool is_complete() const;
  // Requires is_complete().
  [[nodiscard]] Structure to_structure() const;

 private:
  SignaturePtr sig_;
  std::vector<std::string> elements_;
  std::vector<std::vector<std::uint8_t>> relations_;
  std::vector<std::vector<int>> functions_;
  std::vector<int> constants_;
};

using Assignment = std::map<std::string, int>;

// A formula resolved against a signature and rewritten for evaluation:
// negation normal form followed by miniscoping, with variables mapped to
// slots. The rewrite preserves truth values in both two- and three-valued
// semantics.
class CompiledFormula {
 public:
  // free_order fixes the slot order of free variables; it must list every
  // free variable (extra names are allowed). Defaults to first occurrence.
  CompiledFormula(const Formula& f, const Signature& sig, std::vector<std::string> free_order = {});

  [[nodiscard]] const std::vector<std::string>& free_variables() const noexcept { return free_; }

  [[nodiscard]] bool holds(const Structure& m, std::span<const int> free_values = {}) const;
  // Quantifiers range over elements 0..limit-1 only. For relational
  // signatures this evaluates the induced substructure on that prefix.
  [[nodiscard]] bool holds_prefix(const Structure& m, int limit, std::span<const int> free_values = {}) const;
  [[nodiscard]] Truth holds3(const PartialStructure& m, std::span<const int> free_values = {}) const;
  [[nodiscard]] Truth holds3_prefix(const PartialStructure& m, int limit, std::span<const int> free_values = {}) const;

  struct TermNode {
    enum class Kind : std::uint8_t { Var, Const, Func } kind;
    int index;
    std::vector<int> args;
  };
  enum class Op : std::uint8_t { True, False, Atom, NotAtom, Eq, NotEq, And, Or, Iff, Forall, Exists };
  struct Node {
    Op op;
    int rel = -1;
    bool plain_vars = false;
    std::vector<int> args;   // term ids (atoms, equalities)
    std::vector<int> kids;   // node ids
    std::vector<int> slots;  // quantified slots
  };

 private:
  friend struct EvalAccess;
  std::vector<std::string> free_;
  std::vector<TermNode> terms_;
  std::vector<Node> nodes_;
  int root_ = 0;
  int slot_count_ = 0;
  int signature_functions_ = 0;
};

bool evaluate(const Structure& m, const Formula& f, const Assignment& env = {});
Truth evaluate3(const PartialStructure& m, const Formula& f, const Assignment& env = {});

// Negation normal form: negations only on atoms, -> eliminated, <-> kept
// with negation pushed into its right operand, constants folded.
Formula to_nnf(const Formula& f);
// Pushes quantifiers inward one variable at a time (innermost first).
Formula miniscope(const Formula& f);

}  // namespace falsilab
