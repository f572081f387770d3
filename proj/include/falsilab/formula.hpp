#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace falsilab {

// Terms and formulas refer to symbols by name; they are resolved against a
// signature when compiled for evaluation.
struct Term {
  enum class Kind { Variable, Constant, Function };
  Kind kind = Kind::Variable;
  std::string name;
  std::vector<Term> args;

  static Term var(std::string name) { return {Kind::Variable, std::move(name), {}}; }
  static Term constant(std::string name) { return {Kind::Constant, std::move(name), {}}; }
  static Term apply(std::string name, std::vector<Term> args) {
    return {Kind::Function, std::move(name), std::move(args)};
  }
  bool operator==(const Term&) const = default;
};

class Formula {
 public:
  enum class Kind { True, False, Atom, Equal, Not, And, Or, Implies, Iff, Forall, Exists };

  static Formula top();
  static Formula bottom();
  static Formula atom(std::string relation, std::vector<Term> args);
  static Formula equal(Term lhs, Term rhs);
  static Formula negate(Formula f);
  // Empty conjunction is true and empty disjunction is false; a single
  // operand is returned unchanged.
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula forall(std::vector<std::string> vars, Formula body);
  static Formula exists(std::vector<std::string> vars, Formula body);
  // Quantifier of the given kind (Forall or Exists).
  static Formula quantify(Kind kind, std::vector<std::string> vars, Formula body);

  [[nodiscard]] Kind kind() const noexcept { return node_->kind; }
  [[nodiscard]] const std::string& symbol() const noexcept { return node_->symbol; }
  [[nodiscard]] const std::vector<Term>& terms() const noexcept { return node_->terms; }
  [[nodiscard]] const std::vector<Formula>& children() const noexcept { return node_->children; }
  [[nodiscard]] const std::vector<std::string>& variables() const noexcept { return node_->vars; }
  [[nodiscard]] const Formula& child(std::size_t i = 0) const { return node_->children.at(i); }
  [[nodiscard]] bool is_quantifier() const noexcept {
    return kind() == Kind::Forall || kind() == Kind::Exists;
  }
  [[nodiscard]] bool is_literal_atom() const noexcept {
    return kind() == Kind::Atom || kind() == Kind::Equal;
  }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node {
    Kind kind = Kind::True;
    std::string symbol;
    std::vector<Term> terms;
    std::vector<Formula> children;
    std::vector<std::string> vars;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Node node);

  std::shared_ptr<const Node> node_;
};

// Free variables in order of first occurrence.
std::vector<std::string> free_variables(const Formula& f);
void collect_term_variables(const Term& t, std::vector<std::string>& out);
bool is_closed(const Formula& f);
bool is_quantifier_free(const Formula& f);

// Every variable name occurring anywhere (bound or free).
std::set<std::string> all_variable_names(const Formula& f);

// Capture-avoiding substitution of terms for free variables.
Formula substitute(const Formula& f, const std::map<std::string, Term>& sub);
Term substitute(const Term& t, const std::map<std::string, Term>& sub);

std::string to_string(const Term& t);
// Pretty-printer matching the parser grammar. Binary connectives are
// parenthesized by precedence; quantifiers are parenthesized when they occur
// as an operand; negated equality prints as `!(a = b)`.
std::string to_string(const Formula& f);

// Number of nodes, used for size guards.
std::size_t formula_size(const Formula& f);

}  // namespace falsilab

namespace falsilab {

// φ(x̄; ȳ): a formula with its free variables split into object variables x̄
// and parameter variables ȳ.
struct PartitionedFormula {
  Formula formula;
  std::vector<std::string> objects;
  std::vector<std::string> params;
};

// Checks disjointness and that x̄, ȳ cover the free variables.
void validate_partition(const PartitionedFormula& pf);

}  // namespace falsilab
