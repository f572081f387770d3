#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace falsilab {

struct Symbol {
  std::string name;
  int arity = 0;
  bool operator==(const Symbol&) const = default;
};

// A first-order signature. Symbol lists keep declaration order, which fixes
// table layouts, enumeration order and canonical serialization.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::string name) : name_(std::move(name)) {}

  Signature& add_relation(std::string name, int arity);
  Signature& add_function(std::string name, int arity);
  Signature& add_constant(std::string name);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  [[nodiscard]] const std::vector<Symbol>& relations() const noexcept { return relations_; }
  [[nodiscard]] const std::vector<Symbol>& functions() const noexcept { return functions_; }
  [[nodiscard]] const std::vector<std::string>& constants() const noexcept { return constants_; }

  [[nodiscard]] std::optional<int> relation_index(std::string_view name) const;
  [[nodiscard]] std::optional<int> function_index(std::string_view name) const;
  [[nodiscard]] std::optional<int> constant_index(std::string_view name) const;
  [[nodiscard]] bool has_symbol(std::string_view name) const;

  [[nodiscard]] bool is_relational() const noexcept {
    return functions_.empty() && constants_.empty();
  }
  [[nodiscard]] int max_relation_arity() const noexcept;

  // Equality compares symbol lists only; the name is a label.
  friend bool operator==(const Signature& a, const Signature& b) {
    return a.relations_ == b.relations_ && a.functions_ == b.functions_ &&
           a.constants_ == b.constants_;
  }

 private:
  void check_fresh(std::string_view name) const;

  std::string name_;
  std::vector<Symbol> relations_;
  std::vector<Symbol> functions_;
  std::vector<std::string> constants_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

inline SignaturePtr make_signature(Signature sig) {
  return std::make_shared<const Signature>(std::move(sig));
}

// Throws SignatureMismatch unless both signatures have the same symbols.
void require_same_signature(const Signature& a, const Signature& b);

}  // namespace falsilab
