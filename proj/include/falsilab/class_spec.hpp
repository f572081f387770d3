#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "falsilab/canonical.hpp"
#include "falsilab/error.hpp"
#include "falsilab/theory.hpp"

namespace falsilab {

// Calls visit on every model of the theory with domain {0..n-1} (labeled,
// each exactly once). Relational universal theories are searched element by
// element, checking each induced prefix; other theories are pruned with the
// three-valued evaluator after each element's entries are fixed.
void for_each_model(const Theory& theory, int n, const std::function<void(const Structure&)>& visit,
                    const Budget& budget = {});

// A class of finite structures, given by a theory (members are its finite
// models) or by an explicit list of members up to isomorphism.
class ClassSpec {
 public:
  enum class Kind { Intensional, Extensional };

  static ClassSpec intensional(Theory theory, int size_cap = 6, Budget budget = {});
  // Members are deduplicated by canonical id; all must share the signature.
  static ClassSpec extensional(std::string name, SignaturePtr sig, const std::vector<Structure>& members,
                               Budget budget = {});

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] bool is_intensional() const noexcept { return kind_ == Kind::Intensional; }
  [[nodiscard]] const Signature& signature() const noexcept { return *sig_; }
  [[nodiscard]] const SignaturePtr& signature_ptr() const noexcept { return sig_; }
  [[nodiscard]] int size_cap() const noexcept { return size_cap_; }
  [[nodiscard]] const Budget& budget() const noexcept { return budget_; }
  [[nodiscard]] const Theory& theory() const;

  [[nodiscard]] bool contains(const Structure& m) const;

  // Canonical representatives of the members of size n, sorted by id.
  [[nodiscard]] const std::vector<Structure>& representatives(int n) const;
  // Visits at least one member from every isomorphism class of size n
  // (labeled models for intensional classes, representatives otherwise).
  void visit_members(int n, const std::function<void(const Structure&)>& visit) const;

  // Largest member size for extensional classes.
  [[nodiscard]] int max_member_size() const;
  // Membership is preserved under substructures by construction (universal
  // theory); extensional classes answer false.
  [[nodiscard]] bool known_hereditary() const;

  ClassSpec with_name(std::string name) const;
  ClassSpec with_size_cap(int cap) const;
  ClassSpec with_budget(Budget budget) const;

 private:
  struct Cache;
  ClassSpec() = default;

  std::string name_;
  Kind kind_ = Kind::Intensional;
  SignaturePtr sig_;
  int size_cap_ = 6;
  Budget budget_;
  std::optional<Theory> theory_;
  std::vector<IsoClassId> member_ids_;  // sorted, extensional only
  std::vector<Structure> members_;      // canonical, sorted by (size, id)
  bool universal_ = false;
  std::shared_ptr<Cache> cache_;
};

// Class spec files:
//   sig digraph { rel edge/2 }
//   class acyclic over digraph intensional cap 5 {
//     forall x. !edge(x,x)
//   }
//   class k over digraph theory "acyclic.fot" cap 5
//   class small over digraph extensional { structure a over digraph { dom = {0} ; edge = {} } }
// Sentences inside an intensional body are one per line; `#` comments.
std::vector<ClassSpec> parse_class_specs(std::string_view text, const std::string& base_dir = ".");
std::vector<ClassSpec> load_class_specs(const std::string& path);
// The named class, or the first one when name is empty.
ClassSpec load_class_spec(const std::string& path, const std::string& name = "");

}  // namespace falsilab
