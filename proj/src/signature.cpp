#include "falsilab/signature.hpp"

#include <algorithm>
#include <cctype>

#include "falsilab/error.hpp"

namespace falsilab {

namespace {

template <class List, class Key>
std::optional<int> find_index(const List& list, std::string_view name, Key key) {
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (key(list[i]) == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

bool valid_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto head = static_cast<unsigned char>(name.front());
  if (!std::isalpha(head) && head != '_') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_' || u == '\'';
  });
}

}  // namespace

void Signature::check_fresh(std::string_view name) const {
  if (!valid_identifier(name)) {
    throw Error(ErrorKind::InvalidArgument, "invalid symbol name '" + std::string(name) + "'");
  }
  if (has_symbol(name)) {
    throw Error(ErrorKind::InvalidArgument, "duplicate symbol '" + std::string(name) + "'");
  }
}

Signature& Signature::add_relation(std::string name, int arity) {
  check_fresh(name);
  if (arity < 1) throw Error(ErrorKind::Arity, "relation '" + name + "' needs arity >= 1");
  relations_.push_back({std::move(name), arity});
  return *this;
}

Signature& Signature::add_function(std::string name, int arity) {
  check_fresh(name);
  if (arity < 1) throw Error(ErrorKind::Arity, "function '" + name + "' needs arity >= 1");
  functions_.push_back({std::move(name), arity});
  return *this;
}

Signature& Signature::add_constant(std::string name) {
  check_fresh(name);
  constants_.push_back(std::move(name));
  return *this;
}

std::optional<int> Signature::relation_index(std::string_view name) const {
  return find_index(relations_, name, [](const Symbol& s) -> const std::string& { return s.name; });
}

std::optional<int> Signature::function_index(std::string_view name) const {
  return find_index(functions_, name, [](const Symbol& s) -> const std::string& { return s.name; });
}

std::optional<int> Signature::constant_index(std::string_view name) const {
  return find_index(constants_, name, [](const std::string& s) -> const std::string& { return s; });
}

bool Signature::has_symbol(std::string_view name) const {
  return relation_index(name) || function_index(name) || constant_index(name);
}

int Signature::max_relation_arity() const noexcept {
  int best = 0;
  for (const auto& r : relations_) best = std::max(best, r.arity);
  return best;
}

void require_same_signature(const Signature& a, const Signature& b) {
  if (!(a == b)) {
    throw Error(ErrorKind::SignatureMismatch,
                "signature mismatch between '" + a.name() + "' and '" + b.name() + "'");
  }
}

}  // namespace falsilab
