#include "falsilab/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace falsilab {

namespace {

constexpr std::size_t kMaxTableEntries = std::size_t{1} << 28;

}  // namespace

std::size_t tuple_count(int n, int arity) {
  std::size_t total = 1;
  for (int i = 0; i < arity; ++i) {
    if (total > kMaxTableEntries / static_cast<std::size_t>(std::max(n, 1))) {
      throw Error(ErrorKind::SizeOverflow, "relation table too large");
    }
    total *= static_cast<std::size_t>(n);
  }
  return total;
}

void decode_tuple(std::size_t index, int n, int arity, std::span<int> out) {
  for (int i = arity - 1; i >= 0; --i) {
    out[i] = static_cast<int>(index % static_cast<std::size_t>(n));
    index /= static_cast<std::size_t>(n);
  }
}

std::size_t encode_tuple(std::span<const int> tuple, int n) {
  std::size_t index = 0;
  for (int v : tuple) index = index * static_cast<std::size_t>(n) + static_cast<std::size_t>(v);
  return index;
}

Structure::Structure(SignaturePtr sig, std::vector<std::string> elements)
    : sig_(std::move(sig)), elements_(std::move(elements)) {
  if (!sig_) throw Error(ErrorKind::InvalidArgument, "structure needs a signature");
  if (elements_.empty()) throw Error(ErrorKind::EmptyDomain, "structures must have a nonempty domain");
  std::vector<std::string> sorted = elements_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::InvalidArgument, "duplicate element name in domain");
  }
  allocate();
}

Structure::Structure(SignaturePtr sig, int n) : sig_(std::move(sig)) {
  if (!sig_) throw Error(ErrorKind::InvalidArgument, "structure needs a signature");
  if (n < 1) throw Error(ErrorKind::EmptyDomain, "structures must have a nonempty domain");
  elements_.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) elements_.push_back(std::to_string(i));
  allocate();
}

void Structure::allocate() {
  const int n = size();
  relations_.clear();
  functions_.clear();
  for (const auto& r : sig_->relations()) relations_.emplace_back(tuple_count(n, r.arity), 0);
  for (const auto& f : sig_->functions()) functions_.emplace_back(tuple_count(n, f.arity), 0);
  constants_.assign(sig_->constants().size(), 0);
}

std::optional<int> Structure::find_element(std::string_view name) const {
  for (int i = 0; i < size(); ++i) {
    if (elements_[i] == name) return i;
  }
  return std::nullopt;
}

void Structure::rename_elements(std::vector<std::string> names) {
  if (names.size() != elements_.size()) {
    throw Error(ErrorKind::InvalidArgument, "rename_elements: wrong number of names");
  }
  elements_ = std::move(names);
}

void Structure::set_relation(int rel, std::span<const int> args, bool value) {
  if (static_cast<int>(args.size()) != sig_->relations().at(rel).arity) {
    throw Error(ErrorKind::Arity, "wrong tuple length for " + sig_->relations()[rel].name);
  }
  for (int a : args) {
    if (a < 0 || a >= size()) throw Error(ErrorKind::InvalidArgument, "element out of range");
  }
  relations_[rel][encode_tuple(args, size())] = value ? 1 : 0;
}

void Structure::set_function(int fn, std::span<const int> args, int value) {
  if (static_cast<int>(args.size()) != sig_->functions().at(fn).arity) {
    throw Error(ErrorKind::Arity, "wrong tuple length for " + sig_->functions()[fn].name);
  }
  for (int a : args) {
    if (a < 0 || a >= size()) throw Error(ErrorKind::InvalidArgument, "element out of range");
  }
  if (value < 0 || value >= size()) throw Error(ErrorKind::InvalidArgument, "element out of range");
  functions_[fn][encode_tuple(args, size())] = value;
}

void Structure::set_constant(int c, int element) {
  if (element < 0 || element >= size()) throw Error(ErrorKind::InvalidArgument, "element out of range");
  constants_.at(c) = element;
}

std::vector<std::vector<int>> Structure::tuples(int rel) const {
  const int arity = sig_->relations().at(rel).arity;
  std::vector<std::vector<int>> out;
  const auto& table = relations_[rel];
  for (std::size_t t = 0; t < table.size(); ++t) {
    if (!table[t]) continue;
    std::vector<int> tuple(static_cast<std::size_t>(arity));
    decode_tuple(t, size(), arity, tuple);
    out.push_back(std::move(tuple));
  }
  return out;
}

Structure Structure::induced(std::span<const int> elems) const {
  const int n = size();
  std::vector<int> position(static_cast<std::size_t>(n), -1);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    int e = elems[i];
    if (e < 0 || e >= n || position[e] != -1) {
      throw Error(ErrorKind::InvalidArgument, "induced: invalid element list");
    }
    position[e] = static_cast<int>(i);
    names.push_back(elements_[e]);
  }
  Structure out(sig_, std::move(names));
  const int m = out.size();
  std::vector<int> tuple;
  for (std::size_t r = 0; r < relations_.size(); ++r) {
    const int arity = sig_->relations()[r].arity;
    tuple.resize(static_cast<std::size_t>(arity));
    for (std::size_t t = 0; t < out.relations_[r].size(); ++t) {
      decode_tuple(t, m, arity, tuple);
      for (auto& v : tuple) v = elems[v];
      out.relations_[r][t] = relations_[r][encode_tuple(tuple, n)];
    }
  }
  for (std::size_t f = 0; f < functions_.size(); ++f) {
    const int arity = sig_->functions()[f].arity;
    tuple.resize(static_cast<std::size_t>(arity));
    for (std::size_t t = 0; t < out.functions_[f].size(); ++t) {
      decode_tuple(t, m, arity, tuple);
      for (auto& v : tuple) v = elems[v];
      int value = position[functions_[f][encode_tuple(tuple, n)]];
      if (value < 0) throw Error(ErrorKind::InvalidArgument, "induced: subset not closed under functions");
      out.functions_[f][t] = value;
    }
  }
  for (std::size_t c = 0; c < constants_.size(); ++c) {
    int value = position[constants_[c]];
    if (value < 0) throw Error(ErrorKind::InvalidArgument, "induced: subset misses a constant");
    out.constants_[c] = value;
  }
  return out;
}

Structure Structure::relabel(std::span<const int> perm) const {
  const int n = size();
  if (static_cast<int>(perm.size()) != n) throw Error(ErrorKind::InvalidArgument, "relabel: bad permutation");
  std::vector<int> inverse(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    if (perm[i] < 0 || perm[i] >= n || inverse[perm[i]] != -1) {
      throw Error(ErrorKind::InvalidArgument, "relabel: bad permutation");
    }
    inverse[perm[i]] = i;
  }
  // New position p holds old element inverse[p].
  return induced(inverse);
}

bool operator==(const Structure& a, const Structure& b) {
  return a.elements_ == b.elements_ && same_interpretation(a, b);
}

bool same_interpretation(const Structure& a, const Structure& b) {
  return *a.sig_ == *b.sig_ && a.size() == b.size() && a.relations_ == b.relations_ &&
         a.functions_ == b.functions_ && a.constants_ == b.constants_;
}

bool is_embedding(const Structure& source, const Structure& target, std::span<const int> map) {
  const Signature& sig = source.signature();
  if (!(sig == target.signature())) return false;
  const int n = source.size();
  if (static_cast<int>(map.size()) != n) return false;
  std::vector<char> used(static_cast<std::size_t>(target.size()), 0);
  for (int v : map) {
    if (v < 0 || v >= target.size() || used[v]) return false;
    used[v] = 1;
  }
  std::vector<int> tuple;
  std::vector<int> image;
  for (std::size_t r = 0; r < sig.relations().size(); ++r) {
    const int arity = sig.relations()[r].arity;
    tuple.resize(static_cast<std::size_t>(arity));
    image.resize(static_cast<std::size_t>(arity));
    const std::size_t total = source.relation_table(static_cast<int>(r)).size();
    for (std::size_t t = 0; t < total; ++t) {
      decode_tuple(t, n, arity, tuple);
      for (int i = 0; i < arity; ++i) image[i] = map[tuple[i]];
      if (source.holds_index(static_cast<int>(r), t) != target.holds(static_cast<int>(r), image)) return false;
    }
  }
  for (std::size_t f = 0; f < sig.functions().size(); ++f) {
    const int arity = sig.functions()[f].arity;
    tuple.resize(static_cast<std::size_t>(arity));
    image.resize(static_cast<std::size_t>(arity));
    const std::size_t total = source.function_table(static_cast<int>(f)).size();
    for (std::size_t t = 0; t < total; ++t) {
      decode_tuple(t, n, arity, tuple);
      for (int i = 0; i < arity; ++i) image[i] = map[tuple[i]];
      if (map[source.apply_index(static_cast<int>(f), t)] != target.apply(static_cast<int>(f), image)) return false;
    }
  }
  for (std::size_t c = 0; c < sig.constants().size(); ++c) {
    if (map[source.constant(static_cast<int>(c))] != target.constant(static_cast<int>(c))) return false;
  }
  return true;
}

namespace {

// Checks every relation tuple of the source whose components are all among
// the first `depth` mapped elements and which mentions element depth-1.
bool consistent_prefix(const Structure& source, const Structure& target, std::span<const int> map, int depth) {
  const Signature& sig = source.signature();
  const int last = depth - 1;
  std::vector<int> tuple;
  std::vector<int> image;
  for (std::size_t r = 0; r < sig.relations().size(); ++r) {
    const int arity = sig.relations()[r].arity;
    tuple.resize(static_cast<std::size_t>(arity));
    image.resize(static_cast<std::size_t>(arity));
    const std::size_t total = tuple_count(depth, arity);
    for (std::size_t t = 0; t < total; ++t) {
      decode_tuple(t, depth, arity, tuple);
      if (std::find(tuple.begin(), tuple.end(), last) == tuple.end()) continue;
      for (int i = 0; i < arity; ++i) image[i] = map[tuple[i]];
      if (source.holds(static_cast<int>(r), tuple) != target.holds(static_cast<int>(r), image)) return false;
    }
  }
  return true;
}

}  // namespace

void for_each_embedding(const Structure& source, const Structure& target,
                        const std::function<bool(std::span<const int>)>& visit) {
  require_same_signature(source.signature(), target.signature());
  const int n = source.size();
  const int m = target.size();
  if (n > m) return;
  const bool relational = source.signature().is_relational();
  std::vector<int> map(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  bool stop = false;
  std::function<void(int)> go = [&](int depth) {
    if (stop) return;
    if (depth == n) {
      if (relational || is_embedding(source, target, map)) {
        if (!visit(map)) stop = true;
      }
      return;
    }
    for (int v = 0; v < m && !stop; ++v) {
      if (used[v]) continue;
      map[depth] = v;
      used[v] = 1;
      if (consistent_prefix(source, target, map, depth + 1)) go(depth + 1);
      used[v] = 0;
    }
    map[depth] = -1;
  };
  go(0);
}

std::optional<std::vector<int>> find_embedding(const Structure& source, const Structure& target) {
  std::optional<std::vector<int>> found;
  for_each_embedding(source, target, [&](std::span<const int> map) {
    found.emplace(map.begin(), map.end());
    return false;
  });
  return found;
}

std::optional<std::uint64_t> structure_count(const Signature& sig, int n) {
  if (n < 1) return std::nullopt;
  long double bits = 0;
  for (const auto& r : sig.relations()) bits += std::pow(static_cast<long double>(n), r.arity);
  long double log2n = std::log2(static_cast<long double>(n));
  long double total_bits = bits;
  for (const auto& f : sig.functions()) {
    total_bits += std::pow(static_cast<long double>(n), f.arity) * log2n;
  }
  total_bits += static_cast<long double>(sig.constants().size()) * log2n;
  if (total_bits >= 63) return std::nullopt;
  std::uint64_t count = 1;
  for (const auto& r : sig.relations()) count <<= tuple_count(n, r.arity);
  for (const auto& f : sig.functions()) {
    std::size_t entries = tuple_count(n, f.arity);
    for (std::size_t i = 0; i < entries; ++i) count *= static_cast<std::uint64_t>(n);
  }
  for (std::size_t i = 0; i < sig.constants().size(); ++i) count *= static_cast<std::uint64_t>(n);
  return count;
}

StructureEnumerator::StructureEnumerator(SignaturePtr sig, int n, const Budget& budget)
    : current_(sig, n) {
  auto total = structure_count(*sig, n);
  if (!total || *total > budget.enumeration) {
    throw Error(ErrorKind::BudgetExceeded,
                "enumerating structures of size " + std::to_string(n) + " over '" + sig->name() +
                    "' exceeds the enumeration budget");
  }
  count_ = *total;
  for (std::size_t r = 0; r < sig->relations().size(); ++r) {
    std::size_t entries = tuple_count(n, sig->relations()[r].arity);
    for (std::size_t t = 0; t < entries; ++t) slots_.push_back({0, static_cast<int>(r), t, 2});
  }
  for (std::size_t f = 0; f < sig->functions().size(); ++f) {
    std::size_t entries = tuple_count(n, sig->functions()[f].arity);
    for (std::size_t t = 0; t < entries; ++t) slots_.push_back({1, static_cast<int>(f), t, n});
  }
  for (std::size_t c = 0; c < sig->constants().size(); ++c) slots_.push_back({2, static_cast<int>(c), 0, n});
  digits_.assign(slots_.size(), 0);
}

bool StructureEnumerator::next() {
  for (std::size_t i = slots_.size(); i-- > 0;) {
    Slot& slot = slots_[i];
    int& d = digits_[i];
    bool carry = (d + 1 == slot.radix);
    d = carry ? 0 : d + 1;
    switch (slot.kind) {
      case 0: current_.set_relation_index(slot.symbol, slot.tuple, d != 0); break;
      case 1: current_.set_function_index(slot.symbol, slot.tuple, d); break;
      default: current_.set_constant(slot.symbol, d); break;
    }
    if (!carry) return true;
  }
  return false;
}

std::vector<Structure> enumerate_structures(const SignaturePtr& sig, int n, const Budget& budget) {
  std::vector<Structure> out;
  for_each_structure(sig, n, [&](const Structure& s) { out.push_back(s); }, budget);
  return out;
}

void for_each_structure(const SignaturePtr& sig, int n,
                        const std::function<void(const Structure&)>& visit, const Budget& budget) {
  StructureEnumerator it(sig, n, budget);
  do {
    visit(it.current());
  } while (it.next());
}

std::vector<int> closure(const Structure& m, std::span<const int> seed, int cap) {
  const int n = m.size();
  const Signature& sig = m.signature();
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  std::vector<int> members;
  auto add = [&](int e) {
    if (e < 0 || e >= n) throw Error(ErrorKind::InvalidArgument, "closure: element out of range");
    if (!in[e]) {
      in[e] = 1;
      members.push_back(e);
    }
  };
  for (int e : seed) add(e);
  for (std::size_t c = 0; c < sig.constants().size(); ++c) add(m.constant(static_cast<int>(c)));
  if (members.empty()) throw Error(ErrorKind::InvalidArgument, "closure: empty seed");
  std::vector<int> tuple;
  int rounds = 0;
  bool changed = !sig.functions().empty();
  while (changed) {
    if (++rounds > cap) throw Error(ErrorKind::CapExceeded, "closure exceeded its iteration cap");
    changed = false;
    const std::vector<int> snapshot = members;
    const int k = static_cast<int>(snapshot.size());
    for (std::size_t f = 0; f < sig.functions().size(); ++f) {
      const int arity = sig.functions()[f].arity;
      tuple.resize(static_cast<std::size_t>(arity));
      const std::size_t total = tuple_count(k, arity);
      for (std::size_t t = 0; t < total; ++t) {
        decode_tuple(t, k, arity, tuple);
        for (auto& v : tuple) v = snapshot[v];
        int value = m.apply(static_cast<int>(f), tuple);
        if (!in[value]) {
          add(value);
          changed = true;
        }
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

Structure generated_substructure(const Structure& m, std::span<const int> seed, int cap) {
  if (seed.empty()) throw Error(ErrorKind::InvalidArgument, "generated_substructure: seed must be nonempty");
  auto elems = closure(m, seed, cap);
  return m.induced(elems);
}

std::vector<std::vector<int>> subsets_by_size(int n, int lo, int hi) {
  std::vector<std::vector<int>> out;
  hi = std::min(hi, n);
  for (int k = std::max(lo, 0); k <= hi; ++k) {
    std::vector<int> comb(static_cast<std::size_t>(k));
    std::iota(comb.begin(), comb.end(), 0);
    while (true) {
      out.push_back(comb);
      int i = k - 1;
      while (i >= 0 && comb[i] == n - k + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  return out;
}

std::vector<std::vector<int>> closed_subsets(const Structure& m, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "substructures: k must be >= 1");
  std::vector<std::vector<int>> out;
  const bool relational = m.signature().is_relational();
  for (auto& subset : subsets_by_size(m.size(), 1, k)) {
    if (relational || closure(m, subset) == subset) out.push_back(std::move(subset));
  }
  return out;
}

std::vector<Structure> substructures(const Structure& m, int k) {
  std::vector<Structure> out;
  for (const auto& subset : closed_subsets(m, k)) out.push_back(m.induced(subset));
  return out;
}

}  // namespace falsilab
