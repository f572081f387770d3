#include "falsilab/canonical.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <numeric>

namespace falsilab {

std::string IsoClassId::hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (unsigned char c : bytes_) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

IsoClassId IsoClassId::from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw Error(ErrorKind::InvalidArgument, "odd-length canonical id");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw Error(ErrorKind::InvalidArgument, "bad hex digit in canonical id");
  };
  std::string bytes;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    bytes.push_back(static_cast<char>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
  }
  return IsoClassId(std::move(bytes));
}

bool transposition_is_automorphism(const Structure& m, int a, int b) {
  if (a == b) return true;
  const int n = m.size();
  const Signature& sig = m.signature();
  auto swap = [&](int v) { return v == a ? b : (v == b ? a : v); };
  std::vector<int> tuple;
  for (std::size_t r = 0; r < sig.relations().size(); ++r) {
    const int arity = sig.relations()[r].arity;
    tuple.resize(static_cast<std::size_t>(arity));
    const auto& table = m.relation_table(static_cast<int>(r));
    for (std::size_t t = 0; t < table.size(); ++t) {
      decode_tuple(t, n, arity, tuple);
      bool touched = false;
      for (auto& v : tuple) {
        int w = swap(v);
        touched |= (w != v);
        v = w;
      }
      if (touched && table[t] != table[encode_tuple(tuple, n)]) return false;
    }
  }
  for (std::size_t f = 0; f < sig.functions().size(); ++f) {
    const int arity = sig.functions()[f].arity;
    tuple.resize(static_cast<std::size_t>(arity));
    const auto& table = m.function_table(static_cast<int>(f));
    for (std::size_t t = 0; t < table.size(); ++t) {
      decode_tuple(t, n, arity, tuple);
      for (auto& v : tuple) v = swap(v);
      if (swap(table[t]) != table[encode_tuple(tuple, n)]) return false;
    }
  }
  for (std::size_t c = 0; c < sig.constants().size(); ++c) {
    int v = m.constant(static_cast<int>(c));
    if (v == a || v == b) return false;
  }
  return true;
}

namespace {

std::vector<int> rank_vectors(const std::vector<std::vector<long>>& keys) {
  std::vector<std::vector<long>> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> out(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), keys[i]) - sorted.begin());
  }
  return out;
}

int count_distinct(const std::vector<int>& colors) {
  std::vector<int> c = colors;
  std::sort(c.begin(), c.end());
  return static_cast<int>(std::unique(c.begin(), c.end()) - c.begin());
}

std::vector<int> refine_colors(const Structure& m) {
  const int n = m.size();
  const Signature& sig = m.signature();
  std::vector<std::vector<long>> keys(static_cast<std::size_t>(n));
  std::vector<int> diag;
  for (int e = 0; e < n; ++e) {
    auto& key = keys[e];
    for (std::size_t r = 0; r < sig.relations().size(); ++r) {
      diag.assign(static_cast<std::size_t>(sig.relations()[r].arity), e);
      key.push_back(m.holds(static_cast<int>(r), diag));
    }
    for (std::size_t f = 0; f < sig.functions().size(); ++f) {
      diag.assign(static_cast<std::size_t>(sig.functions()[f].arity), e);
      key.push_back(m.apply(static_cast<int>(f), diag) == e);
    }
    for (std::size_t c = 0; c < sig.constants().size(); ++c) key.push_back(m.constant(static_cast<int>(c)) == e);
  }
  std::vector<int> colors = rank_vectors(keys);
  int distinct = count_distinct(colors);
  std::vector<int> tuple;
  while (distinct < n) {
    std::vector<std::vector<std::vector<long>>> facts(static_cast<std::size_t>(n));
    for (std::size_t r = 0; r < sig.relations().size(); ++r) {
      const int arity = sig.relations()[r].arity;
      tuple.resize(static_cast<std::size_t>(arity));
      const auto& table = m.relation_table(static_cast<int>(r));
      for (std::size_t t = 0; t < table.size(); ++t) {
        if (!table[t]) continue;
        decode_tuple(t, n, arity, tuple);
        std::vector<long> body;
        for (int v : tuple) body.push_back(colors[v]);
        for (int i = 0; i < arity; ++i) {
          long mask = 0;
          for (int j = 0; j < arity; ++j) mask |= (tuple[j] == tuple[i]) ? (1L << j) : 0;
          if (i != std::countr_zero(static_cast<unsigned long>(mask))) continue;
          std::vector<long> fact{0, static_cast<long>(r), mask};
          fact.insert(fact.end(), body.begin(), body.end());
          facts[tuple[i]].push_back(std::move(fact));
        }
      }
    }
    for (std::size_t f = 0; f < sig.functions().size(); ++f) {
      const int arity = sig.functions()[f].arity;
      tuple.resize(static_cast<std::size_t>(arity));
      const auto& table = m.function_table(static_cast<int>(f));
      for (std::size_t t = 0; t < table.size(); ++t) {
        decode_tuple(t, n, arity, tuple);
        std::vector<long> body;
        for (int v : tuple) body.push_back(colors[v]);
        body.push_back(colors[table[t]]);
        for (int i = 0; i < arity; ++i) {
          long mask = 0;
          for (int j = 0; j < arity; ++j) mask |= (tuple[j] == tuple[i]) ? (1L << j) : 0;
          if (i != std::countr_zero(static_cast<unsigned long>(mask))) continue;
          std::vector<long> fact{1, static_cast<long>(f), mask};
          fact.insert(fact.end(), body.begin(), body.end());
          facts[tuple[i]].push_back(std::move(fact));
        }
        std::vector<long> fact{2, static_cast<long>(f)};
        fact.insert(fact.end(), body.begin(), body.end());
        facts[table[t]].push_back(std::move(fact));
      }
    }
    for (int e = 0; e < n; ++e) {
      auto& list = facts[e];
      std::sort(list.begin(), list.end());
      std::vector<long> key{colors[e]};
      for (const auto& fact : list) {
        key.push_back(static_cast<long>(fact.size()));
        key.insert(key.end(), fact.begin(), fact.end());
      }
      keys[e] = std::move(key);
    }
    std::vector<int> next = rank_vectors(keys);
    int next_distinct = count_distinct(next);
    colors = std::move(next);
    if (next_distinct == distinct) break;
    distinct = next_distinct;
  }
  return colors;
}

class CanonicalSearch {
 public:
  explicit CanonicalSearch(const Structure& m) : m_(m), n_(m.size()), sig_(m.signature()) {
    colors_ = refine_colors(m);
    required_ = colors_;
    std::sort(required_.begin(), required_.end());
    twin_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0);
    for (int a = 0; a < n_; ++a) {
      for (int b = a + 1; b < n_; ++b) {
        if (colors_[a] == colors_[b] && transposition_is_automorphism(m, a, b)) {
          twin_[a * n_ + b] = twin_[b * n_ + a] = 1;
        }
      }
    }
    block_offset_.assign(static_cast<std::size_t>(n_) + 1, 1);
    for (int p = 0; p < n_; ++p) {
      std::size_t size = 0;
      for (const auto& r : sig_.relations()) size += tuple_count(p + 1, r.arity) - tuple_count(p, r.arity);
      block_offset_[p + 1] = block_offset_[p] + size;
    }
    order_.assign(static_cast<std::size_t>(n_), -1);
    position_.assign(static_cast<std::size_t>(n_), -1);
    current_.push_back(static_cast<char>(n_));
  }

  CanonicalForm run() {
    dfs(0, false);
    return {IsoClassId(best_), best_order_};
  }

 private:
  void append_block(int p) {
    std::vector<int> tuple;
    std::vector<int> image;
    for (std::size_t r = 0; r < sig_.relations().size(); ++r) {
      const int arity = sig_.relations()[r].arity;
      tuple.resize(static_cast<std::size_t>(arity));
      image.resize(static_cast<std::size_t>(arity));
      const std::size_t total = tuple_count(p + 1, arity);
      for (std::size_t t = 0; t < total; ++t) {
        decode_tuple(t, p + 1, arity, tuple);
        if (*std::max_element(tuple.begin(), tuple.end()) != p) continue;
        for (int i = 0; i < arity; ++i) image[i] = order_[tuple[i]];
        current_.push_back(m_.holds(static_cast<int>(r), image) ? 1 : 0);
      }
    }
  }

  void append_tail() {
    std::vector<int> tuple;
    std::vector<int> image;
    for (std::size_t f = 0; f < sig_.functions().size(); ++f) {
      const int arity = sig_.functions()[f].arity;
      tuple.resize(static_cast<std::size_t>(arity));
      image.resize(static_cast<std::size_t>(arity));
      const std::size_t total = tuple_count(n_, arity);
      for (std::size_t t = 0; t < total; ++t) {
        decode_tuple(t, n_, arity, tuple);
        for (int i = 0; i < arity; ++i) image[i] = order_[tuple[i]];
        current_.push_back(static_cast<char>(position_[m_.apply(static_cast<int>(f), image)]));
      }
    }
    for (std::size_t c = 0; c < sig_.constants().size(); ++c) {
      current_.push_back(static_cast<char>(position_[m_.constant(static_cast<int>(c))]));
    }
  }

  // Returns true when the best form was replaced inside this subtree.
  bool dfs(int depth, bool already_less) {
    if (depth == n_) {
      const std::size_t mark = current_.size();
      append_tail();
      bool replace = !have_best_ || already_less ||
                     current_.compare(mark, std::string::npos, best_, mark, std::string::npos) < 0;
      if (replace) {
        best_ = current_;
        best_order_ = order_;
        have_best_ = true;
      }
      current_.resize(mark);
      return replace;
    }
    bool replaced_any = false;
    std::vector<int> tried;
    for (int c = 0; c < n_; ++c) {
      if (position_[c] != -1 || colors_[c] != required_[depth]) continue;
      bool redundant = false;
      for (int t : tried) {
        if (twin_[c * n_ + t]) {
          redundant = true;
          break;
        }
      }
      if (redundant) continue;
      tried.push_back(c);
      order_[depth] = c;
      position_[c] = depth;
      const std::size_t mark = current_.size();
      append_block(depth);
      bool less = already_less;
      bool skip = false;
      if (have_best_ && !already_less) {
        const std::size_t len = block_offset_[depth + 1] - block_offset_[depth];
        int cmp = current_.compare(mark, len, best_, mark, len);
        if (cmp > 0) skip = true;
        if (cmp < 0) less = true;
      }
      if (!skip && dfs(depth + 1, less)) {
        replaced_any = true;
        already_less = false;
      }
      current_.resize(mark);
      position_[c] = -1;
      order_[depth] = -1;
    }
    return replaced_any;
  }

  const Structure& m_;
  int n_;
  const Signature& sig_;
  std::vector<int> colors_;
  std::vector<int> required_;
  std::vector<char> twin_;
  std::vector<std::size_t> block_offset_;
  std::vector<int> order_;
  std::vector<int> position_;
  std::string current_;
  std::string best_;
  std::vector<int> best_order_;
  bool have_best_ = false;
};

}  // namespace

CanonicalForm canonical_form(const Structure& m, int size_cap) {
  if (m.size() > size_cap) {
    throw Error(ErrorKind::BudgetExceeded,
                "canonical form requested for a structure of size " + std::to_string(m.size()) +
                    " above the cap " + std::to_string(size_cap));
  }
  if (m.size() > 255) throw Error(ErrorKind::SizeOverflow, "structure too large for canonical serialization");
  return CanonicalSearch(m).run();
}

IsoClassId canonicalize(const Structure& m, int size_cap) { return canonical_form(m, size_cap).id; }

Structure canonical_representative(const Structure& m, int size_cap) {
  auto form = canonical_form(m, size_cap);
  Structure out = m.induced(form.order);
  std::vector<std::string> names;
  for (int i = 0; i < out.size(); ++i) names.push_back(std::to_string(i));
  out.rename_elements(std::move(names));
  return out;
}

std::optional<Morphism> isomorphic(const Structure& m, const Structure& n) {
  require_same_signature(m.signature(), n.signature());
  if (m.size() != n.size()) return std::nullopt;
  std::vector<int> map;
  if (m.size() <= 10) {
    auto a = canonical_form(m);
    auto b = canonical_form(n);
    if (a.id != b.id) return std::nullopt;
    map.assign(static_cast<std::size_t>(m.size()), -1);
    for (std::size_t p = 0; p < a.order.size(); ++p) map[a.order[p]] = b.order[p];
  } else {
    auto found = find_embedding(m, n);
    if (!found) return std::nullopt;
    map = std::move(*found);
  }
  return Morphism{m, n, std::move(map)};
}

namespace {

std::string signature_key(const Signature& sig) {
  std::string key;
  for (const auto& r : sig.relations()) key += "r" + r.name + "/" + std::to_string(r.arity) + ";";
  for (const auto& f : sig.functions()) key += "f" + f.name + "/" + std::to_string(f.arity) + ";";
  for (const auto& c : sig.constants()) key += "c" + c + ";";
  return key;
}

}  // namespace

const std::vector<Structure>& iso_representatives(const SignaturePtr& sig, int n, const Budget& budget) {
  static std::mutex mutex;
  static std::map<std::pair<std::string, int>, std::vector<Structure>> cache;
  const auto key = std::make_pair(signature_key(*sig), n);
  {
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::map<IsoClassId, Structure> reps;
  for_each_structure(
      sig, n,
      [&](const Structure& s) {
        auto form = canonical_form(s, budget.canonical_size_cap);
        if (reps.count(form.id)) return;
        Structure rep = s.induced(form.order);
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
        rep.rename_elements(std::move(names));
        reps.emplace(form.id, std::move(rep));
      },
      budget);
  std::vector<Structure> out;
  for (auto& [id, rep] : reps) out.push_back(std::move(rep));
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(out)).first->second;
}

}  // namespace falsilab
