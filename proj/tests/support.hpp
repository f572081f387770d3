#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "falsilab/class_spec.hpp"
#include "falsilab/parser.hpp"
#include "falsilab/structure.hpp"
#include "falsilab/text_format.hpp"
#include "falsilab/theory.hpp"

namespace testing {

using namespace falsilab;

inline SignaturePtr digraph_sig() {
  static const SignaturePtr sig = make_signature(Signature("digraph").add_relation("edge", 2));
  return sig;
}

inline Structure digraph(int n, const std::vector<std::pair<int, int>>& edges) {
  Structure m(digraph_sig(), n);
  for (auto [a, b] : edges) m.set_relation(0, std::vector<int>{a, b}, true);
  return m;
}

// Bit a*n+b of mask is the edge (a,b).
inline Structure digraph_from_mask(int n, std::uint64_t mask) {
  Structure m(digraph_sig(), n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (mask >> (a * n + b) & 1U) m.set_relation(0, std::vector<int>{a, b}, true);
    }
  }
  return m;
}

// Kahn's algorithm on the adjacency bitmask; loops count as cycles.
inline bool oracle_acyclic(int n, std::uint64_t mask) {
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (mask >> (a * n + b) & 1U) ++indeg[b];
    }
  }
  std::vector<int> ready;
  for (int v = 0; v < n; ++v) {
    if (indeg[v] == 0) ready.push_back(v);
  }
  int seen = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++seen;
    for (int b = 0; b < n; ++b) {
      if ((mask >> (v * n + b) & 1U) && --indeg[b] == 0) ready.push_back(b);
    }
  }
  return seen == n;
}

inline int oracle_count_dags(int n) {
  int count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n * n)); ++mask) count += oracle_acyclic(n, mask);
  return count;
}

// Digraphs with edges only from lower to higher index; every finite DAG is
// isomorphic to one of them.
inline std::vector<Structure> upper_triangular_digraphs(int n) {
  std::vector<std::pair<int, int>> slots;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) slots.emplace_back(a, b);
  }
  std::vector<Structure> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (mask >> i & 1U) edges.push_back(slots[i]);
    }
    out.push_back(digraph(n, edges));
  }
  return out;
}

inline std::string corpus_path(const std::string& name) { return std::string(FALSILAB_SOURCE_DIR) + "/corpus/" + name; }
inline std::string golden_path(const std::string& name) { return std::string(FALSILAB_SOURCE_DIR) + "/tests/golden/" + name; }

inline ClassSpec corpus_class(const std::string& name) { return load_class_spec(corpus_path("classes.spec"), name); }

inline ClassSpec theory_class(const std::string& text, int cap = 5) {
  return ClassSpec::intensional(parse_theory(text), cap);
}

}  // namespace testing
