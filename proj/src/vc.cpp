#include "falsilab/vc.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "falsilab/text_format.hpp"

namespace falsilab {

namespace {

using Bits = std::vector<std::uint64_t>;

bool test(const Bits& b, int i) { return (b[i >> 6] >> (i & 63)) & 1U; }

ElementTuple nth_tuple(std::size_t index, int n, int arity) {
  ElementTuple t(static_cast<std::size_t>(arity));
  decode_tuple(index, n, arity, t);
  return t;
}

// Distinct traces of phi(-; y) on the point list, one per parameter tuple
// in lexicographic order, with the first parameter index producing each.
struct TraceTable {
  std::vector<Bits> traces;
  std::vector<std::size_t> first_param;
};

TraceTable trace_table(const Structure& m, const PartitionedFormula& pf, const std::vector<ElementTuple>& points) {
  validate_partition(pf);
  std::vector<std::string> order = pf.objects;
  order.insert(order.end(), pf.params.begin(), pf.params.end());
  CompiledFormula phi(pf.formula, m.signature(), order);
  const int kx = static_cast<int>(pf.objects.size());
  const int ky = static_cast<int>(pf.params.size());
  const std::size_t nparams = tuple_count(m.size(), ky);
  const std::size_t words = (points.size() + 63) / 64;
  TraceTable table;
  std::map<Bits, std::size_t> seen;
  std::vector<int> vals(static_cast<std::size_t>(kx + ky));
  for (std::size_t p = 0; p < nparams; ++p) {
    decode_tuple(p, m.size(), ky, std::span<int>(vals).subspan(kx));
    Bits trace(words, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::copy(points[i].begin(), points[i].end(), vals.begin());
      if (phi.holds(m, vals)) trace[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    if (seen.emplace(trace, p).second) {
      table.traces.push_back(std::move(trace));
      table.first_param.push_back(p);
    }
  }
  return table;
}

// For the chosen point indices, the first parameter realizing each subset
// mask, or nullopt when some subset is missed.
std::optional<std::vector<std::size_t>> witness_for(const TraceTable& t, const std::vector<int>& chosen) {
  const std::size_t subsets = std::size_t{1} << chosen.size();
  std::vector<std::size_t> param(subsets, SIZE_MAX);
  std::size_t found = 0;
  for (std::size_t k = 0; k < t.traces.size() && found < subsets; ++k) {
    std::size_t mask = 0;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      if (test(t.traces[k], chosen[i])) mask |= std::size_t{1} << i;
    }
    if (param[mask] == SIZE_MAX || t.first_param[k] < param[mask]) {
      if (param[mask] == SIZE_MAX) ++found;
      param[mask] = t.first_param[k];
    }
  }
  if (found < subsets) return std::nullopt;
  return param;
}

std::string subset_label(unsigned subset, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (subset >> i & 1U) s += std::to_string(i + 1);
  }
  return s;
}

}  // namespace

std::optional<ShatterWitness> shatters(const Structure& m, const PartitionedFormula& pf,
                                       const std::vector<ElementTuple>& set) {
  if (static_cast<int>(set.size()) > kShatterCap) {
    throw Error(ErrorKind::BudgetExceeded, "shattering search is capped at " + std::to_string(kShatterCap) + " points");
  }
  for (const auto& t : set) {
    if (t.size() != pf.objects.size()) throw Error(ErrorKind::Arity, "point tuple does not match the object variables");
    for (int e : t) {
      if (e < 0 || e >= m.size()) throw Error(ErrorKind::InvalidArgument, "point outside the domain");
    }
  }
  TraceTable table = trace_table(m, pf, set);
  std::vector<int> chosen(set.size());
  std::iota(chosen.begin(), chosen.end(), 0);
  auto params = witness_for(table, chosen);
  if (!params) return std::nullopt;
  ShatterWitness w;
  w.set = set;
  for (auto p : *params) w.params.push_back(nth_tuple(p, m.size(), static_cast<int>(pf.params.size())));
  return w;
}

VcResult vc_dimension(const Structure& m, const PartitionedFormula& pf, int cap) {
  if (cap < 0 || cap > kShatterCap) throw Error(ErrorKind::BudgetExceeded, "vc cap must lie in [0, 20]");
  const int kx = static_cast<int>(pf.objects.size());
  const int ky = static_cast<int>(pf.params.size());
  const std::size_t npoints = tuple_count(m.size(), kx);
  std::vector<ElementTuple> points;
  for (std::size_t i = 0; i < npoints; ++i) points.push_back(nth_tuple(i, m.size(), kx));
  TraceTable table = trace_table(m, pf, points);

  VcResult result;
  result.witness.params.push_back(nth_tuple(0, m.size(), ky));
  // Level-wise search: shattered sets of size k+1 extend shattered sets of size k.
  std::vector<std::vector<int>> level = {{}};
  const int limit = std::min<int>(cap, static_cast<int>(npoints));
  for (int k = 1; k <= limit; ++k) {
    std::set<std::vector<int>> prev(level.begin(), level.end());
    std::vector<std::vector<int>> next;
    std::optional<std::vector<std::size_t>> first_params;
    for (const auto& s : level) {
      const int start = s.empty() ? 0 : s.back() + 1;
      for (int p = start; p < static_cast<int>(npoints); ++p) {
        std::vector<int> cand = s;
        cand.push_back(p);
        bool all_sub = true;
        for (std::size_t drop = 0; drop + 1 < cand.size() && all_sub; ++drop) {
          std::vector<int> sub = cand;
          sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
          all_sub = prev.count(sub) > 0;
        }
        if (!all_sub) continue;
        auto w = witness_for(table, cand);
        if (!w) continue;
        if (next.empty()) first_params = w;
        next.push_back(std::move(cand));
      }
    }
    if (next.empty()) return result;
    result.dimension = k;
    result.witness.set.clear();
    result.witness.params.clear();
    for (int i : next.front()) result.witness.set.push_back(points[i]);
    for (auto p : *first_params) result.witness.params.push_back(nth_tuple(p, m.size(), ky));
    level = std::move(next);
  }
  if (limit == cap && limit < static_cast<int>(npoints)) result.exact = false;
  return result;
}

std::string vc_object_variable(const PartitionedFormula& pf, int i, std::size_t component) {
  std::string name = "x" + std::to_string(i);
  if (pf.objects.size() > 1) name += "_" + std::to_string(component + 1);
  return name;
}

std::string vc_parameter_variable(const PartitionedFormula& pf, unsigned subset, int n, std::size_t component) {
  std::string name = "y_" + subset_label(subset, n);
  if (pf.params.size() > 1) name += "_" + std::to_string(component + 1);
  return name;
}

Formula shatter_formula(const PartitionedFormula& pf, int n) {
  validate_partition(pf);
  if (n < 1 || n > 5) throw Error(ErrorKind::SizeOverflow, "VC_n sentences are built for 1 <= n <= 5");
  std::vector<Formula> parts;
  for (unsigned j = 0; j < (1U << n); ++j) {
    for (int i = 1; i <= n; ++i) {
      std::map<std::string, Term> sub;
      for (std::size_t c = 0; c < pf.objects.size(); ++c) sub[pf.objects[c]] = Term::var(vc_object_variable(pf, i, c));
      for (std::size_t c = 0; c < pf.params.size(); ++c) {
        sub[pf.params[c]] = Term::var(vc_parameter_variable(pf, j, n, c));
      }
      Formula inst = substitute(pf.formula, sub);
      parts.push_back((j >> (i - 1) & 1U) ? inst : Formula::negate(inst));
    }
  }
  return Formula::conj(std::move(parts));
}

Formula vc_sentence(const PartitionedFormula& pf, int n) {
  Formula shatter = shatter_formula(pf, n);
  std::vector<std::string> xs, ys;
  for (int i = 1; i <= n; ++i) {
    for (std::size_t c = 0; c < pf.objects.size(); ++c) xs.push_back(vc_object_variable(pf, i, c));
  }
  for (unsigned j = 0; j < (1U << n); ++j) {
    for (std::size_t c = 0; c < pf.params.size(); ++c) ys.push_back(vc_parameter_variable(pf, j, n, c));
  }
  std::vector<Formula> distinct;
  for (int i = 1; i <= n; ++i) {
    for (int k = i + 1; k <= n; ++k) {
      std::vector<Formula> differ;
      for (std::size_t c = 0; c < pf.objects.size(); ++c) {
        differ.push_back(Formula::negate(
            Formula::equal(Term::var(vc_object_variable(pf, i, c)), Term::var(vc_object_variable(pf, k, c)))));
      }
      distinct.push_back(Formula::disj(std::move(differ)));
    }
  }
  Formula body = Formula::negate(std::move(shatter));
  if (!distinct.empty()) body = Formula::implies(Formula::conj(std::move(distinct)), std::move(body));
  return Formula::forall(std::move(xs), Formula::quantify(Formula::Kind::Forall, std::move(ys), std::move(body)));
}

ParametricFamily fat_line_family() {
  ParametricFamily f;
  f.name = "fatline";
  f.parameters = 4;
  f.predicate = [](const RationalPoint& p, const std::vector<Rational>& q) {
    Rational v = q[0] * p[0] + q[1] * p[1] + q[2];
    return v * v < q[3] * (q[0] * q[0] + q[1] * q[1]);
  };
  return f;
}

ParametricFamily line_family() {
  ParametricFamily f;
  f.name = "line";
  f.parameters = 3;
  f.predicate = [](const RationalPoint& p, const std::vector<Rational>& q) {
    if (sgn(q[0]) == 0 && sgn(q[1]) == 0) return false;
    return sgn(q[0] * p[1] + q[1] * p[0] + q[2]) == 0;
  };
  return f;
}

ParametricFamily family_by_name(const std::string& name) {
  if (name == "fatline") return fat_line_family();
  if (name == "line") return line_family();
  throw Error(ErrorKind::InvalidArgument, "unknown parametric family '" + name + "' (expected fatline or line)");
}

ParametricReport parametric_vc_report(const ParametricFamily& fam, const std::vector<RationalPoint>& points,
                                      const std::vector<std::vector<Rational>>& grid) {
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != fam.dimension) throw Error(ErrorKind::Arity, "point has the wrong dimension");
  }
  for (const auto& g : grid) {
    if (static_cast<int>(g.size()) != fam.parameters) {
      throw Error(ErrorKind::Arity, "parameter row for '" + fam.name + "' needs " + std::to_string(fam.parameters) +
                                        " values");
    }
  }
  if (points.size() > static_cast<std::size_t>(kShatterCap)) {
    throw Error(ErrorKind::BudgetExceeded, "point set is capped at 20 points");
  }
  const std::size_t words = (points.size() + 63) / 64;
  TraceTable table;
  std::map<Bits, std::size_t> seen;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    Bits trace(std::max<std::size_t>(words, 1), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (fam.predicate(points[i], grid[g])) trace[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    if (seen.emplace(trace, g).second) {
      table.traces.push_back(std::move(trace));
      table.first_param.push_back(g);
    }
  }
  ParametricReport report;
  if (grid.empty()) return report;
  report.parameter_for_subset = {0};
  const int n = static_cast<int>(points.size());
  for (int k = n; k >= 1; --k) {
    for (const auto& cand : subsets_by_size(n, k, k)) {
      if (auto w = witness_for(table, cand)) {
        report.lower_bound = k;
        report.shattered = cand;
        report.parameter_for_subset.assign(w->begin(), w->end());
        return report;
      }
    }
  }
  return report;
}

int parametric_vc_lower_bound(const ParametricFamily& fam, const std::vector<RationalPoint>& points,
                              const std::vector<std::vector<Rational>>& grid) {
  return parametric_vc_report(fam, points, grid).lower_bound;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw Error(ErrorKind::Syntax, "empty rational");
  auto dot = s.find('.');
  try {
    if (dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      if (digits == "-" || digits.empty()) throw std::invalid_argument("bad");
      Rational r(digits + "/1" + std::string(s.size() - dot - 1, '0'), 10);
      r.canonicalize();
      return r;
    }
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    Rational r(s, 10);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator");
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::Syntax, "not a rational number: '" + std::string(text) + "'");
  }
}

std::vector<std::vector<Rational>> parse_rational_csv(std::string_view text) {
  std::vector<std::vector<Rational>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<Rational> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(parse_rational(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace falsilab
