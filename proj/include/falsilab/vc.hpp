#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "falsilab/eval.hpp"
#include "falsilab/formula.hpp"
#include "falsilab/structure.hpp"

namespace falsilab {

using ElementTuple = std::vector<int>;

// params[J] witnesses the subset J of set, where bit i of J stands for set[i].
struct ShatterWitness {
  std::vector<ElementTuple> set;
  std::vector<ElementTuple> params;
};

// Soft cap on |X| for shattering searches.
inline constexpr int kShatterCap = 20;

// Searches parameter tuples in lexicographic order; each subset gets the
// first tuple whose trace on X equals it. The empty set is shattered by any
// parameter tuple, so it always has a witness.
std::optional<ShatterWitness> shatters(const Structure& m, const PartitionedFormula& pf,
                                       const std::vector<ElementTuple>& set);

struct VcResult {
  int dimension = 0;
  bool exact = true;  // false: at least `dimension`, search stopped at the cap
  ShatterWitness witness;  // a shattered set of size `dimension`
};

// Largest shattered subset of M^|x|, searched by ascending size; the first
// witness in lexicographic order of point indices is reported.
VcResult vc_dimension(const Structure& m, const PartitionedFormula& pf, int cap = kShatterCap);

// Variable names used by vc_sentence: object i (1-based) and subset J.
std::string vc_object_variable(const PartitionedFormula& pf, int i, std::size_t component);
std::string vc_parameter_variable(const PartitionedFormula& pf, unsigned subset, int n, std::size_t component);

// Shatter_phi((x_i), (y_J)) as a conjunction of literals phi / !phi.
Formula shatter_formula(const PartitionedFormula& pf, int n);
// forall x_i forall y_J (distinct x_i -> !Shatter). M satisfies it iff no set
// of n distinct points is shattered.
Formula vc_sentence(const PartitionedFormula& pf, int n);

using Rational = mpq_class;
using RationalPoint = std::vector<Rational>;

struct ParametricFamily {
  std::string name;
  int dimension = 2;   // coordinates per point
  int parameters = 0;  // values per parameter row
  std::function<bool(const RationalPoint&, const std::vector<Rational>&)> predicate;
};

// |a x + b y + c|^2 < r (a^2 + b^2), parameters (a, b, c, r).
ParametricFamily fat_line_family();
// a y + b x + c = 0, parameters (a, b, c); a = b = 0 describes no line.
ParametricFamily line_family();
ParametricFamily family_by_name(const std::string& name);

struct ParametricReport {
  int lower_bound = 0;
  std::vector<int> shattered;           // indices into points
  std::vector<int> parameter_for_subset;  // row index into grid, by subset mask
};

ParametricReport parametric_vc_report(const ParametricFamily& fam, const std::vector<RationalPoint>& points,
                                      const std::vector<std::vector<Rational>>& grid);
int parametric_vc_lower_bound(const ParametricFamily& fam, const std::vector<RationalPoint>& points,
                              const std::vector<std::vector<Rational>>& grid);

// Rows of comma separated rationals ("1/2", "-3", "0.25"); `#` comments.
std::vector<std::vector<Rational>> parse_rational_csv(std::string_view text);
Rational parse_rational(std::string_view text);

}  // namespace falsilab
