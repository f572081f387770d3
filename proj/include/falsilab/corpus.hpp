#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "falsilab/structure.hpp"

namespace falsilab {

// G_n over {rel R/2}: vertices 1..n followed by one vertex S_J per subset J of
// [n] (mask order, S_ is the empty set, S_12 is {1,2}); R(i, S_J) iff i in J.
Structure make_gn(int n);

struct ParticleObservation {
  mpq_class time;
  std::array<mpq_class, 3> position;
};

struct ParticleReport {
  bool refuted = false;
  // Observations ordered by time; indices refer to that order.
  std::vector<ParticleObservation> ordered;
  std::optional<std::size_t> witness;        // first point off the line
  std::optional<std::array<std::size_t, 2>> line;  // the two points fixing the line
};

// Consistent so far while every position lies on one line (exact cross
// products); refuted at the first position off the line through the first
// two distinct positions.
ParticleReport free_particle_refute(std::vector<ParticleObservation> observations);

// Rows "t, x, y, z" of rationals.
std::vector<ParticleObservation> parse_particle_csv(std::string_view text);

}  // namespace falsilab
