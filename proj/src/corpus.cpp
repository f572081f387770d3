#include "falsilab/corpus.hpp"

#include <algorithm>

#include "falsilab/vc.hpp"

namespace falsilab {

Structure make_gn(int n) {
  if (n < 1 || n > 5) throw Error(ErrorKind::SizeOverflow, "G_n is built for 1 <= n <= 5");
  Signature sig;
  sig.set_name("gn");
  sig.add_relation("R", 2);
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back(std::to_string(i));
  for (unsigned j = 0; j < (1U << n); ++j) {
    std::string label = "S_";
    for (int i = 0; i < n; ++i) {
      if (j >> i & 1U) label += std::to_string(i + 1);
    }
    names.push_back(label);
  }
  Structure g(make_signature(std::move(sig)), std::move(names));
  for (unsigned j = 0; j < (1U << n); ++j) {
    for (int i = 0; i < n; ++i) {
      if (j >> i & 1U) g.set_relation(0, std::vector<int>{i, n + static_cast<int>(j)}, true);
    }
  }
  return g;
}

namespace {

using Vec = std::array<mpq_class, 3>;

Vec minus(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

bool is_zero(const Vec& v) { return sgn(v[0]) == 0 && sgn(v[1]) == 0 && sgn(v[2]) == 0; }

Vec cross(const Vec& a, const Vec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

ParticleReport free_particle_refute(std::vector<ParticleObservation> observations) {
  if (observations.empty()) throw Error(ErrorKind::InvalidArgument, "no observations");
  std::stable_sort(observations.begin(), observations.end(),
                   [](const auto& a, const auto& b) { return a.time < b.time; });
  for (std::size_t i = 1; i < observations.size(); ++i) {
    if (observations[i].time == observations[i - 1].time) {
      throw Error(ErrorKind::DuplicateTime, "two observations share the time " + observations[i].time.get_str());
    }
  }
  ParticleReport r;
  r.ordered = observations;
  const Vec& p0 = observations[0].position;
  std::optional<std::size_t> second;
  for (std::size_t i = 1; i < observations.size(); ++i) {
    const Vec d = minus(observations[i].position, p0);
    if (!second) {
      if (!is_zero(d)) {
        second = i;
        r.line = std::array<std::size_t, 2>{0, i};
      }
      continue;
    }
    if (!is_zero(cross(minus(observations[*second].position, p0), d))) {
      r.refuted = true;
      r.witness = i;
      return r;
    }
  }
  return r;
}

std::vector<ParticleObservation> parse_particle_csv(std::string_view text) {
  std::vector<ParticleObservation> out;
  for (const auto& row : parse_rational_csv(text)) {
    if (row.size() != 4) throw Error(ErrorKind::Syntax, "particle rows need t,x,y,z");
    out.push_back({row[0], {row[1], row[2], row[3]}});
  }
  return out;
}

}  // namespace falsilab
