#include "falsilab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <json.hpp>

#include "falsilab/text_format.hpp"
#include "falsilab/time_indexed.hpp"
#include "falsilab/vc.hpp"

namespace falsilab {

std::optional<std::size_t> StateSpace::index_of(const Structure& m) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (same_interpretation(states[i], m)) return i;
  }
  return std::nullopt;
}

StateSpace make_state_space(const SignaturePtr& sig, int n, const Budget& budget) {
  return make_state_space(sig, enumerate_structures(sig, n, budget));
}

StateSpace make_state_space(const SignaturePtr& sig, std::vector<Structure> states) {
  if (states.empty()) throw Error(ErrorKind::InvalidArgument, "state space is empty");
  StateSpace s;
  s.signature = sig;
  s.objects = states.front().size();
  for (const auto& w : states) {
    require_same_signature(*sig, w.signature());
    if (w.size() != s.objects) throw Error(ErrorKind::InvalidArgument, "states must share the object count");
    s.ids.push_back(canonicalize(w));
  }
  s.states = std::move(states);
  return s;
}

std::string to_string(const Rational& q) { return q.get_str(); }

void validate_dist(const Dist& mu) {
  if (mu.empty()) throw Error(ErrorKind::InvalidArgument, "distribution is empty");
  Rational sum = 0;
  for (const auto& p : mu) {
    if (sgn(p) < 0) throw Error(ErrorKind::InvalidArgument, "distribution has a negative entry");
    sum += p;
  }
  if (sum != 1) throw Error(ErrorKind::InvalidArgument, "distribution sums to " + to_string(sum) + ", not 1");
}

void validate_matrix(const StochMatrix& rho) {
  if (rho.empty()) throw Error(ErrorKind::InvalidArgument, "matrix is empty");
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i].size() != rho.size()) throw Error(ErrorKind::InvalidArgument, "matrix is not square");
    Rational sum = 0;
    for (const auto& p : rho[i]) {
      if (sgn(p) < 0) throw Error(ErrorKind::InvalidArgument, "matrix has a negative entry");
      sum += p;
    }
    if (sum != 1) {
      throw Error(ErrorKind::InvalidArgument, "row " + std::to_string(i) + " sums to " + to_string(sum) + ", not 1");
    }
  }
}

Dist parse_dist(const std::vector<std::string>& entries) {
  Dist d;
  for (const auto& e : entries) d.push_back(parse_rational(e));
  return d;
}

std::size_t product_index(const std::vector<std::size_t>& states, std::size_t base) {
  std::size_t idx = 0;
  for (auto s : states) idx = idx * base + s;
  return idx;
}

std::vector<std::size_t> product_states(std::size_t index, std::size_t base, int m) {
  std::vector<std::size_t> out(static_cast<std::size_t>(m));
  for (int i = m - 1; i >= 0; --i) {
    out[i] = index % base;
    index /= base;
  }
  return out;
}

Dist step(const Dist& mu, const StochMatrix& rho) {
  Dist out(rho.size(), Rational(0));
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (sgn(mu[i]) == 0) continue;
    for (std::size_t j = 0; j < rho.size(); ++j) out[j] += mu[i] * rho[i][j];
  }
  return out;
}

namespace {

StochMatrix matrix_power(const StochMatrix& rho, int k) {
  const std::size_t n = rho.size();
  StochMatrix out(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = 1;
  for (int s = 0; s < k; ++s) {
    StochMatrix next(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) {
        if (sgn(out[i][l]) == 0) continue;
        for (std::size_t j = 0; j < n; ++j) next[i][j] += out[i][l] * rho[l][j];
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

ProductChain product_chain(const Dist& mu, const StochMatrix& rho, int m, std::vector<int> times) {
  validate_dist(mu);
  validate_matrix(rho);
  if (mu.size() != rho.size()) throw Error(ErrorKind::InvalidArgument, "mu and rho disagree on the state count");
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "m must be at least 1");
  if (times.empty()) {
    for (int i = 0; i < m; ++i) times.push_back(i);
  }
  if (static_cast<int>(times.size()) != m || times.front() < 0) {
    throw Error(ErrorKind::InvalidArgument, "product_chain needs m nonnegative times");
  }
  for (int i = 1; i < m; ++i) {
    if (times[i] <= times[i - 1]) throw Error(ErrorKind::InvalidArgument, "product_chain times must increase");
  }
  const std::size_t base = rho.size();
  std::size_t total = 1;
  for (int i = 0; i < m; ++i) {
    if (total > kProductStateCap / base) {
      throw Error(ErrorKind::BudgetExceeded, "product chain exceeds " + std::to_string(kProductStateCap) + " states");
    }
    total *= base;
  }
  ProductChain pc;
  pc.m = m;
  pc.times = times;
  pc.rho.assign(total, std::vector<Rational>(total, Rational(0)));
  for (std::size_t a = 0; a < total; ++a) {
    auto sa = product_states(a, base, m);
    for (std::size_t b = 0; b < total; ++b) {
      auto sb = product_states(b, base, m);
      Rational p = 1;
      for (int i = 0; i < m && sgn(p) != 0; ++i) p *= rho[sa[i]][sb[i]];
      pc.rho[a][b] = p;
    }
  }
  Dist first = mu;
  for (int s = 0; s < times.front(); ++s) first = step(first, rho);
  std::vector<StochMatrix> gaps;
  for (int i = 1; i < m; ++i) gaps.push_back(matrix_power(rho, times[i] - times[i - 1]));
  pc.mu.assign(total, Rational(0));
  for (std::size_t a = 0; a < total; ++a) {
    auto sa = product_states(a, base, m);
    Rational p = first[sa[0]];
    for (int i = 1; i < m && sgn(p) != 0; ++i) p *= gaps[i - 1][sa[i - 1]][sa[i]];
    pc.mu[a] = p;
  }
  return pc;
}

bool is_irreducible(const StochMatrix& rho) {
  const std::size_t n = rho.size();
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack = {s};
    seen[s] = 1;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (!seen[v] && sgn(rho[u][v]) > 0) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    if (std::count(seen.begin(), seen.end(), 1) != static_cast<std::ptrdiff_t>(n)) return false;
  }
  return true;
}

Dist stationary(const StochMatrix& rho) {
  validate_matrix(rho);
  if (!is_irreducible(rho)) throw Error(ErrorKind::ReducibleChain, "stationary distribution needs an irreducible chain");
  const std::size_t n = rho.size();
  // Rows: (rho^T - I) eta = 0 with the last equation replaced by sum eta = 1.
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1, Rational(0)));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = rho[j][i] - (i == j ? 1 : 0);
  }
  for (std::size_t j = 0; j < n; ++j) a[n - 1][j] = 1;
  a[n - 1][n] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(a[pivot][col]) == 0) ++pivot;
    if (pivot == n) throw Error(ErrorKind::ReducibleChain, "stationary system is singular");
    std::swap(a[pivot], a[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || sgn(a[r][col]) == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  Dist eta(n);
  for (std::size_t i = 0; i < n; ++i) eta[i] = a[i][n] / a[i][i];
  return eta;
}

bool is_positive_chain(const Dist& mu, const StochMatrix& rho) {
  for (const auto& p : mu) {
    if (sgn(p) <= 0) return false;
  }
  for (const auto& row : rho) {
    for (const auto& p : row) {
      if (sgn(p) <= 0) return false;
    }
  }
  return true;
}

namespace {

std::size_t draw(const std::vector<Rational>& weights, std::mt19937_64& rng) {
  const std::uint64_t u = rng();
  mpz_class num(static_cast<unsigned long>(u >> 32));
  num <<= 32;
  num += static_cast<unsigned long>(u & 0xffffffffULL);
  mpz_class den(1);
  den <<= 64;
  Rational x(num, den);
  x.canonicalize();
  Rational cum = 0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (sgn(weights[i]) == 0) continue;
    last = i;
    cum += weights[i];
    if (x < cum) return i;
  }
  return last;
}

}  // namespace

Trajectory simulate(const Dist& mu, const StochMatrix& rho, int horizon, std::uint64_t seed) {
  validate_dist(mu);
  validate_matrix(rho);
  if (horizon < 1) throw Error(ErrorKind::InvalidArgument, "horizon must be at least 1");
  std::mt19937_64 rng(seed);
  Trajectory t;
  t.seed = seed;
  t.horizon = horizon;
  t.states.push_back(draw(mu, rng));
  for (int i = 1; i < horizon; ++i) t.states.push_back(draw(rho[t.states.back()], rng));
  return t;
}

Structure render_trajectory(const StateSpace& space, const Trajectory& t) {
  std::vector<Structure> worlds;
  for (auto s : t.states) worlds.push_back(space.states.at(s));
  return time_indexed_structure(time_indexed_signature(*space.signature, true), worlds);
}

namespace {

// Pattern automaton. Node (i, kind, r): the next step to match is i.
// kind 0: step i may match now or later once r reaches 0 (delay r).
// kind 1: step i must match exactly when r reaches 0.
struct Pattern {
  std::vector<IsoClassId> types;
  std::vector<std::optional<int>> fixed_gap;  // gap before step i (i >= 1)
  int first_delay = 0;
  bool satisfiable = true;
};

Pattern compile(const Configuration& config) {
  Pattern p;
  const auto& steps = config.steps;
  if (steps.empty()) throw Error(ErrorKind::InvalidArgument, "configuration has no steps");
  std::map<std::string, std::size_t> last_seen;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    if (s.offset < 0) throw Error(ErrorKind::InvalidArgument, "time offsets must be nonnegative");
    auto it = last_seen.find(s.variable);
    if (it != last_seen.end() && it->second + 1 != i) {
      throw Error(ErrorKind::InvalidArgument, "occurrences of time variable '" + s.variable + "' must be consecutive");
    }
    last_seen[s.variable] = i;
    p.types.push_back(canonicalize(s.type));
    if (i == 0) {
      p.first_delay = s.offset;
      p.fixed_gap.push_back(std::nullopt);
    } else if (steps[i - 1].variable == s.variable) {
      int gap = s.offset - steps[i - 1].offset;
      if (gap < 1) p.satisfiable = false;
      p.fixed_gap.push_back(gap);
    } else {
      p.fixed_gap.push_back(std::nullopt);
    }
  }
  return p;
}

struct Node {
  int step;
  int kind;
  int r;
  auto operator<=>(const Node&) const = default;
};

using NodeSet = std::vector<Node>;

// Advances the automaton over one observation; returns true on acceptance.
bool advance(const Pattern& p, const NodeSet& in, const IsoClassId& seen, NodeSet& out) {
  out.clear();
  const int m = static_cast<int>(p.types.size());
  auto after_match = [&](int i) -> bool {
    if (i + 1 == m) return true;
    const auto& gap = p.fixed_gap[i + 1];
    if (gap) {
      out.push_back({i + 1, 1, *gap - 1});
    } else {
      out.push_back({i + 1, 0, 0});
    }
    return false;
  };
  for (const auto& node : in) {
    if (node.r > 0) {
      out.push_back({node.step, node.kind, node.r - 1});
      continue;
    }
    const bool match = p.types[node.step] == seen;
    if (node.kind == 0) out.push_back(node);
    if (match && after_match(node.step)) return true;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return false;
}

NodeSet initial(const Pattern& p) { return {{0, 0, p.first_delay}}; }

}  // namespace

std::optional<std::vector<int>> minimal_times(const Configuration& config) {
  Pattern p = compile(config);
  if (!p.satisfiable) return std::nullopt;
  std::vector<int> times;
  int t = p.first_delay;
  for (std::size_t i = 0; i < p.types.size(); ++i) {
    if (i > 0) t += p.fixed_gap[i] ? *p.fixed_gap[i] : 1;
    times.push_back(t);
  }
  return times;
}

bool realized_in(const StateSpace& space, const Configuration& config, const std::vector<std::size_t>& states) {
  Pattern p = compile(config);
  if (!p.satisfiable) return false;
  NodeSet cur = initial(p), next;
  for (auto s : states) {
    if (advance(p, cur, space.ids.at(s), next)) return true;
    std::swap(cur, next);
  }
  return false;
}

RealizationResult realization_probability(const StateSpace& space, const Configuration& config, const Dist& mu,
                                          const StochMatrix& rho, int horizon, std::optional<MonteCarlo> montecarlo) {
  validate_dist(mu);
  validate_matrix(rho);
  if (mu.size() != space.size() || rho.size() != space.size()) {
    throw Error(ErrorKind::InvalidArgument, "chain does not match the state space");
  }
  if (horizon < 0) throw Error(ErrorKind::InvalidArgument, "horizon must be nonnegative");
  Pattern p = compile(config);
  RealizationResult res;
  if (montecarlo) {
    res.exact = false;
    res.trials = montecarlo->trials;
    res.seed = montecarlo->seed;
    if (montecarlo->trials < 1) throw Error(ErrorKind::InvalidArgument, "Monte Carlo needs at least one trial");
    if (!p.satisfiable || horizon == 0) return res;
    std::uint64_t hits = 0;
    for (int i = 0; i < montecarlo->trials; ++i) {
      auto t = simulate(mu, rho, horizon, montecarlo->seed ^ static_cast<std::uint64_t>(i));
      if (realized_in(space, config, t.states)) ++hits;
    }
    res.estimate = static_cast<double>(hits) / montecarlo->trials;
    res.standard_error = std::sqrt(res.estimate * (1 - res.estimate) / montecarlo->trials);
    return res;
  }
  res.probability = 0;
  if (!p.satisfiable || horizon == 0) return res;
  // Mass over (automaton nodes before time t, state at time t).
  std::map<std::pair<NodeSet, std::size_t>, Rational> mass;
  for (std::size_t s = 0; s < mu.size(); ++s) {
    if (sgn(mu[s]) > 0) mass[{initial(p), s}] += mu[s];
  }
  NodeSet next;
  for (int t = 0; t < horizon && !mass.empty(); ++t) {
    std::map<std::pair<NodeSet, std::size_t>, Rational> after;
    for (const auto& [key, w] : mass) {
      if (advance(p, key.first, space.ids[key.second], next)) {
        res.probability += w;
        continue;
      }
      if (t + 1 == horizon) continue;
      for (std::size_t s2 = 0; s2 < rho.size(); ++s2) {
        if (sgn(rho[key.second][s2]) == 0) continue;
        after[{next, s2}] += w * rho[key.second][s2];
      }
    }
    mass = std::move(after);
  }
  res.estimate = res.probability.get_d();
  return res;
}

namespace {

using nlohmann::json;

Rational json_rational(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw Error(ErrorKind::Syntax, "rationals must be integers or \"p/q\" strings");
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Syntax, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

ChainSpec parse_chain_json(std::string_view text) {
  json j = parse_json(text);
  try {
    const json& sigma = j.at("sigma");
    SignaturePtr sig = make_signature(parse_signature(sigma.at("signature").get<std::string>()));
    ChainSpec spec;
    if (sigma.contains("states")) {
      std::vector<Structure> states;
      for (const auto& s : sigma.at("states")) states.push_back(parse_structure(s.get<std::string>(), {sig}));
      spec.space = make_state_space(sig, std::move(states));
    } else {
      spec.space = make_state_space(sig, sigma.at("n").get<int>());
    }
    const std::size_t n = spec.space.size();
    for (const auto& p : j.at("mu")) spec.mu.push_back(json_rational(p));
    const json& rho = j.at("rho");
    if (!rho.empty() && rho.front().is_array()) {
      for (const auto& row : rho) {
        std::vector<Rational> r;
        for (const auto& p : row) r.push_back(json_rational(p));
        spec.rho.push_back(std::move(r));
      }
    } else {
      if (rho.size() != n * n) throw Error(ErrorKind::InvalidArgument, "flat rho must have |Sigma|^2 entries");
      spec.rho.assign(n, {});
      for (std::size_t i = 0; i < rho.size(); ++i) spec.rho[i / n].push_back(json_rational(rho[i]));
    }
    if (spec.mu.size() != n || spec.rho.size() != n) {
      throw Error(ErrorKind::InvalidArgument, "chain has " + std::to_string(n) + " states but mu/rho disagree");
    }
    validate_dist(spec.mu);
    validate_matrix(spec.rho);
    return spec;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Syntax, std::string("malformed chain file: ") + e.what());
  }
}

ChainSpec load_chain(const std::string& path) { return parse_chain_json(read_file(path)); }

Configuration parse_config_json(std::string_view text, const StateSpace& space) {
  json j = parse_json(text);
  try {
    Configuration c;
    for (const auto& s : j.at("steps")) {
      ConfigStep step{space.states.front(), s.value("time", std::string("t")), s.value("offset", 0)};
      if (s.contains("state")) {
        step.type = space.states.at(s.at("state").get<std::size_t>());
      } else {
        step.type = parse_structure(s.at("structure").get<std::string>(), {space.signature});
      }
      c.steps.push_back(std::move(step));
    }
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Syntax, std::string("malformed configuration: ") + e.what());
  } catch (const std::out_of_range&) {
    throw Error(ErrorKind::InvalidArgument, "configuration names a state outside the state space");
  }
}

Configuration load_config(const std::string& path, const StateSpace& space) {
  return parse_config_json(read_file(path), space);
}

}  // namespace falsilab
