#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "falsilab/canonical.hpp"
#include "falsilab/structure.hpp"

namespace falsilab {

using Rational = mpq_class;
using Dist = std::vector<Rational>;
using StochMatrix = std::vector<std::vector<Rational>>;

// Sigma = Str_L([n]), indexed in enumeration order, or an explicit list.
struct StateSpace {
  SignaturePtr signature;
  int objects = 0;
  std::vector<Structure> states;
  std::vector<IsoClassId> ids;  // canonical id of each state

  [[nodiscard]] std::size_t size() const { return states.size(); }
  [[nodiscard]] std::optional<std::size_t> index_of(const Structure& m) const;
};

StateSpace make_state_space(const SignaturePtr& sig, int n, const Budget& budget = {});
StateSpace make_state_space(const SignaturePtr& sig, std::vector<Structure> states);

// Entries >= 0 and exact sum 1; throws InvalidArgument otherwise.
void validate_dist(const Dist& mu);
// Square, entries >= 0, every row sums to 1.
void validate_matrix(const StochMatrix& rho);

Dist parse_dist(const std::vector<std::string>& entries);
std::string to_string(const Rational& q);

struct ProductChain {
  Dist mu;
  StochMatrix rho;
  int m = 1;
  std::vector<int> times;  // n_1 < ... < n_m
};

// Index of (W_1..W_m) in Sigma^m: W_1 is the most significant digit.
std::size_t product_index(const std::vector<std::size_t>& states, std::size_t base);
std::vector<std::size_t> product_states(std::size_t index, std::size_t base, int m);

inline constexpr std::size_t kProductStateCap = 4096;

// rho*((W_i),(W'_i)) = prod rho(W_i, W'_i) and mu*((W_i)) = P(X_{n_i} = W_i
// for all i). times defaults to 0, 1, ..., m-1.
ProductChain product_chain(const Dist& mu, const StochMatrix& rho, int m, std::vector<int> times = {});

// Every state reaches every other through positive entries.
bool is_irreducible(const StochMatrix& rho);
// The unique eta with eta rho = eta and sum 1, by exact elimination.
Dist stationary(const StochMatrix& rho);
bool is_positive_chain(const Dist& mu, const StochMatrix& rho);
Dist step(const Dist& mu, const StochMatrix& rho);

inline constexpr const char* kGenerator = "mt19937_64";

struct Trajectory {
  std::uint64_t seed = 0;
  int horizon = 0;
  std::string generator = kGenerator;
  std::vector<std::size_t> states;  // state at times 0..horizon-1
};

// Each draw compares u / 2^64 against exact cumulative sums.
Trajectory simulate(const Dist& mu, const StochMatrix& rho, int horizon, std::uint64_t seed);
// The trajectory as a discrete time-indexed structure.
Structure render_trajectory(const StateSpace& space, const Trajectory& t);

// One conjunct of a configuration: the world at time `variable + offset` is
// isomorphic to `type`. Consecutive steps are strictly increasing in time.
struct ConfigStep {
  Structure type;
  std::string variable;
  int offset = 0;
};

struct Configuration {
  std::vector<ConfigStep> steps;
};

// Earliest times realizing the time pattern, or nullopt when it cannot be
// realized in (omega, <, S). Occurrences of a variable must be contiguous.
std::optional<std::vector<int>> minimal_times(const Configuration& config);

// True when the configuration is realized within the first `states.size()`
// states of a run.
bool realized_in(const StateSpace& space, const Configuration& config, const std::vector<std::size_t>& states);

struct MonteCarlo {
  int trials = 1000;
  std::uint64_t seed = 0;
};

struct RealizationResult {
  bool exact = true;
  Rational probability;   // exact mode
  double estimate = 0.0;  // Monte Carlo mode (also set in exact mode)
  double standard_error = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

// Probability that the configuration is realized at times < horizon. Exact
// mode runs a forward pass over (state, pattern progress); Monte Carlo uses
// trial seeds seed ^ i.
RealizationResult realization_probability(const StateSpace& space, const Configuration& config, const Dist& mu,
                                          const StochMatrix& rho, int horizon,
                                          std::optional<MonteCarlo> montecarlo = std::nullopt);

// Chain files: {"sigma": {"signature": "...", "n": 1 | "states": [...]},
//               "mu": ["1/2", ...], "rho": [[...], ...] or row-major flat}.
struct ChainSpec {
  StateSpace space;
  Dist mu;
  StochMatrix rho;
};

ChainSpec parse_chain_json(std::string_view text);
ChainSpec load_chain(const std::string& path);
// {"steps": [{"state": 1 | "structure": "...", "time": "t", "offset": 0}, ...]}
Configuration parse_config_json(std::string_view text, const StateSpace& space);
Configuration load_config(const std::string& path, const StateSpace& space);

}  // namespace falsilab
