#pragma once

// Brute-force reference solvers. Every path of the instance is listed up
// front and each LP is solved with its full column set, so nothing here
// depends on pricing, breakpoint pruning, or the greedy interdictor. Meant
// for small instances in tests; it does not scale.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "robustflow/interdiction.hpp"
#include "robustflow/network.hpp"

namespace robustflow {

inline constexpr std::size_t default_path_cap = 2000;

class OracleLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All arc-simple terminal paths, per commodity.
struct PathUniverse {
  std::vector<std::vector<Path>> per_commodity;

  std::size_t size() const;
  /// Distinct paths over all commodities, sorted.
  std::vector<Path> all() const;
  bool contains(const Path& path) const;
};

/// Throws OracleLimitError when more than `cap` paths exist.
template <Scalar T>
std::vector<Path> enumerate_paths(const Network<T>& network, const Commodity<T>& commodity,
                                  std::size_t cap = default_path_cap);

/// Every commodity; the cap bounds the total.
template <Scalar T>
PathUniverse enumerate_paths(const Network<T>& network, std::size_t cap = default_path_cap);

/// Minimum surviving flow over all interdiction plans z with
/// sum c_e z_{e,P} <= budget and sum_{e in P} z_{e,P} <= x_P, from an
/// explicit LP over the z variables.
template <Scalar T>
T best_response_exact(const PathFlow<T>& flow, const Network<T>& network, const T& budget,
                      const PathUniverse& universe);

template <Scalar T>
struct OracleBreakpoint {
  T lambda{0};
  T lp_value{0};
};

template <Scalar T>
struct OracleResult {
  T value{0};
  PathFlow<T> flow;
  std::vector<OracleBreakpoint<T>> breakpoints;  // by increasing lambda
};

/// Robust max flow by solving the scaled LP at lambda = 0 and at 1 / c_e for
/// every positive finite cost, on all paths at once. With a flow budget the
/// row sum_P gamma(P) x_P <= B_F is added and paths through arcs of infinite
/// price are dropped. Throws InputError if some LP is unbounded.
template <Scalar T>
OracleResult<T> brute_force_rf(const Network<T>& network, const Budgets<T>& budgets,
                               const PathUniverse& universe);

/// max sum_P (1 - (B_I/B_F) gamma(P)) x_P over capacity-feasible path flows.
/// Throws InputError("no protection budget") unless B_F > 0.
template <Scalar T>
OracleResult<T> brute_force_design(const Network<T>& network, const Budgets<T>& budgets,
                                   const PathUniverse& universe);

/// True iff every commodity can route its demand simultaneously. Commodities
/// without a demand count as demand 0.
template <Scalar T>
bool mf_feasible(const Network<T>& network, const PathUniverse& universe);

// Random instances -----------------------------------------------------------

struct RandomInstanceOptions {
  std::size_t min_nodes = 2;
  std::size_t max_nodes = 8;
  std::size_t max_arcs = 16;
  std::size_t commodities = 1;
  bool integral_capacities = false;
  bool protection_prices = false;  // draw gamma; otherwise gamma = 0
  bool flow_budget = false;        // draw B_F
  bool demands = false;            // draw d_i
  std::size_t path_cap = default_path_cap;
};

struct RandomInstance {
  std::uint64_t seed = 0;
  Network<Rational> network;
  Budgets<Rational> budgets;
  PathUniverse universe;
};

/// Arcs are sampled uniformly over ordered node pairs after planting one
/// path per commodity. Capacities come from {1/2, 1, 2, 3, 5} (or {1, 2, 3,
/// 5} when integral), costs from {1/2, 1, 2, 3, 5, inf}. Instances whose path
/// count exceeds the cap are redrawn from the same stream, so the seed alone
/// reproduces the result.
RandomInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& options = {});

/// A capacity-feasible flow on a random subset of `paths`.
PathFlow<Rational> random_path_flow(const Network<Rational>& network,
                                    const std::vector<Path>& paths, std::mt19937_64& rng);

/// A random plan that respects the budget and never steals more than a
/// path carries.
InterdictionPlan<Rational> random_interdiction_plan(const PathFlow<Rational>& flow,
                                                    const Network<Rational>& network,
                                                    const Rational& budget, std::mt19937_64& rng);

}  // namespace robustflow
