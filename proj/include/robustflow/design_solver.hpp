#pragma once

// Network design against the interdictor: the flow player also chooses the
// interdiction costs c, paying gamma_e c_e per unit of load on arc e out of
// the budget B_F. Some optimal strategy spreads the budget uniformly,
// c*_e = B_F / Gamma(x) on every vulnerable arc that carries flow, which
// reduces the problem to
//
//   max  sum_P (1 - (B_I/B_F) gamma(P)) x_P    over capacity-feasible x,
//
// a min-cost circulation on A + (t, s) with arc costs (B_I/B_F) gamma_e and
// cost -1 on the return arc.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robustflow/network.hpp"

namespace robustflow {

template <Scalar T>
struct DesignSolution {
  PathFlow<T> flow;
  std::vector<Extended<T>> costs;  // c*_e per arc
  T profit{0};
  T gamma_of_flow{0};  // Gamma(x) = sum_P gamma(P) x_P
};

/// Gamma(x). Throws InputError if flow runs through an arc of infinite price.
template <Scalar T>
T gamma_of_flow(const PathFlow<T>& flow, const Network<T>& network);

/// sum_P x_P - Gamma(x) B_I / B_F. Throws InputError("no protection budget")
/// when B_F is missing or zero while Gamma(x) > 0.
template <Scalar T>
T design_profit(const PathFlow<T>& flow, const Network<T>& network, const Budgets<T>& budgets);

template <Scalar T>
struct CirculationArc {
  NodeId tail = 0;
  NodeId head = 0;
  T capacity{0};
  T cost{0};
  std::optional<ArcId> original;  // none for the return arc
};

/// D' = A + (t, s). Arcs of infinite price are left out, infinite
/// capacities (and the return arc) are bounded by the sum of the finite
/// ones.
template <Scalar T>
struct CirculationNetwork {
  std::size_t node_count = 0;
  std::vector<CirculationArc<T>> arcs;
  ArcId return_arc = 0;
  NodeId source = 0;
  NodeId sink = 0;
};

/// Requires a single commodity and B_F > 0. Throws InputError if an
/// uncapacitated terminal path pays off, since the design LP is then
/// unbounded.
template <Scalar T>
CirculationNetwork<T> build_circulation_network(const Network<T>& network,
                                                const Budgets<T>& budgets);

/// Minimum-cost circulation. Every cycle of negative cost runs through the
/// return arc, so it is computed by repeatedly pushing flow along a cheapest
/// residual s-t path while that path costs less than 1. Integral whenever
/// the capacities are.
template <Scalar T>
std::vector<T> min_cost_circulation(const CirculationNetwork<T>& circulation);

/// Optimality certificate: true iff the residual network of `flow` has a
/// cycle of negative cost.
template <Scalar T>
bool has_negative_residual_cycle(const CirculationNetwork<T>& circulation,
                                 const std::vector<T>& flow);

template <Scalar T>
T circulation_cost(const CirculationNetwork<T>& circulation, const std::vector<T>& flow);

template <Scalar T>
DesignSolution<T> solve_design(const Network<T>& network, const Budgets<T>& budgets);

/// c*_e for a given flow: B_F / Gamma(x) on loaded vulnerable arcs, 0 on
/// unloaded vulnerable arcs, inf where gamma_e = 0.
template <Scalar T>
std::vector<Extended<T>> uniform_costs(const PathFlow<T>& flow, const Network<T>& network,
                                       const Budgets<T>& budgets);

/// Robust value of (x, c): checks capacities and sum_e gamma_e c_e load_e <=
/// B_F (InputError otherwise), then lets the greedy interdictor reply.
template <Scalar T>
T evaluate_design(const PathFlow<T>& flow, const std::vector<Extended<T>>& costs,
                  const Network<T>& network, const Budgets<T>& budgets);

template <Scalar T>
struct UniformityReport {
  std::size_t trials = 0;
  std::size_t improvements = 0;
  T baseline{0};  // greedy value of the solution's own (x, c)
  T best{0};      // best value among the trials
  std::string best_trial;
};

/// Tries `trials` feasible strategies near the solution: the uniform costs
/// for its own flow, budget shifts between loaded arcs, random budget
/// splits, scaled-down flows, and flows augmented along residual paths.
/// Counts the ones whose greedy value beats the baseline by more than the
/// arithmetic tolerance.
template <Scalar T>
UniformityReport<T> verify_uniform_optimality(const DesignSolution<T>& solution,
                                              const Network<T>& network, const Budgets<T>& budgets,
                                              std::size_t trials, std::uint64_t seed = 1);

}  // namespace robustflow
