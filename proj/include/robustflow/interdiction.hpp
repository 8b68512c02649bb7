#pragma once

// The interdictor's side of the game: its optimal (greedy) reply to a fixed
// path flow and the surviving flow of any reply.

#include <span>
#include <vector>

#include "robustflow/network.hpp"

namespace robustflow {

/// z_{e,P}: amount stolen from path P at arc e.
template <Scalar T>
struct Steal {
  ArcId arc = 0;
  Path path;
  T amount{0};
};

template <Scalar T>
struct InterdictionPlan {
  std::vector<Steal<T>> steals;
  T spent_budget{0};
};

template <Scalar T>
struct SurvivingFlow {
  PathFlow<T> entries;  // x̄_P for every path of the evaluated flow
  T total_value{0};
};

/// x̄_P = max(x_P - sum_{e in P} z_{e,P}, 0). Throws InputError if a steal
/// names an arc that is not on its path.
template <Scalar T>
SurvivingFlow<T> robust_value(const PathFlow<T>& flow, const InterdictionPlan<T>& plan);

/// Optimal interdictor reply: flow-carrying paths in order of non-decreasing
/// bottleneck cost (ties by arc-id sequence), each attacked on its cheapest
/// arc (lowest id among minimizers) until the budget runs out. Paths of
/// infinite bottleneck are never attacked.
template <Scalar T>
InterdictionPlan<T> greedy_best_response(const PathFlow<T>& flow, const Network<T>& network,
                                         const T& budget);

/// Same, with per-arc costs supplied separately from the network (design
/// and protection variants set their own costs).
template <Scalar T>
InterdictionPlan<T> greedy_best_response(const PathFlow<T>& flow,
                                         std::span<const Extended<T>> arc_costs, const T& budget);

/// sum_P c̄_P x_P, infinite if some flow-carrying path has c̄_P = inf.
template <Scalar T>
Extended<T> interdiction_cost_of_flow(const PathFlow<T>& flow, const Network<T>& network);

/// sum over steals of c_e z_{e,P}.
template <Scalar T>
Extended<T> plan_cost(const InterdictionPlan<T>& plan, std::span<const Extended<T>> arc_costs);

template <Scalar T>
Extended<T> plan_cost(const InterdictionPlan<T>& plan, const Network<T>& network);

/// val(x, greedy reply): the robust value of a flow.
template <Scalar T>
T evaluate_robust_value(const PathFlow<T>& flow, const Network<T>& network, const T& budget);

template <Scalar T>
T evaluate_robust_value(const PathFlow<T>& flow, std::span<const Extended<T>> arc_costs,
                        const T& budget);

template <Scalar T>
std::vector<Extended<T>> arc_costs(const Network<T>& network);

}  // namespace robustflow
