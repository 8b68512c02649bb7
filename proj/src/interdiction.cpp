#include "robustflow/interdiction.hpp"

#include <algorithm>

#include "robustflow/error.hpp"

namespace robustflow {
namespace {

template <Scalar T>
struct Candidate {
  const Path* path;
  T flow;
  Extended<T> bottleneck;
  ArcId cheapest_arc;
};

template <Scalar T>
Candidate<T> make_candidate(const Path& path, const T& flow, std::span<const Extended<T>> costs) {
  ArcId best = path.front();
  for (ArcId e : path) {
    const auto& c = costs[e];
    if (c < costs[best] || (c == costs[best] && e < best)) best = e;
  }
  return Candidate<T>{&path, flow, costs[best], best};
}

}  // namespace

template <Scalar T>
std::vector<Extended<T>> arc_costs(const Network<T>& network) {
  std::vector<Extended<T>> costs;
  costs.reserve(network.arcs.size());
  for (const auto& arc : network.arcs) costs.push_back(arc.cost);
  return costs;
}

template <Scalar T>
SurvivingFlow<T> robust_value(const PathFlow<T>& flow, const InterdictionPlan<T>& plan) {
  std::map<Path, T> stolen;
  for (const auto& steal : plan.steals) {
    if (std::find(steal.path.begin(), steal.path.end(), steal.arc) == steal.path.end()) {
      throw InputError("steal on arc " + std::to_string(steal.arc + 1) +
                       " which is not on path " + format_path(steal.path));
    }
    if (is_negative(steal.amount)) throw InputError("negative steal amount");
    stolen[steal.path] += steal.amount;
  }

  SurvivingFlow<T> out;
  for (const auto& [path, x] : flow) {
    T survive = x;
    if (auto it = stolen.find(path); it != stolen.end()) survive -= it->second;
    if (survive < 0) survive = T(0);
    out.total_value += survive;
    out.entries.emplace(path, std::move(survive));
  }
  return out;
}

template <Scalar T>
InterdictionPlan<T> greedy_best_response(const PathFlow<T>& flow,
                                         std::span<const Extended<T>> arc_costs, const T& budget) {
  std::vector<Candidate<T>> order;
  for (const auto& [path, x] : flow) {
    if (is_positive(x)) order.push_back(make_candidate(path, x, arc_costs));
  }
  // flow is already in lexicographic path order, so a stable sort yields the
  // documented tie-break.
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.bottleneck < b.bottleneck; });

  InterdictionPlan<T> plan;
  T remaining = budget;
  for (const auto& cand : order) {
    if (cand.bottleneck.is_infinite()) break;
    const T& unit = cand.bottleneck.value();
    T amount;
    if (unit == 0) {
      amount = cand.flow;
    } else {
      if (!is_positive(remaining)) break;
      amount = std::min(cand.flow, T(remaining / unit));
      T spend = amount * unit;
      remaining -= spend;
      plan.spent_budget += spend;
    }
    plan.steals.push_back(Steal<T>{cand.cheapest_arc, *cand.path, amount});
  }
  return plan;
}

template <Scalar T>
InterdictionPlan<T> greedy_best_response(const PathFlow<T>& flow, const Network<T>& network,
                                         const T& budget) {
  const auto costs = arc_costs(network);
  return greedy_best_response<T>(flow, std::span<const Extended<T>>(costs), budget);
}

template <Scalar T>
Extended<T> interdiction_cost_of_flow(const PathFlow<T>& flow, const Network<T>& network) {
  T total(0);
  for (const auto& [path, x] : flow) {
    if (!is_positive(x)) continue;
    const auto c = bottleneck_cost(path, network);
    if (c.is_infinite()) return Extended<T>::infinity();
    total += c.value() * x;
  }
  return Extended<T>(total);
}

template <Scalar T>
Extended<T> plan_cost(const InterdictionPlan<T>& plan, std::span<const Extended<T>> arc_costs) {
  Extended<T> total;
  for (const auto& steal : plan.steals) {
    total = total + arc_costs[steal.arc] * Extended<T>(steal.amount);
  }
  return total;
}

template <Scalar T>
Extended<T> plan_cost(const InterdictionPlan<T>& plan, const Network<T>& network) {
  const auto costs = arc_costs(network);
  return plan_cost<T>(plan, std::span<const Extended<T>>(costs));
}

template <Scalar T>
T evaluate_robust_value(const PathFlow<T>& flow, std::span<const Extended<T>> arc_costs,
                        const T& budget) {
  return robust_value(flow, greedy_best_response(flow, arc_costs, budget)).total_value;
}

template <Scalar T>
T evaluate_robust_value(const PathFlow<T>& flow, const Network<T>& network, const T& budget) {
  return robust_value(flow, greedy_best_response(flow, network, budget)).total_value;
}

#define ROBUSTFLOW_INSTANTIATE(T)                                                                  \
  template std::vector<Extended<T>> arc_costs(const Network<T>&);                                  \
  template SurvivingFlow<T> robust_value(const PathFlow<T>&, const InterdictionPlan<T>&);          \
  template InterdictionPlan<T> greedy_best_response(const PathFlow<T>&,                            \
                                                    std::span<const Extended<T>>, const T&);       \
  template InterdictionPlan<T> greedy_best_response(const PathFlow<T>&, const Network<T>&,         \
                                                    const T&);                                     \
  template Extended<T> interdiction_cost_of_flow(const PathFlow<T>&, const Network<T>&);           \
  template Extended<T> plan_cost(const InterdictionPlan<T>&, std::span<const Extended<T>>);        \
  template Extended<T> plan_cost(const InterdictionPlan<T>&, const Network<T>&);                   \
  template T evaluate_robust_value(const PathFlow<T>&, std::span<const Extended<T>>, const T&);    \
  template T evaluate_robust_value(const PathFlow<T>&, const Network<T>&, const T&);

ROBUSTFLOW_INSTANTIATE(double)
ROBUSTFLOW_INSTANTIATE(Rational)
#undef ROBUSTFLOW_INSTANTIATE

}  // namespace robustflow
