#include "robustflow/design_solver.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "graph_search.hpp"
#include "robustflow/error.hpp"
#include "robustflow/interdiction.hpp"

namespace robustflow {
namespace {

template <Scalar T>
const Commodity<T>& single_commodity(const Network<T>& network) {
  if (network.commodities.size() != 1) throw InputError("design needs exactly one terminal pair");
  return network.commodities.front();
}

template <Scalar T>
const T& protection_budget(const Budgets<T>& budgets) {
  if (!budgets.flow_player || !is_positive(*budgets.flow_player)) {
    throw InputError("no protection budget");
  }
  return *budgets.flow_player;
}

template <Scalar T>
bool vulnerable(const Arc<T>& arc) {
  return !arc.price.is_zero();
}

// Residual arc r = 2i (forward) or 2i + 1 (backward) of circulation arc i.
template <Scalar T>
struct Residual {
  const CirculationNetwork<T>& net;
  const std::vector<T>& flow;

  std::size_t size() const { return 2 * net.arcs.size(); }
  NodeId tail(std::size_t r) const { return r % 2 ? net.arcs[r / 2].head : net.arcs[r / 2].tail; }
  NodeId head(std::size_t r) const { return r % 2 ? net.arcs[r / 2].tail : net.arcs[r / 2].head; }
  T capacity(std::size_t r) const {
    return r % 2 ? flow[r / 2] : T(net.arcs[r / 2].capacity - flow[r / 2]);
  }
  T cost(std::size_t r) const { return r % 2 ? T(-net.arcs[r / 2].cost) : net.arcs[r / 2].cost; }
};

// Cheapest residual s-t path avoiding the return arc (Bellman-Ford; the
// residual network of an optimal flow of fixed value has no negative cycle).
template <Scalar T>
std::optional<std::pair<std::vector<std::size_t>, T>> cheapest_path(const Residual<T>& res) {
  const auto n = res.net.node_count;
  std::vector<std::optional<T>> dist(n);
  std::vector<std::size_t> via(n, 0);
  dist[res.net.source] = T(0);
  for (std::size_t round = 0; round + 1 < n; ++round) {
    bool changed = false;
    for (std::size_t r = 0; r < res.size(); ++r) {
      if (r / 2 == res.net.return_arc || !is_positive(res.capacity(r))) continue;
      const auto& du = dist[res.tail(r)];
      if (!du) continue;
      T candidate = *du + res.cost(r);
      auto& dv = dist[res.head(r)];
      if (!dv || is_negative(T(candidate - *dv))) {
        dv = std::move(candidate);
        via[res.head(r)] = r;
        changed = true;
      }
    }
    if (!changed) break;
  }
  if (!dist[res.net.sink]) return std::nullopt;
  std::vector<std::size_t> path;
  for (NodeId v = res.net.sink; v != res.net.source; v = res.tail(via[v])) {
    path.push_back(via[v]);
    if (path.size() > res.size()) throw std::logic_error("negative residual cycle");
  }
  std::reverse(path.begin(), path.end());
  return std::pair(std::move(path), *dist[res.net.sink]);
}

template <Scalar T>
std::vector<T> residual_capacity(const PathFlow<T>& flow, const Network<T>& network,
                                 std::vector<bool>& unbounded) {
  const auto load = arc_loads(flow, network);
  std::vector<T> res(network.arcs.size(), T(0));
  unbounded.assign(network.arcs.size(), false);
  for (ArcId e = 0; e < network.arcs.size(); ++e) {
    const auto& arc = network.arcs[e];
    if (arc.price.is_infinite()) continue;
    if (arc.capacity.is_infinite()) {
      unbounded[e] = true;
    } else {
      res[e] = arc.capacity.value() - load[e];
    }
  }
  return res;
}

template <Scalar T>
PathFlow<T> augmented(PathFlow<T> flow, const Path& path, const T& amount) {
  if (is_positive(amount)) flow[path] += amount;
  return flow;
}

}  // namespace

template <Scalar T>
T gamma_of_flow(const PathFlow<T>& flow, const Network<T>& network) {
  T total(0);
  for (const auto& [path, x] : flow) {
    if (is_zero(x)) continue;
    const auto price = path_price(path, network);
    if (price.is_infinite()) throw InputError("flow on an arc of infinite protection price");
    total += price.value() * x;
  }
  return total;
}

template <Scalar T>
T design_profit(const PathFlow<T>& flow, const Network<T>& network, const Budgets<T>& budgets) {
  const T gamma = gamma_of_flow(flow, network);
  const T value = flow_value(flow);
  if (is_zero(gamma)) return value;
  return value - gamma * budgets.interdictor / protection_budget(budgets);
}

template <Scalar T>
CirculationNetwork<T> build_circulation_network(const Network<T>& network,
                                                const Budgets<T>& budgets) {
  const auto& k = single_commodity(network);
  const T ratio = budgets.interdictor / protection_budget(budgets);

  // An uncapacitated path that costs less than 1 makes the LP unbounded.
  auto open_path = detail::shortest_path(
      network, k.source, k.sink,
      [&](ArcId e) {
        return network.arcs[e].capacity.is_infinite() && network.arcs[e].price.is_finite();
      },
      [&](ArcId e) { return T(ratio * network.arcs[e].price.value()); });
  if (open_path && is_negative(T(open_path->second - 1))) {
    throw InputError("design LP is unbounded: profitable terminal path " +
                     format_path(open_path->first) + " has unbounded capacity");
  }

  T bound(0);
  for (const auto& arc : network.arcs) {
    if (arc.price.is_finite() && arc.capacity.is_finite()) bound += arc.capacity.value();
  }

  CirculationNetwork<T> out;
  out.node_count = network.node_count;
  out.source = k.source;
  out.sink = k.sink;
  for (ArcId e = 0; e < network.arcs.size(); ++e) {
    const auto& arc = network.arcs[e];
    if (arc.price.is_infinite()) continue;
    out.arcs.push_back({arc.tail, arc.head,
                        arc.capacity.is_infinite() ? bound : arc.capacity.value(),
                        T(ratio * arc.price.value()), e});
  }
  out.return_arc = out.arcs.size();
  out.arcs.push_back({k.sink, k.source, bound, T(-1), std::nullopt});
  return out;
}

template <Scalar T>
std::vector<T> min_cost_circulation(const CirculationNetwork<T>& circulation) {
  std::vector<T> flow(circulation.arcs.size(), T(0));
  const Residual<T> res{circulation, flow};
  const auto ret = circulation.return_arc;
  while (true) {
    const T room = circulation.arcs[ret].capacity - flow[ret];
    if (!is_positive(room)) break;
    auto found = cheapest_path(res);
    if (!found || !is_negative(T(found->second - 1))) break;
    T amount = room;
    for (auto r : found->first) amount = std::min(amount, res.capacity(r));
    for (auto r : found->first) {
      if (r % 2) {
        flow[r / 2] -= amount;
      } else {
        flow[r / 2] += amount;
      }
    }
    flow[ret] += amount;
  }
  return flow;
}

template <Scalar T>
bool has_negative_residual_cycle(const CirculationNetwork<T>& circulation,
                                 const std::vector<T>& flow) {
  const Residual<T> res{circulation, flow};
  std::vector<T> dist(circulation.node_count, T(0));
  for (std::size_t round = 0; round <= circulation.node_count; ++round) {
    bool changed = false;
    for (std::size_t r = 0; r < res.size(); ++r) {
      if (!is_positive(res.capacity(r))) continue;
      T candidate = dist[res.tail(r)] + res.cost(r);
      if (is_negative(T(candidate - dist[res.head(r)]))) {
        dist[res.head(r)] = std::move(candidate);
        changed = true;
      }
    }
    if (!changed) return false;
  }
  return true;
}

template <Scalar T>
T circulation_cost(const CirculationNetwork<T>& circulation, const std::vector<T>& flow) {
  T total(0);
  for (std::size_t i = 0; i < circulation.arcs.size(); ++i) total += circulation.arcs[i].cost * flow[i];
  return total;
}

template <Scalar T>
std::vector<Extended<T>> uniform_costs(const PathFlow<T>& flow, const Network<T>& network,
                                       const Budgets<T>& budgets) {
  const T gamma = gamma_of_flow(flow, network);
  const auto load = arc_loads(flow, network);
  std::vector<Extended<T>> costs;
  costs.reserve(network.arcs.size());
  for (ArcId e = 0; e < network.arcs.size(); ++e) {
    const auto& arc = network.arcs[e];
    if (!vulnerable(arc)) {
      costs.push_back(Extended<T>::infinity());
    } else if (is_positive(load[e]) && is_positive(gamma)) {
      costs.emplace_back(protection_budget(budgets) / gamma);
    } else {
      costs.emplace_back(T(0));
    }
  }
  return costs;
}

template <Scalar T>
DesignSolution<T> solve_design(const Network<T>& network, const Budgets<T>& budgets) {
  const auto violations = validate_instance(network, budgets);
  if (!violations.empty()) throw InputError("invalid instance: " + violations.front());

  const auto circulation = build_circulation_network(network, budgets);
  const auto circ_flow = min_cost_circulation(circulation);
  std::vector<T> arc_flow(network.arcs.size(), T(0));
  for (std::size_t i = 0; i < circulation.arcs.size(); ++i) {
    if (auto e = circulation.arcs[i].original) arc_flow[*e] = circ_flow[i];
  }

  DesignSolution<T> out;
  out.flow = decompose_flow(std::span<const T>(arc_flow), network, circulation.source,
                            circulation.sink);
  out.gamma_of_flow = gamma_of_flow(out.flow, network);
  out.costs = uniform_costs(out.flow, network, budgets);
  out.profit = design_profit(out.flow, network, budgets);
  return out;
}

template <Scalar T>
T evaluate_design(const PathFlow<T>& flow, const std::vector<Extended<T>>& costs,
                  const Network<T>& network, const Budgets<T>& budgets) {
  if (costs.size() != network.arcs.size()) throw InputError("one cost per arc required");
  const auto problems = flow_violations(flow, network);
  if (!problems.empty()) throw InputError("infeasible flow: " + problems.front());
  const auto load = arc_loads(flow, network);
  Extended<T> spent(T(0));
  for (ArcId e = 0; e < network.arcs.size(); ++e) {
    if (is_zero(load[e])) continue;
    spent = spent + network.arcs[e].price * costs[e] * Extended<T>(load[e]);
  }
  const T budget = budgets.flow_player.value_or(T(0));
  if (spent.is_infinite() || is_positive(T(spent.value() - budget))) {
    throw InputError("protection budget exceeded");
  }
  return evaluate_robust_value(flow, std::span<const Extended<T>>(costs), budgets.interdictor);
}

template <Scalar T>
UniformityReport<T> verify_uniform_optimality(const DesignSolution<T>& solution,
                                              const Network<T>& network, const Budgets<T>& budgets,
                                              std::size_t trials, std::uint64_t seed) {
  const auto& k = single_commodity(network);
  const T& budget_f = protection_budget(budgets);
  std::mt19937_64 rng(seed);
  auto fraction = [&](std::initializer_list<int> quarters) -> T {
    std::vector<int> q(quarters);
    return T(q[std::uniform_int_distribution<std::size_t>(0, q.size() - 1)(rng)]) / T(4);
  };

  UniformityReport<T> report;
  report.baseline = evaluate_design(solution.flow, solution.costs, network, budgets);
  report.best = report.baseline;
  report.best_trial = "baseline";

  const auto load = arc_loads(solution.flow, network);
  std::vector<ArcId> loaded;
  for (ArcId e = 0; e < network.arcs.size(); ++e) {
    if (vulnerable(network.arcs[e]) && network.arcs[e].price.is_finite() && is_positive(load[e]) &&
        solution.costs[e].is_finite()) {
      loaded.push_back(e);
    }
  }

  auto record = [&](const char* name, const PathFlow<T>& flow, const std::vector<Extended<T>>& c) {
    ++report.trials;
    const T value = evaluate_design(flow, c, network, budgets);
    if (is_positive(T(value - report.baseline))) ++report.improvements;
    if (value > report.best) {
      report.best = value;
      report.best_trial = name;
    }
  };

  // A residual s-t path: random node-simple DFS, or the cheapest one in
  // total price when `cheapest` is set.
  auto residual_path = [&](bool cheapest) -> std::optional<std::pair<Path, T>> {
    std::vector<bool> unbounded;
    const auto res = residual_capacity(solution.flow, network, unbounded);
    auto usable = [&](ArcId e) { return unbounded[e] || is_positive(res[e]); };
    std::optional<Path> path;
    if (cheapest) {
      auto found = detail::shortest_path(network, k.source, k.sink, usable,
                                         [&](ArcId e) { return network.arcs[e].price.value(); });
      if (found) path = std::move(found->first);
    } else {
      const auto out = detail::out_arcs(network.node_count, network.arcs);
      std::vector<bool> seen(network.node_count, false);
      Path current;
      std::function<bool(NodeId)> walk = [&](NodeId v) {
        if (v == k.sink) return true;
        seen[v] = true;
        auto arcs = out[v];
        std::shuffle(arcs.begin(), arcs.end(), rng);
        for (ArcId e : arcs) {
          if (!usable(e) || seen[network.arcs[e].head]) continue;
          current.push_back(e);
          if (walk(network.arcs[e].head)) return true;
          current.pop_back();
        }
        return false;
      };
      if (walk(k.source)) path = current;
    }
    if (!path) return std::nullopt;
    std::optional<T> amount;
    for (ArcId e : *path) {
      if (!unbounded[e] && (!amount || res[e] < *amount)) amount = res[e];
    }
    return std::pair(*path, amount.value_or(T(1)));
  };

  for (std::size_t i = 0; i < trials; ++i) {
    const std::size_t kind = i == 0 ? 0 : 1 + (i - 1) % 5;
    switch (kind) {
      case 0:
        record("uniform costs", solution.flow, uniform_costs(solution.flow, network, budgets));
        break;
      case 1: {
        if (loaded.size() < 2) {
          record("uniform costs", solution.flow, uniform_costs(solution.flow, network, budgets));
          break;
        }
        std::uniform_int_distribution<std::size_t> pick(0, loaded.size() - 1);
        const ArcId from = loaded[pick(rng)];
        ArcId to = loaded[pick(rng)];
        while (to == from) to = loaded[pick(rng)];
        auto costs = solution.costs;
        const T weight_from = network.arcs[from].price.value() * load[from];
        const T weight_to = network.arcs[to].price.value() * load[to];
        const T moved = costs[from].value() * weight_from * fraction({1, 2, 3, 4});
        costs[from] = Extended<T>(T(costs[from].value() - moved / weight_from));
        costs[to] = Extended<T>(T(costs[to].value() + moved / weight_to));
        record("budget shift", solution.flow, costs);
        break;
      }
      case 2: {
        auto costs = uniform_costs(solution.flow, network, budgets);
        T total(0);
        std::vector<T> weight(network.arcs.size(), T(0));
        for (ArcId e : loaded) {
          weight[e] = T(std::uniform_int_distribution<int>(0, 4)(rng));
          total += weight[e] * network.arcs[e].price.value() * load[e];
        }
        if (is_zero(total)) break;
        for (ArcId e : loaded) costs[e] = Extended<T>(T(budget_f * weight[e] / total));
        record("random split", solution.flow, costs);
        break;
      }
      case 3: {
        const T alpha = fraction({1, 2, 3});
        PathFlow<T> scaled;
        for (const auto& [path, x] : solution.flow) scaled.emplace(path, x * alpha);
        record("scaled flow", scaled, uniform_costs(scaled, network, budgets));
        break;
      }
      case 4:
      case 5: {
        auto found = residual_path(kind == 5);
        if (!found) break;
        const T amount = kind == 5 ? found->second : T(found->second * fraction({2, 4}));
        auto flow = augmented(solution.flow, found->first, amount);
        record(kind == 5 ? "cheapest augmentation" : "random augmentation", flow,
               uniform_costs(flow, network, budgets));
        break;
      }
    }
  }
  return report;
}

#define ROBUSTFLOW_INSTANTIATE(T)                                                                 \
  template T gamma_of_flow(const PathFlow<T>&, const Network<T>&);                                \
  template T design_profit(const PathFlow<T>&, const Network<T>&, const Budgets<T>&);             \
  template CirculationNetwork<T> build_circulation_network(const Network<T>&, const Budgets<T>&); \
  template std::vector<T> min_cost_circulation(const CirculationNetwork<T>&);                     \
  template bool has_negative_residual_cycle(const CirculationNetwork<T>&, const std::vector<T>&); \
  template T circulation_cost(const CirculationNetwork<T>&, const std::vector<T>&);               \
  template DesignSolution<T> solve_design(const Network<T>&, const Budgets<T>&);                  \
  template std::vector<Extended<T>> uniform_costs(const PathFlow<T>&, const Network<T>&,          \
                                                  const Budgets<T>&);                             \
  template T evaluate_design(const PathFlow<T>&, const std::vector<Extended<T>>&,                 \
                             const Network<T>&, const Budgets<T>&);                               \
  template UniformityReport<T> verify_uniform_optimality(                                         \
      const DesignSolution<T>&, const Network<T>&, const Budgets<T>&, std::size_t, std::uint64_t);

ROBUSTFLOW_INSTANTIATE(double)
ROBUSTFLOW_INSTANTIATE(Rational)
#undef ROBUSTFLOW_INSTANTIATE

}  // namespace robustflow
