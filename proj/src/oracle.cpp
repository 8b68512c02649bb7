#include "robustflow/oracle.hpp"

#include <algorithm>
#include <set>

#include "robustflow/error.hpp"
#include "robustflow/lp.hpp"

namespace robustflow {

std::size_t PathUniverse::size() const {
  std::size_t total = 0;
  for (const auto& paths : per_commodity) total += paths.size();
  return total;
}

std::vector<Path> PathUniverse::all() const {
  std::set<Path> distinct;
  for (const auto& paths : per_commodity) distinct.insert(paths.begin(), paths.end());
  return {distinct.begin(), distinct.end()};
}

bool PathUniverse::contains(const Path& path) const {
  return std::any_of(per_commodity.begin(), per_commodity.end(), [&](const auto& paths) {
    return std::find(paths.begin(), paths.end(), path) != paths.end();
  });
}

namespace {

template <Scalar T>
void extend(const Network<T>& network, const std::vector<std::vector<ArcId>>& out, NodeId at,
            NodeId sink, std::vector<bool>& used, Path& current, std::vector<Path>& found,
            std::size_t cap) {
  if (at == sink && !current.empty()) {
    if (found.size() == cap) throw OracleLimitError("more than " + std::to_string(cap) + " paths");
    found.push_back(current);
  }
  for (ArcId e : out[at]) {
    if (used[e]) continue;
    used[e] = true;
    current.push_back(e);
    extend(network, out, network.arcs[e].head, sink, used, current, found, cap);
    current.pop_back();
    used[e] = false;
  }
}

template <Scalar T>
std::vector<Extended<T>> capacity_rows(const Network<T>& network) {
  std::vector<Extended<T>> rows;
  for (const auto& arc : network.arcs) rows.push_back(arc.capacity);
  return rows;
}

template <Scalar T>
Column<T> path_column(const Path& path, T objective) {
  Column<T> col;
  for (ArcId e : path) col.entries.emplace_back(e, T(1));
  col.objective = std::move(objective);
  col.label = path;
  return col;
}

template <Scalar T>
PathFlow<T> flow_of(const LPResult<T>& lp) {
  PathFlow<T> flow;
  for (std::size_t j = 0; j < lp.columns.size(); ++j) {
    if (is_positive(lp.primal[j])) flow[lp.columns[j].label] += lp.primal[j];
  }
  return flow;
}

template <Scalar T>
bool has_infinite_price(const Path& path, const Network<T>& network) {
  return std::any_of(path.begin(), path.end(),
                     [&](ArcId e) { return network.arcs[e].price.is_infinite(); });
}

}  // namespace

template <Scalar T>
std::vector<Path> enumerate_paths(const Network<T>& network, const Commodity<T>& commodity,
                                  std::size_t cap) {
  if (cap == 0) throw std::invalid_argument("path cap must be positive");
  std::vector<std::vector<ArcId>> out(network.node_count);
  for (ArcId e = 0; e < network.arcs.size(); ++e) out[network.arcs[e].tail].push_back(e);
  std::vector<bool> used(network.arcs.size(), false);
  Path current;
  std::vector<Path> found;
  extend(network, out, commodity.source, commodity.sink, used, current, found, cap);
  return found;
}

template <Scalar T>
PathUniverse enumerate_paths(const Network<T>& network, std::size_t cap) {
  PathUniverse universe;
  std::size_t left = cap;
  for (const auto& k : network.commodities) {
    if (left == 0) throw OracleLimitError("more than " + std::to_string(cap) + " paths");
    universe.per_commodity.push_back(enumerate_paths(network, k, left));
    left -= universe.per_commodity.back().size();
  }
  return universe;
}

template <Scalar T>
T best_response_exact(const PathFlow<T>& flow, const Network<T>& network, const T& budget,
                      const PathUniverse& universe) {
  PackingLP<T> lp;
  lp.row_bounds.emplace_back(budget);
  T total(0);
  for (const auto& [path, x] : flow) {
    if (!universe.contains(path)) throw InputError("flow path outside the path universe");
    const std::size_t row = lp.row_bounds.size();
    lp.row_bounds.emplace_back(x);
    total += x;
    for (ArcId e : path) {
      const auto& c = network.arcs[e].cost;
      if (c.is_infinite()) continue;
      Column<T> z;
      z.objective = T(1);
      if (c.value() != 0) z.entries.emplace_back(0, c.value());
      z.entries.emplace_back(row, T(1));
      lp.columns.push_back(std::move(z));
    }
  }
  const auto result = solve_explicit(lp);
  return total - result.objective;
}

template <Scalar T>
OracleResult<T> brute_force_rf(const Network<T>& network, const Budgets<T>& budgets,
                               const PathUniverse& universe) {
  const bool budgeted = budgets.flow_player.has_value();
  std::vector<Path> paths;
  for (auto& p : universe.all()) {
    if (!budgeted || !has_infinite_price(p, network)) paths.push_back(std::move(p));
  }

  std::set<T> lambdas{T(0)};
  for (const auto& arc : network.arcs) {
    if (arc.cost.is_finite() && arc.cost.value() > 0) lambdas.insert(T(1) / arc.cost.value());
  }

  OracleResult<T> out;
  bool have_best = false;
  for (const T& lambda : lambdas) {
    PackingLP<T> lp;
    lp.row_bounds = capacity_rows(network);
    if (budgeted) lp.row_bounds.emplace_back(*budgets.flow_player);
    for (const auto& p : paths) {
      T coefficient(1);
      for (ArcId e : p) {
        const auto& c = network.arcs[e].cost;
        if (c.is_finite()) coefficient = std::min(coefficient, T(lambda * c.value()));
      }
      auto col = path_column(p, coefficient);
      if (budgeted) col.entries.emplace_back(network.arcs.size(), path_price(p, network).value());
      lp.columns.push_back(std::move(col));
    }
    const auto result = solve_explicit(lp);
    if (result.status == LPStatus::unbounded) throw InputError("unbounded robust flow LP");
    const T value = result.objective - lambda * budgets.interdictor;
    out.breakpoints.push_back({lambda, value});
    if (!have_best || value > out.value) {
      out.value = value;
      out.flow = flow_of(result);
      have_best = true;
    }
  }
  if (!(out.value > 0)) {
    out.value = T(0);
    out.flow.clear();
  }
  return out;
}

template <Scalar T>
OracleResult<T> brute_force_design(const Network<T>& network, const Budgets<T>& budgets,
                                   const PathUniverse& universe) {
  if (!budgets.flow_player || !(*budgets.flow_player > 0)) {
    throw InputError("no protection budget");
  }
  const T ratio = budgets.interdictor / *budgets.flow_player;
  PackingLP<T> lp;
  lp.row_bounds = capacity_rows(network);
  for (const auto& p : universe.all()) {
    if (has_infinite_price(p, network)) continue;
    lp.columns.push_back(path_column(p, T(1 - ratio * path_price(p, network).value())));
  }
  const auto result = solve_explicit(lp);
  if (result.status == LPStatus::unbounded) throw InputError("unbounded design LP");
  OracleResult<T> out;
  out.value = result.objective;
  out.flow = flow_of(result);
  return out;
}

template <Scalar T>
bool mf_feasible(const Network<T>& network, const PathUniverse& universe) {
  PackingLP<T> lp;
  lp.row_bounds = capacity_rows(network);
  T demand(0);
  for (std::size_t i = 0; i < network.commodities.size(); ++i) {
    const T d = network.commodities[i].demand.value_or(T(0));
    demand += d;
    const std::size_t row = lp.row_bounds.size();
    lp.row_bounds.emplace_back(d);
    for (const auto& p : universe.per_commodity.at(i)) {
      auto col = path_column(p, T(1));
      col.entries.emplace_back(row, T(1));
      lp.columns.push_back(std::move(col));
    }
  }
  const auto result = solve_explicit(lp);
  return !is_negative(T(result.objective - demand));
}

#define ROBUSTFLOW_INSTANTIATE(T)                                                                \
  template std::vector<Path> enumerate_paths(const Network<T>&, const Commodity<T>&,             \
                                             std::size_t);                                       \
  template PathUniverse enumerate_paths(const Network<T>&, std::size_t);                         \
  template T best_response_exact(const PathFlow<T>&, const Network<T>&, const T&,                \
                                 const PathUniverse&);                                           \
  template OracleResult<T> brute_force_rf(const Network<T>&, const Budgets<T>&,                  \
                                          const PathUniverse&);                                  \
  template OracleResult<T> brute_force_design(const Network<T>&, const Budgets<T>&,              \
                                              const PathUniverse&);                              \
  template bool mf_feasible(const Network<T>&, const PathUniverse&);

ROBUSTFLOW_INSTANTIATE(double)
ROBUSTFLOW_INSTANTIATE(Rational)
#undef ROBUSTFLOW_INSTANTIATE

// Random instances -----------------------------------------------------------

namespace {

template <class V>
const V& pick(const std::vector<V>& values, std::mt19937_64& rng) {
  return values[std::uniform_int_distribution<std::size_t>(0, values.size() - 1)(rng)];
}

std::size_t uniform(std::size_t lo, std::size_t hi, std::mt19937_64& rng) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Extended<Rational> draw_capacity(bool integral, std::mt19937_64& rng) {
  static const std::vector<Rational> fractional{Rational(1, 2), 1, 2, 3, 5};
  static const std::vector<Rational> whole{1, 2, 3, 5};
  return Extended<Rational>(pick(integral ? whole : fractional, rng));
}

Extended<Rational> draw_cost(std::mt19937_64& rng) {
  static const std::vector<Rational> grid{Rational(1, 2), 1, 2, 3, 5};
  if (uniform(0, 5, rng) == 5) return Extended<Rational>::infinity();
  return Extended<Rational>(pick(grid, rng));
}

Extended<Rational> draw_price(std::mt19937_64& rng) {
  static const std::vector<Rational> grid{0, Rational(1, 2), 1, 1, 2, 3};
  if (uniform(0, 9, rng) == 0) return Extended<Rational>::infinity();
  return Extended<Rational>(pick(grid, rng));
}

Network<Rational> draw_network(const RandomInstanceOptions& options, std::mt19937_64& rng) {
  const std::size_t n = uniform(std::max<std::size_t>(options.min_nodes, 2),
                                std::max(options.max_nodes, options.min_nodes), rng);
  Network<Rational> network;
  network.node_count = n;

  auto add_arc = [&](NodeId tail, NodeId head) {
    Arc<Rational> arc;
    arc.tail = tail;
    arc.head = head;
    arc.capacity = draw_capacity(options.integral_capacities, rng);
    arc.cost = draw_cost(rng);
    arc.price = options.protection_prices ? draw_price(rng) : Extended<Rational>(0);
    network.arcs.push_back(std::move(arc));
  };

  for (std::size_t i = 0; i < options.commodities; ++i) {
    Commodity<Rational> k;
    k.source = uniform(0, n - 1, rng);
    do {
      k.sink = uniform(0, n - 1, rng);
    } while (k.sink == k.source);
    if (options.demands) k.demand = pick(std::vector<Rational>{Rational(1, 2), 1, 2, 3}, rng);

    // Planted path through a random sequence of intermediate nodes.
    std::vector<NodeId> inner;
    for (NodeId v = 0; v < n; ++v) {
      if (v != k.source && v != k.sink && uniform(0, 2, rng) == 0) inner.push_back(v);
    }
    std::shuffle(inner.begin(), inner.end(), rng);
    NodeId at = k.source;
    for (NodeId v : inner) {
      if (network.arcs.size() + 1 >= options.max_arcs) break;
      add_arc(at, v);
      at = v;
    }
    add_arc(at, k.sink);
    network.commodities.push_back(std::move(k));
  }

  const std::size_t m = uniform(network.arcs.size(), std::max(options.max_arcs, network.arcs.size()), rng);
  while (network.arcs.size() < m) {
    const NodeId tail = uniform(0, n - 1, rng);
    const NodeId head = uniform(0, n - 1, rng);
    if (tail != head) add_arc(tail, head);
  }
  // Shuffle arc ids so planted arcs are not always the lowest.
  std::shuffle(network.arcs.begin(), network.arcs.end(), rng);
  return network;
}

}  // namespace

RandomInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& options) {
  std::mt19937_64 rng(seed);
  while (true) {
    RandomInstance out;
    out.seed = seed;
    out.network = draw_network(options, rng);
    out.budgets.interdictor = pick(std::vector<Rational>{0, Rational(1, 2), 1, 2, 3, 5, 8}, rng);
    if (options.flow_budget) {
      out.budgets.flow_player = pick(std::vector<Rational>{1, 2, 4, 6, 10}, rng);
    }
    try {
      out.universe = enumerate_paths(out.network, options.path_cap);
    } catch (const OracleLimitError&) {
      continue;
    }
    return out;
  }
}

PathFlow<Rational> random_path_flow(const Network<Rational>& network,
                                    const std::vector<Path>& paths, std::mt19937_64& rng) {
  static const std::vector<Rational> amounts{Rational(1, 4), Rational(1, 2), 1, 2, 3};
  std::vector<Rational> residual(network.arcs.size());
  std::vector<bool> unbounded(network.arcs.size());
  for (ArcId e = 0; e < network.arcs.size(); ++e) {
    unbounded[e] = network.arcs[e].capacity.is_infinite();
    if (!unbounded[e]) residual[e] = network.arcs[e].capacity.value();
  }
  std::vector<std::size_t> order(paths.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  PathFlow<Rational> flow;
  for (std::size_t i : order) {
    if (uniform(0, 2, rng) == 0) continue;
    const Path& p = paths[i];
    Rational amount = pick(amounts, rng);
    // Arcs repeat at most once per path, so the residual check is per arc.
    for (ArcId e : p) {
      if (!unbounded[e]) amount = std::min(amount, residual[e]);
    }
    if (amount <= 0) continue;
    for (ArcId e : p) {
      if (!unbounded[e]) residual[e] -= amount;
    }
    flow[p] += amount;
  }
  return flow;
}

InterdictionPlan<Rational> random_interdiction_plan(const PathFlow<Rational>& flow,
                                                    const Network<Rational>& network,
                                                    const Rational& budget, std::mt19937_64& rng) {
  static const std::vector<Rational> fractions{0, Rational(1, 4), Rational(1, 2), Rational(3, 4),
                                               1};
  InterdictionPlan<Rational> plan;
  Rational left = budget;
  std::vector<const Path*> order;
  for (const auto& entry : flow) order.push_back(&entry.first);
  std::shuffle(order.begin(), order.end(), rng);
  for (const Path* p : order) {
    Rational room = flow.at(*p);
    for (int tries = 0; tries < 2; ++tries) {
      const ArcId e = pick(*p, rng);
      const auto& c = network.arcs[e].cost;
      if (c.is_infinite()) continue;
      Rational most = room;
      if (c.value() > 0) most = std::min(most, Rational(left / c.value()));
      const Rational amount = most * pick(fractions, rng);
      if (amount <= 0) continue;
      plan.steals.push_back({e, *p, amount});
      room -= amount;
      left -= amount * c.value();
      plan.spent_budget += amount * c.value();
    }
  }
  return plan;
}

}  // namespace robustflow
