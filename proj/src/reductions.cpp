#include "robustflow/reductions.hpp"

#include <algorithm>

#include "robustflow/error.hpp"
#include "robustflow/interdiction.hpp"
#include "robustflow/oracle.hpp"

namespace robustflow {
namespace {

template <Scalar T>
ArcId add_arc(Network<T>& network, NodeId tail, NodeId head, Extended<T> capacity,
              Extended<T> cost, Extended<T> price) {
  network.arcs.push_back({tail, head, std::move(capacity), std::move(cost), std::move(price)});
  return network.arcs.size() - 1;
}

std::string arc_name(ArcId e) {
  return "arc " + std::to_string(e + 1);
}

}  // namespace

template <Scalar T>
MFReduction<T> mf_to_rf(const Network<T>& mf) {
  if (mf.commodities.empty()) throw InputError("multicommodity instance has no commodities");
  for (std::size_t i = 0; i < mf.commodities.size(); ++i) {
    const auto& k = mf.commodities[i];
    if (!k.demand || !is_positive(*k.demand)) {
      throw InputError("commodity " + std::to_string(i + 1) + ": demand must be positive");
    }
    if (k.source >= mf.node_count || k.sink >= mf.node_count || k.source == k.sink) {
      throw InputError("commodity " + std::to_string(i + 1) + ": invalid terminals");
    }
  }

  MFReduction<T> out;
  auto& net = out.network;
  const NodeId s = mf.node_count;
  const NodeId t = mf.node_count + 1;
  net.node_count = mf.node_count + 2;
  const auto inf = Extended<T>::infinity();
  for (const auto& arc : mf.arcs) add_arc(net, arc.tail, arc.head, arc.capacity, inf, Extended<T>(0));

  T budget(0);
  for (std::size_t i = 0; i < mf.commodities.size(); ++i) {
    const auto& k = mf.commodities[i];
    const T index(static_cast<long>(i + 1));
    out.source_arcs.push_back(
        add_arc(net, s, k.source, Extended<T>(*k.demand), Extended<T>(index), Extended<T>(0)));
    out.sink_arcs.push_back(
        add_arc(net, k.sink, t, Extended<T>(*k.demand), Extended<T>(index), Extended<T>(0)));
    budget += *k.demand * index;
  }
  out.direct_arc = add_arc(net, s, t, Extended<T>(1),
                           Extended<T>(T(static_cast<long>(mf.commodities.size() + 1))),
                           Extended<T>(0));
  net.commodities.push_back({s, t, std::nullopt});
  out.budgets.interdictor = budget;
  return out;
}

template <Scalar T>
ProtectInstance<T> adp_to_protect(const Network<T>& graph) {
  if (graph.commodities.size() != 2) throw InputError("expected two terminal pairs");
  for (const auto& k : graph.commodities) {
    if (k.source >= graph.node_count || k.sink >= graph.node_count || k.source == k.sink) {
      throw InputError("invalid terminal pair");
    }
  }
  for (const auto& arc : graph.arcs) {
    if (arc.tail >= graph.node_count || arc.head >= graph.node_count) {
      throw InputError("arc with unknown node");
    }
  }

  ProtectInstance<T> out;
  auto& net = out.network;
  net.node_count = graph.node_count;
  const auto inf = Extended<T>::infinity();
  const Extended<T> one(T(1));
  NodeId s1 = graph.commodities[0].source;
  NodeId t1 = graph.commodities[0].sink;
  const NodeId s2 = graph.commodities[1].source;
  const NodeId t2 = graph.commodities[1].sink;

  for (const auto& arc : graph.arcs) {
    out.original_arcs.push_back(add_arc(net, arc.tail, arc.head, inf, one, one));
  }
  const auto out_degree = std::count_if(graph.arcs.begin(), graph.arcs.end(),
                                        [&](const auto& a) { return a.tail == s1; });
  const auto in_degree = std::count_if(graph.arcs.begin(), graph.arcs.end(),
                                       [&](const auto& a) { return a.head == t1; });
  if (out_degree != 1) {
    const NodeId fresh = net.node_count++;
    out.source_splice = add_arc(net, fresh, s1, inf, one, one);
    s1 = fresh;
  }
  if (in_degree != 1) {
    const NodeId fresh = net.node_count++;
    out.sink_splice = add_arc(net, t1, fresh, inf, one, one);
    t1 = fresh;
  }
  out.graph_arcs = net.arcs.size();
  const T big_m(static_cast<long>(out.graph_arcs + 3));
  out.big_m = big_m;

  const NodeId s = net.node_count++;
  const NodeId t = net.node_count++;
  const Extended<T> unit(T(1)), m(big_m);
  out.a1 = add_arc(net, s, s1, unit, m, inf);
  out.z1 = add_arc(net, t1, t, unit, m, inf);
  out.a2 = add_arc(net, s, s2, m, unit, inf);
  out.z2 = add_arc(net, t2, t, m, unit, inf);
  net.commodities.push_back({s, t, std::nullopt});

  const T arcs(static_cast<long>(out.graph_arcs));
  out.budgets.flow_player = arcs * (big_m - 1);
  out.budgets.interdictor = 2 * big_m - 1;
  return out;
}

template <Scalar T>
std::optional<std::pair<Path, Path>> find_disjoint_paths(const Network<T>& graph) {
  if (graph.commodities.size() != 2) throw InputError("expected two terminal pairs");
  const auto first = enumerate_paths(graph, graph.commodities[0]);
  const auto second = enumerate_paths(graph, graph.commodities[1]);
  for (const auto& p : first) {
    for (const auto& q : second) {
      const bool disjoint = std::none_of(p.begin(), p.end(), [&](ArcId e) {
        return std::find(q.begin(), q.end(), e) != q.end();
      });
      if (disjoint) return std::pair(p, q);
    }
  }
  return std::nullopt;
}

template <Scalar T>
ProtectStrategy<T> build_protect_witness(const ProtectInstance<T>& instance, const Path& p1,
                                         const Path& p2) {
  auto map_arcs = [&](const Path& p) {
    Path out;
    for (ArcId e : p) out.push_back(instance.original_arcs.at(e));
    return out;
  };
  Path first{instance.a1};
  if (instance.source_splice) first.push_back(*instance.source_splice);
  const auto inner = map_arcs(p1);
  first.insert(first.end(), inner.begin(), inner.end());
  if (instance.sink_splice) first.push_back(*instance.sink_splice);
  first.push_back(instance.z1);

  Path second{instance.a2};
  const auto inner2 = map_arcs(p2);
  second.insert(second.end(), inner2.begin(), inner2.end());
  second.push_back(instance.z2);

  ProtectStrategy<T> out;
  out.flow[first] += T(1);
  out.flow[second] += instance.big_m;
  out.increase.assign(instance.network.arcs.size(), T(0));
  const T graph_arcs_on_p1(static_cast<long>(first.size() - 2));
  const T spread = *instance.budgets.flow_player / graph_arcs_on_p1;
  for (std::size_t i = 1; i + 1 < first.size(); ++i) out.increase[first[i]] = spread;
  return out;
}

template <Scalar T>
T evaluate_protect(const ProtectInstance<T>& instance, const PathFlow<T>& flow,
                   const std::vector<T>& increase) {
  const auto& net = instance.network;
  if (increase.size() != net.arcs.size()) throw InputError("one increase per arc required");
  for (ArcId e = 0; e < increase.size(); ++e) {
    if (is_negative(increase[e])) throw InputError(arc_name(e) + ": negative increase");
  }
  const auto problems = flow_violations(flow, net);
  if (!problems.empty()) throw InputError("capacity violated: " + problems.front());

  const auto load = arc_loads(flow, net);
  T spent(0);
  for (ArcId e = 0; e < net.arcs.size(); ++e) {
    if (is_zero(load[e]) || is_zero(increase[e])) continue;
    const auto& price = net.arcs[e].price;
    if (price.is_infinite()) {
      throw InputError("budget violated: " + arc_name(e) + " has infinite price");
    }
    spent += price.value() * increase[e] * load[e];
  }
  if (is_positive(T(spent - instance.budgets.flow_player.value_or(T(0))))) {
    throw InputError("budget violated: protection spend exceeds B_F");
  }

  std::vector<Extended<T>> costs;
  costs.reserve(net.arcs.size());
  for (ArcId e = 0; e < net.arcs.size(); ++e) {
    costs.push_back(net.arcs[e].cost + Extended<T>(increase[e]));
  }
  return evaluate_robust_value(flow, std::span<const Extended<T>>(costs),
                               instance.budgets.interdictor);
}

ProtectSearchResult search_protect_strategies(const ProtectInstance<Rational>& instance,
                                              std::size_t path_cap) {
  const auto& net = instance.network;
  const auto paths = enumerate_paths(net, net.commodities.front(), path_cap);
  const std::vector<Rational> amounts{Rational(1, 2), 1, instance.big_m / 2, instance.big_m};
  const Rational& budget_f = *instance.budgets.flow_player;

  auto protectable = [&](ArcId e) {
    const auto& p = net.arcs[e].price;
    return p.is_finite() && !p.is_zero();
  };
  // The whole budget spread uniformly (in cost) over the protectable loaded
  // arcs among `arcs`.
  auto spread_over = [&](const std::vector<Rational>& load, const std::vector<bool>& chosen) {
    std::vector<Rational> increase(net.arcs.size(), Rational(0));
    Rational weight(0);
    for (ArcId e = 0; e < net.arcs.size(); ++e) {
      if (chosen[e] && protectable(e) && load[e] > 0) weight += net.arcs[e].price.value() * load[e];
    }
    if (weight == 0) return increase;
    for (ArcId e = 0; e < net.arcs.size(); ++e) {
      if (chosen[e] && protectable(e) && load[e] > 0) increase[e] = budget_f / weight;
    }
    return increase;
  };

  ProtectSearchResult result;
  auto consider = [&](const PathFlow<Rational>& flow) {
    if (!flow_violations(flow, net).empty()) return;
    const auto load = arc_loads(flow, net);
    std::vector<std::vector<Rational>> increases;
    increases.emplace_back(net.arcs.size(), Rational(0));
    increases.push_back(spread_over(load, std::vector<bool>(net.arcs.size(), true)));
    for (const auto& [path, x] : flow) {
      std::vector<bool> chosen(net.arcs.size(), false);
      for (ArcId e : path) chosen[e] = true;
      increases.push_back(spread_over(load, chosen));
    }
    for (const auto& inc : increases) {
      ++result.strategies;
      const Rational value = evaluate_protect(instance, flow, inc);
      if (value > result.best) result.best = value;
    }
  };

  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (const auto& x : amounts) {
      consider(PathFlow<Rational>{{paths[i], x}});
      for (std::size_t j = i + 1; j < paths.size(); ++j) {
        for (const auto& y : amounts) consider(PathFlow<Rational>{{paths[i], x}, {paths[j], y}});
      }
    }
  }
  return result;
}

#define ROBUSTFLOW_INSTANTIATE(T)                                                                  \
  template MFReduction<T> mf_to_rf(const Network<T>&);                                             \
  template ProtectInstance<T> adp_to_protect(const Network<T>&);                                   \
  template std::optional<std::pair<Path, Path>> find_disjoint_paths(const Network<T>&);            \
  template ProtectStrategy<T> build_protect_witness(const ProtectInstance<T>&, const Path&,        \
                                                    const Path&);                                  \
  template T evaluate_protect(const ProtectInstance<T>&, const PathFlow<T>&, const std::vector<T>&);

ROBUSTFLOW_INSTANTIATE(double)
ROBUSTFLOW_INSTANTIATE(Rational)
#undef ROBUSTFLOW_INSTANTIATE

}  // namespace robustflow
