#include "robustflow/network.hpp"

#include <algorithm>
#include <sstream>

#include "robustflow/error.hpp"

namespace robustflow {
namespace {

template <Scalar T>
bool negative(const Extended<T>& x) {
  return x.is_finite() && x.value() < 0;
}

std::string arc_label(ArcId e) { return "arc " + std::to_string(e + 1); }

}  // namespace

template <Scalar T>
std::vector<std::string> validate_instance(const Network<T>& network, const Budgets<T>& budgets) {
  std::vector<std::string> violations;
  const auto n = network.node_count;
  if (n == 0) violations.emplace_back("network has no nodes");

  for (ArcId e = 0; e < network.arcs.size(); ++e) {
    const auto& arc = network.arcs[e];
    if (arc.tail >= n) violations.push_back(arc_label(e) + ": unknown node (tail)");
    if (arc.head >= n) violations.push_back(arc_label(e) + ": unknown node (head)");
    if (negative(arc.capacity)) violations.push_back(arc_label(e) + ": negative capacity");
    if (negative(arc.cost)) violations.push_back(arc_label(e) + ": negative interdiction cost");
    if (negative(arc.price)) violations.push_back(arc_label(e) + ": negative protection price");
  }

  if (network.commodities.empty()) violations.emplace_back("missing terminals");
  for (std::size_t i = 0; i < network.commodities.size(); ++i) {
    const auto& k = network.commodities[i];
    const auto label = "commodity " + std::to_string(i + 1);
    if (k.source >= n || k.sink >= n) violations.push_back(label + ": unknown node");
    if (k.source == k.sink) violations.push_back(label + ": source equals sink");
    if (k.demand && *k.demand < 0) violations.push_back(label + ": negative demand");
  }

  if (budgets.interdictor < 0) violations.emplace_back("negative interdictor budget");
  if (budgets.flow_player && *budgets.flow_player < 0) {
    violations.emplace_back("negative flow player budget");
  }
  return violations;
}

template <Scalar T>
bool is_valid_path(const Path& path, const Network<T>& network, const Commodity<T>& commodity) {
  if (path.empty()) return false;
  std::vector<bool> used(network.arcs.size(), false);
  NodeId at = commodity.source;
  for (ArcId e : path) {
    if (e >= network.arcs.size() || used[e]) return false;
    used[e] = true;
    if (network.arcs[e].tail != at) return false;
    at = network.arcs[e].head;
  }
  return at == commodity.sink;
}

template <Scalar T>
bool is_valid_path(const Path& path, const Network<T>& network) {
  return std::any_of(network.commodities.begin(), network.commodities.end(),
                     [&](const auto& k) { return is_valid_path(path, network, k); });
}

template <Scalar T>
Extended<T> bottleneck_cost(const Path& path, const Network<T>& network) {
  if (path.empty()) throw std::invalid_argument("bottleneck of empty path");
  auto result = Extended<T>::infinity();
  for (ArcId e : path) result = min(result, network.arcs.at(e).cost);
  return result;
}

template <Scalar T>
Extended<T> path_price(const Path& path, const Network<T>& network) {
  Extended<T> total;
  for (ArcId e : path) total = total + network.arcs.at(e).price;
  return total;
}

template <Scalar T>
std::vector<T> arc_loads(const PathFlow<T>& flow, const Network<T>& network) {
  std::vector<T> load(network.arcs.size(), T(0));
  for (const auto& [path, value] : flow) {
    for (ArcId e : path) load.at(e) += value;
  }
  return load;
}

template <Scalar T>
T flow_value(const PathFlow<T>& flow) {
  T total(0);
  for (const auto& entry : flow) total += entry.second;
  return total;
}

template <Scalar T>
std::vector<std::string> flow_violations(const PathFlow<T>& flow, const Network<T>& network) {
  std::vector<std::string> violations;
  for (const auto& [path, value] : flow) {
    if (is_negative(value)) violations.push_back("path " + format_path(path) + ": negative flow");
    if (!is_valid_path(path, network)) {
      violations.push_back("path " + format_path(path) + ": not a terminal-to-terminal path");
      return violations;
    }
  }
  const auto load = arc_loads(flow, network);
  for (ArcId e = 0; e < load.size(); ++e) {
    const auto& cap = network.arcs[e].capacity;
    if (cap.is_finite() && is_positive(T(load[e] - cap.value()))) {
      violations.push_back(arc_label(e) + ": capacity exceeded");
    }
  }
  return violations;
}

template <Scalar T>
PathFlow<T> decompose_flow(std::span<const T> arc_flow, const Network<T>& network, NodeId source,
                           NodeId sink) {
  const auto m = network.arcs.size();
  const auto n = network.node_count;
  if (arc_flow.size() != m) throw InputError("arc flow has wrong length");
  if (source >= n || sink >= n || source == sink) throw InputError("invalid terminal pair");

  std::vector<T> excess(n, T(0));
  for (ArcId e = 0; e < m; ++e) {
    const auto& arc = network.arcs[e];
    if (is_negative(arc_flow[e])) throw InputError(arc_label(e) + ": negative flow");
    if (arc.capacity.is_finite() && is_positive(T(arc_flow[e] - arc.capacity.value()))) {
      throw InputError(arc_label(e) + ": flow exceeds capacity");
    }
    excess[arc.head] += arc_flow[e];
    excess[arc.tail] -= arc_flow[e];
  }
  for (NodeId v = 0; v < n; ++v) {
    if (v != source && v != sink && !is_zero(excess[v])) {
      throw InputError("flow conservation violated at node " + std::to_string(v + 1));
    }
  }

  std::vector<std::vector<ArcId>> out(n);
  for (ArcId e = 0; e < m; ++e) out[network.arcs[e].tail].push_back(e);

  std::vector<T> rest(arc_flow.begin(), arc_flow.end());
  PathFlow<T> result;

  // Repeated node-simple DFS over arcs with remaining flow. Each extraction
  // zeroes at least one arc.
  while (true) {
    std::vector<bool> seen(n, false);
    std::vector<ArcId> stack_arcs;
    std::vector<std::size_t> cursor(n, 0);
    NodeId at = source;
    seen[source] = true;
    bool found = false;
    while (true) {
      if (at == sink) {
        found = true;
        break;
      }
      auto& next = cursor[at];
      bool advanced = false;
      while (next < out[at].size()) {
        ArcId e = out[at][next++];
        NodeId head = network.arcs[e].head;
        if (!seen[head] && is_positive(rest[e])) {
          seen[head] = true;
          stack_arcs.push_back(e);
          at = head;
          advanced = true;
          break;
        }
      }
      if (advanced) continue;
      if (stack_arcs.empty()) break;
      at = network.arcs[stack_arcs.back()].tail;
      stack_arcs.pop_back();
    }
    if (!found) break;

    T amount = rest[stack_arcs.front()];
    for (ArcId e : stack_arcs) amount = std::min(amount, rest[e]);
    for (ArcId e : stack_arcs) {
      rest[e] -= amount;
      if (is_zero(rest[e])) rest[e] = T(0);
    }
    result[stack_arcs] += amount;
  }
  return result;
}

template <Scalar To, Scalar From>
Network<To> network_cast(const Network<From>& network) {
  Network<To> out;
  out.node_count = network.node_count;
  out.arcs.reserve(network.arcs.size());
  for (const auto& arc : network.arcs) {
    out.arcs.push_back(Arc<To>{arc.tail, arc.head, extended_cast<To>(arc.capacity),
                               extended_cast<To>(arc.cost), extended_cast<To>(arc.price)});
  }
  for (const auto& k : network.commodities) {
    Commodity<To> c{k.source, k.sink, std::nullopt};
    if (k.demand) c.demand = scalar_cast<To>(*k.demand);
    out.commodities.push_back(c);
  }
  return out;
}

template <Scalar To, Scalar From>
Budgets<To> budgets_cast(const Budgets<From>& budgets) {
  Budgets<To> out;
  out.interdictor = scalar_cast<To>(budgets.interdictor);
  if (budgets.flow_player) out.flow_player = scalar_cast<To>(*budgets.flow_player);
  return out;
}

std::string format_path(const Path& path) {
  std::ostringstream os;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) os << ' ';
    os << path[i] + 1;
  }
  return os.str();
}

#define ROBUSTFLOW_INSTANTIATE(T)                                                                  \
  template std::vector<std::string> validate_instance(const Network<T>&, const Budgets<T>&);       \
  template bool is_valid_path(const Path&, const Network<T>&, const Commodity<T>&);                \
  template bool is_valid_path(const Path&, const Network<T>&);                                     \
  template Extended<T> bottleneck_cost(const Path&, const Network<T>&);                            \
  template Extended<T> path_price(const Path&, const Network<T>&);                                 \
  template std::vector<T> arc_loads(const PathFlow<T>&, const Network<T>&);                        \
  template T flow_value(const PathFlow<T>&);                                                       \
  template std::vector<std::string> flow_violations(const PathFlow<T>&, const Network<T>&);        \
  template PathFlow<T> decompose_flow(std::span<const T>, const Network<T>&, NodeId, NodeId);

ROBUSTFLOW_INSTANTIATE(double)
ROBUSTFLOW_INSTANTIATE(Rational)
#undef ROBUSTFLOW_INSTANTIATE

template Network<double> network_cast(const Network<Rational>&);
template Network<Rational> network_cast(const Network<double>&);
template Network<double> network_cast(const Network<double>&);
template Network<Rational> network_cast(const Network<Rational>&);
template Budgets<double> budgets_cast(const Budgets<Rational>&);
template Budgets<Rational> budgets_cast(const Budgets<Rational>&);
template Budgets<double> budgets_cast(const Budgets<double>&);

}  // namespace robustflow
