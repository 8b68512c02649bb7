#pragma once

// Small dense graph searches shared by the solvers. Networks here are
// graph-sized (tens of nodes), so O(n^2) label-setting loops are used: they
// are exact in rational mode and fully deterministic (ties go to the lowest
// node id, arcs are relaxed in id order).

#include <optional>
#include <utility>
#include <vector>

#include "robustflow/network.hpp"

namespace robustflow::detail {

inline std::vector<std::vector<ArcId>> out_arcs(std::size_t node_count,
                                                const auto& arcs) {
  std::vector<std::vector<ArcId>> out(node_count);
  for (ArcId e = 0; e < arcs.size(); ++e) out[arcs[e].tail].push_back(e);
  return out;
}

/// Dijkstra with nonnegative weights over the arcs accepted by `usable`.
/// Returns the path and its length, or none if the sink is unreachable.
template <Scalar T, class Usable, class Weight>
std::optional<std::pair<Path, T>> shortest_path(const Network<T>& network, NodeId source,
                                                NodeId sink, Usable&& usable, Weight&& weight) {
  const auto n = network.node_count;
  const auto out = out_arcs(n, network.arcs);
  std::vector<std::optional<T>> dist(n);
  std::vector<ArcId> via(n, 0);
  std::vector<bool> done(n, false);
  dist[source] = T(0);
  while (true) {
    std::optional<NodeId> u;
    for (NodeId v = 0; v < n; ++v) {
      if (!done[v] && dist[v] && (!u || *dist[v] < *dist[*u])) u = v;
    }
    if (!u || *u == sink) break;
    done[*u] = true;
    for (ArcId e : out[*u]) {
      if (!usable(e)) continue;
      const NodeId h = network.arcs[e].head;
      if (done[h]) continue;
      T candidate = *dist[*u] + weight(e);
      if (!dist[h] || candidate < *dist[h]) {
        dist[h] = std::move(candidate);
        via[h] = e;
      }
    }
  }
  if (!dist[sink]) return std::nullopt;
  Path path;
  for (NodeId v = sink; v != source; v = network.arcs[via[v]].tail) path.push_back(via[v]);
  return std::pair<Path, T>(Path(path.rbegin(), path.rend()), *dist[sink]);
}

/// Largest achievable bottleneck cost over terminal paths restricted to
/// `usable` arcs, or none if the sink is unreachable.
template <Scalar T, class Usable>
std::optional<Extended<T>> widest_path_value(const Network<T>& network, NodeId source,
                                             NodeId sink, Usable&& usable) {
  const auto n = network.node_count;
  const auto out = out_arcs(n, network.arcs);
  std::vector<std::optional<Extended<T>>> width(n);
  std::vector<bool> done(n, false);
  width[source] = Extended<T>::infinity();
  while (true) {
    std::optional<NodeId> u;
    for (NodeId v = 0; v < n; ++v) {
      if (!done[v] && width[v] && (!u || *width[*u] < *width[v])) u = v;
    }
    if (!u) break;
    done[*u] = true;
    for (ArcId e : out[*u]) {
      if (!usable(e)) continue;
      const NodeId h = network.arcs[e].head;
      auto candidate = min(*width[*u], network.arcs[e].cost);
      if (!width[h] || *width[h] < candidate) width[h] = candidate;
    }
  }
  return width[sink];
}

}  // namespace robustflow::detail
