#pragma once

// Networks, paths, and path flows shared by every solver.
//
// Nodes and arcs are dense 0-based indices. Arc ids double as tie-breakers
// wherever a deterministic choice is required, and parallel arcs stay
// distinct because every per-arc quantity is keyed by arc id, never by the
// (tail, head) pair.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robustflow/numeric.hpp"

namespace robustflow {

using NodeId = std::size_t;
using ArcId = std::size_t;

template <Scalar T>
struct Arc {
  NodeId tail = 0;
  NodeId head = 0;
  Extended<T> capacity;
  Extended<T> cost;   // interdiction cost per unit stolen on this arc
  Extended<T> price;  // protection price per unit of flow and unit of cost
};

template <Scalar T>
struct Commodity {
  NodeId source = 0;
  NodeId sink = 0;
  std::optional<T> demand;
};

template <Scalar T>
struct Network {
  std::size_t node_count = 0;
  std::vector<Arc<T>> arcs;
  std::vector<Commodity<T>> commodities;

  std::size_t arc_count() const { return arcs.size(); }
};

template <Scalar T>
struct Budgets {
  T interdictor{0};
  std::optional<T> flow_player;
};

/// An ordered arc sequence. Nodes may repeat, arcs may not.
using Path = std::vector<ArcId>;

/// Flow per path. std::map keeps paths in lexicographic arc-id order, which
/// is the deterministic processing order used throughout.
template <Scalar T>
using PathFlow = std::map<Path, T>;

/// Every structural violation of the network and budget invariants; empty
/// means the instance is well formed.
template <Scalar T>
std::vector<std::string> validate_instance(const Network<T>& network, const Budgets<T>& budgets);

/// True iff `path` is a nonempty arc-simple walk from the commodity's source
/// to its sink.
template <Scalar T>
bool is_valid_path(const Path& path, const Network<T>& network, const Commodity<T>& commodity);

/// True iff `path` is valid for at least one commodity of the network.
template <Scalar T>
bool is_valid_path(const Path& path, const Network<T>& network);

/// min over the path's arcs of the interdiction cost. Throws
/// std::out_of_range for an unknown arc id.
template <Scalar T>
Extended<T> bottleneck_cost(const Path& path, const Network<T>& network);

/// Sum of the path's arc protection prices.
template <Scalar T>
Extended<T> path_price(const Path& path, const Network<T>& network);

/// Per-arc load sum_{P ∋ e} x_P.
template <Scalar T>
std::vector<T> arc_loads(const PathFlow<T>& flow, const Network<T>& network);

template <Scalar T>
T flow_value(const PathFlow<T>& flow);

/// Capacity, sign, and path-shape violations of a path flow.
template <Scalar T>
std::vector<std::string> flow_violations(const PathFlow<T>& flow, const Network<T>& network);

/// Splits an arc flow into s-t paths. Requires conservation at every node
/// other than s and t and 0 <= flow <= capacity on every arc (InputError
/// otherwise). The result carries the full net s-t value in at most |A|
/// paths, loads no arc beyond its input flow, and is integral when the
/// input is. Flow circulating on cycles that no s-t path absorbs is dropped,
/// so loads match the input exactly whenever the input is acyclic.
template <Scalar T>
PathFlow<T> decompose_flow(std::span<const T> arc_flow, const Network<T>& network, NodeId source,
                           NodeId sink);

template <Scalar To, Scalar From>
Network<To> network_cast(const Network<From>& network);

template <Scalar To, Scalar From>
Budgets<To> budgets_cast(const Budgets<From>& budgets);

template <Scalar To, Scalar From>
PathFlow<To> path_flow_cast(const PathFlow<From>& flow) {
  PathFlow<To> out;
  for (const auto& [path, value] : flow) out.emplace(path, scalar_cast<To>(value));
  return out;
}

std::string format_path(const Path& path);

}  // namespace robustflow
