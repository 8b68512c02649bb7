#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robustflow/network.hpp"

namespace rftest {

using namespace robustflow;

inline Rational q(std::string_view s) { return parse_rational(s); }
inline Extended<Rational> ext(std::string_view s) { return parse_extended(s); }

struct ArcSpec {
  NodeId tail;
  NodeId head;
  std::string u;
  std::string c;
  std::string gamma = "0";
};

/// 0-based nodes; one commodity per terminal pair.
inline Network<Rational> make_network(std::size_t nodes, const std::vector<ArcSpec>& arcs,
                                      const std::vector<std::pair<NodeId, NodeId>>& terminals = {
                                          {0, 1}}) {
  Network<Rational> net;
  net.node_count = nodes;
  for (const auto& a : arcs) net.arcs.push_back({a.tail, a.head, ext(a.u), ext(a.c), ext(a.gamma)});
  for (const auto& [s, t] : terminals) net.commodities.push_back({s, t, std::nullopt});
  return net;
}

inline Budgets<Rational> make_budgets(std::string_view interdictor,
                                      std::optional<std::string_view> flow_player = {}) {
  Budgets<Rational> b;
  b.interdictor = q(interdictor);
  if (flow_player) b.flow_player = q(*flow_player);
  return b;
}

/// Two parallel s-t arcs, u = (1, 1), c = (1, 2).
inline Network<Rational> parallel_pair(std::string g1 = "0", std::string g2 = "0") {
  return make_network(2, {{0, 1, "1", "1", g1}, {0, 1, "1", "2", g2}});
}

}  // namespace rftest
