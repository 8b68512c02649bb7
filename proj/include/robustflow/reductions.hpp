#pragma once

// Instance generators built from two hardness constructions, plus the
// evaluator for the protection variant, where the flow player raises given
// base costs c0 by c+ and pays gamma_e c+_e per unit of load.
//
// Multicommodity flow -> robust flow: a super source feeds each s_i through
// an arc of cost i and capacity d_i, each t_i drains into a super sink the
// same way, a direct arc (s, t) of cost k + 1 carries one unit, and the
// original arcs cannot be attacked. The flow player earns exactly 1 iff the
// demands can be routed simultaneously.
//
// Arc-disjoint paths -> protection: with M = |A| + 3 the instance has
// robust value 1/M when arc-disjoint s1-t1 and s2-t2 paths exist and 0
// otherwise.

#include <optional>
#include <utility>
#include <vector>

#include "robustflow/network.hpp"

namespace robustflow {

template <Scalar T>
struct MFReduction {
  Network<T> network;
  Budgets<T> budgets;
  std::vector<ArcId> source_arcs;  // a_i = (s, s_i)
  std::vector<ArcId> sink_arcs;    // z_i = (t_i, t)
  ArcId direct_arc = 0;            // e* = (s, t)
};

/// Input: the multicommodity instance as a network whose commodities carry
/// positive demands; arc costs and prices are ignored. Original arcs keep
/// their ids.
template <Scalar T>
MFReduction<T> mf_to_rf(const Network<T>& mf);

/// Protection instance. `network` holds the base costs c0 in `cost` and the
/// prices gamma in `price`.
template <Scalar T>
struct ProtectInstance {
  Network<T> network;
  Budgets<T> budgets;  // B_I and B_F
  ArcId a1 = 0, z1 = 0, a2 = 0, z2 = 0;
  std::vector<ArcId> original_arcs;              // input arc id -> instance arc id
  std::optional<ArcId> source_splice, sink_splice;  // degree normalization arcs
  std::size_t graph_arcs = 0;                    // |A| after normalization
  T big_m{0};                                     // M = |A| + 3
};

/// Input: a digraph whose two commodities are (s1, t1) and (s2, t2);
/// capacities, costs and prices are ignored. If s1 does not have exactly one
/// outgoing arc (t1 one incoming arc), a fresh node and arc are spliced in
/// front of it (behind it) and counted in |A|.
template <Scalar T>
ProtectInstance<T> adp_to_protect(const Network<T>& graph);

/// Arc-disjoint s1-t1 and s2-t2 paths of the input digraph, by exhaustive
/// search over arc-simple paths. Only for tiny graphs.
template <Scalar T>
std::optional<std::pair<Path, Path>> find_disjoint_paths(const Network<T>& graph);

template <Scalar T>
struct ProtectStrategy {
  PathFlow<T> flow;
  std::vector<T> increase;  // c+ per arc
};

/// One unit on a1 P1 z1 and M units on a2 P2 z2, with the whole protection
/// budget spread evenly over the arcs of P1 (input arc ids for P1, P2).
template <Scalar T>
ProtectStrategy<T> build_protect_witness(const ProtectInstance<T>& instance, const Path& p1,
                                         const Path& p2);

/// Checks capacities and sum_e gamma_e c+_e load_e <= B_F (a positive
/// increase on a loaded arc of infinite price always violates it), then
/// returns the greedy robust value under costs c0 + c+. Throws InputError
/// naming the violated constraint.
template <Scalar T>
T evaluate_protect(const ProtectInstance<T>& instance, const PathFlow<T>& flow,
                   const std::vector<T>& increase);

struct ProtectSearchResult {
  Rational best{0};
  std::size_t strategies = 0;
};

/// Best value over a discretized strategy space: flows on at most two
/// terminal paths with amounts from {1/2, 1, M/2, M}, each paired with no
/// increase, the uniform increase B_F / Gamma(x) on loaded arcs, and the
/// whole budget spread over a single path.
ProtectSearchResult search_protect_strategies(const ProtectInstance<Rational>& instance,
                                              std::size_t path_cap = 2000);

}  // namespace robustflow
