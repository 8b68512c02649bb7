#pragma once

// Robust maximum flow against a flow-stealing interdictor.
//
// For a breakpoint arc f the flow player's problem relaxes to the packing LP
//
//   max  sum_P c̄'_P x_P - B'     s.t.  sum_{P ∋ e} x_P <= u_e,  x >= 0
//
// with c'_e = min(c_e / c_f, 1), c̄'_P = min_{e in P} c'_e and B' = B_I / c_f.
// Writing lambda = 1 / c_f, the optimal value phi(lambda) is piecewise linear
// with breakpoints at 1 / c_e (not necessarily concave), and the robust
// optimum is the best value over those breakpoints (or zero when every flow
// can be stolen).
// The LP has one column per path; it is solved by column generation whose
// pricing step runs one shortest-path computation per distinct scaled cost.

#include <optional>
#include <span>
#include <vector>

#include "robustflow/lp.hpp"
#include "robustflow/network.hpp"

namespace robustflow {

/// enumerate solves every candidate breakpoint; newton solves the ends and
/// then only candidates whose value bound can still beat the incumbent.
enum class SearchMode { enumerate, newton };

const char* to_string(SearchMode mode);

/// Scaled costs for one breakpoint. The lambda = 0 endpoint has no arc: all
/// finite-cost arcs scale to 0 and infinite-cost arcs to 1.
template <Scalar T>
struct ScaledCosts {
  std::optional<ArcId> breakpoint_arc;
  T lambda{0};
  T scaled_budget{0};                // B'
  std::vector<T> arc_coefficients;  // c'_e in [0, 1]
};

/// Throws InputError("invalid breakpoint arc") unless 0 < c_f < inf.
template <Scalar T>
ScaledCosts<T> build_scaled_costs(const Network<T>& network, ArcId f, const T& interdictor_budget);

template <Scalar T>
ScaledCosts<T> build_scaled_costs_at_zero(const Network<T>& network);

/// c̄'_P
template <Scalar T>
T scaled_path_coefficient(const Path& path, const ScaledCosts<T>& scaled);

/// Dual separation for the breakpoint LP. For every distinct positive c'
/// level gamma, finds a shortest path under weights y_e restricted to arcs
/// with c'_e >= gamma, and returns the path with the largest violation
/// c̄'_P - y(P), or none if y is dual feasible for every path.
template <Scalar T>
std::optional<Path> price_lp_flow(std::span<const T> arc_duals, const ScaledCosts<T>& scaled,
                                  const Network<T>& network, const Commodity<T>& commodity);

/// Full pricing step used by the solver: every commodity, and with a flow
/// budget row the weights become y_e + mu * gamma_e (arcs of infinite price
/// excluded).
template <Scalar T>
std::optional<Path> price_lp_flow(std::span<const T> arc_duals, const T& budget_dual,
                                  bool with_flow_budget, const ScaledCosts<T>& scaled,
                                  const Network<T>& network);

template <Scalar T>
struct BreakpointSolution {
  PathFlow<T> flow;
  T objective{0};  // LP value including the -B' offset
  std::size_t pricing_rounds = 0;
};

/// Solves the breakpoint LP by column generation. Throws InputError if the
/// LP is unbounded (a terminal path of unbounded capacity that pays off).
template <Scalar T>
BreakpointSolution<T> solve_breakpoint_lp(const Network<T>& network, const Budgets<T>& budgets,
                                          const ScaledCosts<T>& scaled, bool with_flow_budget);

template <Scalar T>
BreakpointSolution<T> solve_lp_flow_fixed_arc(const Network<T>& network, const Budgets<T>& budgets,
                                              ArcId f);

/// max over terminal paths of the bottleneck cost (widest path). Throws
/// InputError if the sink is unreachable.
template <Scalar T>
Extended<T> compute_c_bot(const Network<T>& network, const Commodity<T>& commodity);

template <Scalar T>
struct BreakpointRecord {
  std::optional<ArcId> arc;  // none for the lambda = 0 endpoint
  Extended<T> cost;          // c_f
  T lambda{0};
  T lp_value{0};
  PathFlow<T> flow;          // kept only when requested
};

template <Scalar T>
struct RFSolution {
  PathFlow<T> flow;
  T robust_value{0};  // greedy re-evaluation of `flow`
  T lp_objective{0};  // best breakpoint objective, clamped at zero
  std::optional<ArcId> breakpoint_arc;
  T lambda{0};
  bool fully_interdictable = false;
  std::vector<BreakpointRecord<T>> breakpoints;  // evaluated ones, by increasing lambda
  std::size_t lp_solves = 0;
};

struct RFOptions {
  SearchMode mode = SearchMode::enumerate;
  unsigned threads = 1;
  bool keep_breakpoint_flows = false;
};

/// Candidate breakpoints: one per distinct positive finite cost c_e <= c_bot
/// (lowest arc id as representative), plus lambda = 0 when c_bot = inf.
/// Sorted by increasing lambda.
template <Scalar T>
std::vector<BreakpointRecord<T>> candidate_breakpoints(const Network<T>& network,
                                                       bool with_flow_budget);

/// Plain robust flow: every commodity, no flow-player budget.
template <Scalar T>
RFSolution<T> solve_rf(const Network<T>& network, const Budgets<T>& budgets,
                       const RFOptions& options = {});

/// Adds the flow-player budget row sum_P (sum_{e in P} gamma_e) x_P <= B_F.
template <Scalar T>
RFSolution<T> solve_rf_budgeted(const Network<T>& network, const Budgets<T>& budgets,
                                const RFOptions& options = {});

/// Path set is the union of all commodities' terminal paths.
template <Scalar T>
RFSolution<T> solve_rf_multicommodity(const Network<T>& network, const Budgets<T>& budgets,
                                      const RFOptions& options = {});

/// True iff the slopes between consecutive records (sorted by lambda) never
/// increase by more than `tolerance`.
template <Scalar T>
bool breakpoint_values_concave(const std::vector<BreakpointRecord<T>>& records, const T& tolerance);

}  // namespace robustflow
