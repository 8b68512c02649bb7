#include "robustflow/flow_solver.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <thread>

#include "graph_search.hpp"
#include "robustflow/error.hpp"
#include "robustflow/interdiction.hpp"

namespace robustflow {
namespace {

template <Scalar T>
void require_valid(const Network<T>& network, const Budgets<T>& budgets) {
  const auto violations = validate_instance(network, budgets);
  if (!violations.empty()) throw InputError("invalid instance: " + violations.front());
}

// Arcs a path may use. With a flow budget, an arc of infinite protection price
// cannot carry flow.
template <Scalar T>
bool arc_usable(const Network<T>& network, ArcId e, bool with_flow_budget) {
  return !(with_flow_budget && network.arcs[e].price.is_infinite());
}

template <Scalar T>
Column<T> path_column(const Path& path, const ScaledCosts<T>& scaled, const Network<T>& network,
                      bool with_flow_budget) {
  Column<T> col;
  col.label = path;
  col.objective = scaled_path_coefficient(path, scaled);
  for (ArcId e : path) col.entries.emplace_back(e, T(1));
  if (with_flow_budget) {
    col.entries.emplace_back(network.arcs.size(), path_price(path, network).value());
  }
  return col;
}

}  // namespace

const char* to_string(SearchMode mode) {
  return mode == SearchMode::newton ? "newton" : "enumerate";
}

template <Scalar T>
ScaledCosts<T> build_scaled_costs(const Network<T>& network, ArcId f, const T& interdictor_budget) {
  if (f >= network.arcs.size()) throw InputError("invalid breakpoint arc: unknown arc");
  const auto& cf = network.arcs[f].cost;
  if (cf.is_infinite() || cf.value() <= 0) throw InputError("invalid breakpoint arc");

  ScaledCosts<T> out;
  out.breakpoint_arc = f;
  out.lambda = T(1) / cf.value();
  out.scaled_budget = interdictor_budget / cf.value();
  out.arc_coefficients.reserve(network.arcs.size());
  for (const auto& arc : network.arcs) {
    if (arc.cost.is_infinite()) {
      out.arc_coefficients.push_back(T(1));
    } else {
      T ratio = arc.cost.value() / cf.value();
      out.arc_coefficients.push_back(ratio < 1 ? ratio : T(1));
    }
  }
  return out;
}

template <Scalar T>
ScaledCosts<T> build_scaled_costs_at_zero(const Network<T>& network) {
  ScaledCosts<T> out;
  out.arc_coefficients.reserve(network.arcs.size());
  for (const auto& arc : network.arcs) {
    out.arc_coefficients.push_back(arc.cost.is_infinite() ? T(1) : T(0));
  }
  return out;
}

template <Scalar T>
T scaled_path_coefficient(const Path& path, const ScaledCosts<T>& scaled) {
  T best(1);
  for (ArcId e : path) best = std::min(best, scaled.arc_coefficients.at(e));
  return best;
}

namespace {

template <Scalar T, class Weight, class Usable>
void price_commodity(const Commodity<T>& commodity, const ScaledCosts<T>& scaled,
                     const Network<T>& network, const std::vector<T>& levels, Weight&& weight,
                     Usable&& usable, std::optional<Path>& best, T& best_violation) {
  for (const T& level : levels) {
    auto found = detail::shortest_path(
        network, commodity.source, commodity.sink,
        [&](ArcId e) { return usable(e) && scaled.arc_coefficients[e] >= level; }, weight);
    if (!found) continue;
    // pi(level) < level certifies a violated dual row; measure it with the
    // path's own coefficient, which is at least `level`.
    const T violation = scaled_path_coefficient(found->first, scaled) - found->second;
    if (is_positive(violation) && (!best || violation > best_violation)) {
      best = std::move(found->first);
      best_violation = violation;
    }
  }
}

template <Scalar T, class Usable>
std::vector<T> coefficient_levels(const ScaledCosts<T>& scaled, Usable&& usable) {
  std::vector<T> levels;
  for (ArcId e = 0; e < scaled.arc_coefficients.size(); ++e) {
    if (usable(e) && scaled.arc_coefficients[e] > 0) levels.push_back(scaled.arc_coefficients[e]);
  }
  std::sort(levels.begin(), levels.end(), [](const T& a, const T& b) { return b < a; });
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

}  // namespace

template <Scalar T>
std::optional<Path> price_lp_flow(std::span<const T> arc_duals, const ScaledCosts<T>& scaled,
                                  const Network<T>& network, const Commodity<T>& commodity) {
  auto all = [](ArcId) { return true; };
  const auto levels = coefficient_levels(scaled, all);
  std::optional<Path> best;
  T best_violation(0);
  price_commodity(commodity, scaled, network, levels, [&](ArcId e) { return arc_duals[e]; }, all,
                  best, best_violation);
  return best;
}

template <Scalar T>
std::optional<Path> price_lp_flow(std::span<const T> arc_duals, const T& budget_dual,
                                  bool with_flow_budget, const ScaledCosts<T>& scaled,
                                  const Network<T>& network) {
  auto usable = [&](ArcId e) { return arc_usable(network, e, with_flow_budget); };
  std::vector<T> weights(arc_duals.begin(), arc_duals.end());
  if (with_flow_budget && budget_dual != 0) {
    for (ArcId e = 0; e < weights.size(); ++e) {
      if (usable(e)) weights[e] += budget_dual * network.arcs[e].price.value();
    }
  }
  const auto levels = coefficient_levels(scaled, usable);
  std::optional<Path> best;
  T best_violation(0);
  for (const auto& commodity : network.commodities) {
    price_commodity(commodity, scaled, network, levels, [&](ArcId e) { return weights[e]; }, usable,
                    best, best_violation);
  }
  return best;
}

template <Scalar T>
BreakpointSolution<T> solve_breakpoint_lp(const Network<T>& network, const Budgets<T>& budgets,
                                          const ScaledCosts<T>& scaled, bool with_flow_budget) {
  const auto m = network.arcs.size();
  std::vector<Extended<T>> bounds;
  bounds.reserve(m + 1);
  for (const auto& arc : network.arcs) bounds.push_back(arc.capacity);
  if (with_flow_budget) {
    if (!budgets.flow_player) throw InputError("flow player budget required");
    bounds.emplace_back(*budgets.flow_player);
  }

  Pricer<T> pricer = [&](const std::vector<T>& duals) -> std::optional<Column<T>> {
    const T mu = with_flow_budget ? duals[m] : T(0);
    auto path = price_lp_flow(std::span<const T>(duals.data(), m), mu, with_flow_budget, scaled,
                              network);
    if (!path) return std::nullopt;
    return path_column(*path, scaled, network, with_flow_budget);
  };

  const auto lp = column_generation(pricer, {}, std::move(bounds));
  if (lp.status == LPStatus::unbounded) {
    throw InputError("robust flow LP is unbounded: a paying terminal path has unbounded capacity");
  }

  BreakpointSolution<T> out;
  for (std::size_t j = 0; j < lp.columns.size(); ++j) {
    if (is_positive(lp.primal[j])) out.flow[lp.columns[j].label] += lp.primal[j];
  }
  out.objective = lp.objective - scaled.scaled_budget;
  out.pricing_rounds = lp.pricing_rounds;
  return out;
}

template <Scalar T>
BreakpointSolution<T> solve_lp_flow_fixed_arc(const Network<T>& network, const Budgets<T>& budgets,
                                              ArcId f) {
  require_valid(network, budgets);
  return solve_breakpoint_lp(network, budgets, build_scaled_costs(network, f, budgets.interdictor),
                             false);
}

template <Scalar T>
Extended<T> compute_c_bot(const Network<T>& network, const Commodity<T>& commodity) {
  auto value = detail::widest_path_value(network, commodity.source, commodity.sink,
                                         [](ArcId) { return true; });
  if (!value) throw InputError("source and sink are disconnected");
  return *value;
}

template <Scalar T>
std::vector<BreakpointRecord<T>> candidate_breakpoints(const Network<T>& network,
                                                       bool with_flow_budget) {
  std::optional<Extended<T>> c_bot;
  for (const auto& k : network.commodities) {
    auto w = detail::widest_path_value(network, k.source, k.sink, [&](ArcId e) {
      return arc_usable(network, e, with_flow_budget);
    });
    if (w && (!c_bot || *c_bot < *w)) c_bot = w;
  }
  if (!c_bot) return {};

  // cost value -> lowest arc id carrying it
  std::map<T, ArcId> by_cost;
  for (ArcId e = 0; e < network.arcs.size(); ++e) {
    const auto& c = network.arcs[e].cost;
    if (c.is_infinite() || c.value() <= 0 || *c_bot < c) continue;
    by_cost.try_emplace(c.value(), e);
  }

  std::vector<BreakpointRecord<T>> out;
  if (c_bot->is_infinite()) {
    out.push_back(BreakpointRecord<T>{std::nullopt, Extended<T>::infinity(), T(0), T(0), {}});
  }
  for (auto it = by_cost.rbegin(); it != by_cost.rend(); ++it) {
    out.push_back(
        BreakpointRecord<T>{it->second, Extended<T>(it->first), T(T(1) / it->first), T(0), {}});
  }
  return out;
}

template <Scalar T>
bool breakpoint_values_concave(const std::vector<BreakpointRecord<T>>& records,
                               const T& tolerance) {
  auto sorted = records;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  std::optional<T> previous;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const T width = sorted[i + 1].lambda - sorted[i].lambda;
    if (!(width > 0)) continue;
    T slope = (sorted[i + 1].lp_value - sorted[i].lp_value) / width;
    if (previous && slope > *previous + tolerance) return false;
    previous = std::move(slope);
  }
  return true;
}

namespace {

template <Scalar T>
class BreakpointEvaluator {
 public:
  BreakpointEvaluator(const Network<T>& network, const Budgets<T>& budgets, bool with_flow_budget,
                      std::vector<BreakpointRecord<T>> candidates)
      : network_(network),
        budgets_(budgets),
        with_flow_budget_(with_flow_budget),
        records_(std::move(candidates)),
        evaluated_(records_.size(), 0) {}

  std::size_t size() const { return records_.size(); }
  const T& lambda(std::size_t i) const { return records_[i].lambda; }

  const BreakpointRecord<T>& at(std::size_t i) {
    if (!evaluated_[i]) compute(i);
    return records_[i];
  }

  void evaluate_all(unsigned threads) {
    if (threads <= 1 || records_.size() <= 1) {
      for (std::size_t i = 0; i < records_.size(); ++i) at(i);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (auto i = next++; i < records_.size(); i = next++) compute(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<BreakpointRecord<T>> evaluated_records() const {
    std::vector<BreakpointRecord<T>> out;
    for (std::size_t i = 0; i < records_.size(); ++i) {
      if (evaluated_[i]) out.push_back(records_[i]);
    }
    return out;
  }

  std::size_t solves() const { return std::count(evaluated_.begin(), evaluated_.end(), 1); }

 private:
  void compute(std::size_t i) {
    auto& rec = records_[i];
    const auto scaled = rec.arc ? build_scaled_costs(network_, *rec.arc, budgets_.interdictor)
                                : build_scaled_costs_at_zero(network_);
    auto sol = solve_breakpoint_lp(network_, budgets_, scaled, with_flow_budget_);
    rec.lp_value = std::move(sol.objective);
    rec.flow = std::move(sol.flow);
    evaluated_[i] = 1;
  }

  const Network<T>& network_;
  const Budgets<T>& budgets_;
  bool with_flow_budget_;
  std::vector<BreakpointRecord<T>> records_;
  std::vector<char> evaluated_;  // not vector<bool>: workers write concurrently
};

// Pruned search over the breakpoints. The values need not be concave in
// lambda, so nothing is discarded on slope alone. Instead, with
// g(lambda) = phi(lambda) + lambda B_I, both g and g / lambda are monotone
// (non-decreasing and non-increasing) because every path coefficient
// min(lambda c̄_P, 1) is. Between evaluated neighbours i < k < j this gives
//
//   phi(lambda_k) <= min(g_j, g_i lambda_k / lambda_i) - lambda_k B_I,
//
// and the candidate with the largest bound is solved next until no bound
// beats the incumbent.
template <Scalar T>
void newton_search(BreakpointEvaluator<T>& eval, const T& budget) {
  const std::size_t n = eval.size();
  std::vector<char> done(n, 0);
  const auto visit = [&](std::size_t k) {
    eval.at(k);
    done[k] = 1;
  };
  const auto g = [&](std::size_t k) -> T { return eval.at(k).lp_value + eval.lambda(k) * budget; };
  visit(0);
  visit(n - 1);
  while (true) {
    T best = eval.at(0).lp_value;
    for (std::size_t k = 1; k < n; ++k) {
      if (done[k] && eval.at(k).lp_value > best) best = eval.at(k).lp_value;
    }
    std::vector<std::size_t> right(n, n - 1);
    for (std::size_t k = n - 1; k-- > 0;) right[k] = done[k + 1] ? k + 1 : right[k + 1];

    std::optional<std::size_t> pick;
    T pick_bound(0);
    std::size_t left = 0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (done[k]) {
        left = k;
        continue;
      }
      const T& lambda = eval.lambda(k);
      T cap = g(right[k]);
      if (is_positive(eval.lambda(left))) {
        cap = std::min(cap, T(g(left) * lambda / eval.lambda(left)));
      }
      T bound = cap - lambda * budget;
      if (is_positive(T(bound - best)) && (!pick || bound > pick_bound)) {
        pick = k;
        pick_bound = std::move(bound);
      }
    }
    if (!pick) return;
    visit(*pick);
  }
}

template <Scalar T>
RFSolution<T> solve_robust_flow(const Network<T>& network, const Budgets<T>& budgets,
                                const RFOptions& options, bool with_flow_budget) {
  require_valid(network, budgets);
  if (with_flow_budget && !budgets.flow_player) throw InputError("flow player budget required");

  RFSolution<T> out;
  BreakpointEvaluator<T> eval(network, budgets, with_flow_budget,
                              candidate_breakpoints(network, with_flow_budget));
  if (eval.size() == 0) {
    out.fully_interdictable = true;
    return out;
  }
  if (options.mode == SearchMode::enumerate) {
    eval.evaluate_all(options.threads);
  } else {
    newton_search(eval, budgets.interdictor);
  }

  out.breakpoints = eval.evaluated_records();
  out.lp_solves = eval.solves();
  const BreakpointRecord<T>* best = nullptr;
  for (const auto& rec : out.breakpoints) {
    if (!best || rec.lp_value > best->lp_value) best = &rec;
  }

  if (!is_positive(best->lp_value)) {
    out.fully_interdictable = true;
  } else {
    out.flow = best->flow;
    out.lp_objective = best->lp_value;
    out.breakpoint_arc = best->arc;
    out.lambda = best->lambda;
    out.robust_value = evaluate_robust_value(out.flow, network, budgets.interdictor);
  }
  if (!options.keep_breakpoint_flows) {
    for (auto& rec : out.breakpoints) rec.flow.clear();
  }
  return out;
}

}  // namespace

template <Scalar T>
RFSolution<T> solve_rf(const Network<T>& network, const Budgets<T>& budgets,
                       const RFOptions& options) {
  return solve_robust_flow(network, budgets, options, false);
}

template <Scalar T>
RFSolution<T> solve_rf_budgeted(const Network<T>& network, const Budgets<T>& budgets,
                                const RFOptions& options) {
  return solve_robust_flow(network, budgets, options, true);
}

template <Scalar T>
RFSolution<T> solve_rf_multicommodity(const Network<T>& network, const Budgets<T>& budgets,
                                      const RFOptions& options) {
  if (network.commodities.empty()) throw InputError("at least one terminal pair required");
  return solve_robust_flow(network, budgets, options, budgets.flow_player.has_value());
}

#define ROBUSTFLOW_INSTANTIATE(T)                                                                  \
  template ScaledCosts<T> build_scaled_costs(const Network<T>&, ArcId, const T&);                  \
  template ScaledCosts<T> build_scaled_costs_at_zero(const Network<T>&);                           \
  template T scaled_path_coefficient(const Path&, const ScaledCosts<T>&);                          \
  template std::optional<Path> price_lp_flow(std::span<const T>, const ScaledCosts<T>&,            \
                                             const Network<T>&, const Commodity<T>&);              \
  template std::optional<Path> price_lp_flow(std::span<const T>, const T&, bool,                   \
                                             const ScaledCosts<T>&, const Network<T>&);            \
  template BreakpointSolution<T> solve_breakpoint_lp(const Network<T>&, const Budgets<T>&,         \
                                                     const ScaledCosts<T>&, bool);                 \
  template BreakpointSolution<T> solve_lp_flow_fixed_arc(const Network<T>&, const Budgets<T>&,     \
                                                         ArcId);                                   \
  template Extended<T> compute_c_bot(const Network<T>&, const Commodity<T>&);                      \
  template std::vector<BreakpointRecord<T>> candidate_breakpoints(const Network<T>&, bool);        \
  template bool breakpoint_values_concave(const std::vector<BreakpointRecord<T>>&, const T&);      \
  template RFSolution<T> solve_rf(const Network<T>&, const Budgets<T>&, const RFOptions&);         \
  template RFSolution<T> solve_rf_budgeted(const Network<T>&, const Budgets<T>&, const RFOptions&);\
  template RFSolution<T> solve_rf_multicommodity(const Network<T>&, const Budgets<T>&,             \
                                                 const RFOptions&);

ROBUSTFLOW_INSTANTIATE(double)
ROBUSTFLOW_INSTANTIATE(Rational)
#undef ROBUSTFLOW_INSTANTIATE

}  // namespace robustflow
