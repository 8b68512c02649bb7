#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "robustflow/design_solver.hpp"
#include "robustflow/error.hpp"
#include "robustflow/oracle.hpp"
#include "support.hpp"

using namespace rftest;

namespace {

RandomInstance draw(std::uint64_t seed) {
  RandomInstanceOptions options;
  options.max_nodes = 7;
  options.max_arcs = 12;
  options.integral_capacities = true;
  options.protection_prices = true;
  options.flow_budget = true;
  options.path_cap = 400;
  return random_instance(seed, options);
}

}  // namespace

TEST_CASE("single arc") {
  const auto net = make_network(2, {{0, 1, "2", "7", "1"}});
  const auto s = solve_design(net, make_budgets("1", "4"));
  CHECK(s.flow == PathFlow<Rational>{{{0}, 2}});
  REQUIRE(s.costs.size() == 1);
  CHECK(s.costs[0] == ext("2"));
  CHECK(s.profit == q("3/2"));
  CHECK(s.gamma_of_flow == 2);
  CHECK(evaluate_design(s.flow, s.costs, net, make_budgets("1", "4")) == q("3/2"));
}

TEST_CASE("free interdictor budget gives max flow") {
  const auto net = make_network(3, {{0, 1, "2", "1", "1"}, {0, 2, "3", "1", "2"}, {2, 1, "1", "1", "0"}});
  CHECK(solve_design(net, make_budgets("0", "1")).profit == 3);
}

TEST_CASE("expensive protection routes nothing") {
  const auto net = make_network(2, {{0, 1, "2", "1", "1"}});
  const auto s = solve_design(net, make_budgets("10", "1"));
  CHECK(s.profit == 0);
  CHECK(s.flow.empty());
}

TEST_CASE("unpriced arcs are free to protect") {
  const auto net = make_network(2, {{0, 1, "2", "1", "0"}, {0, 1, "1", "1", "inf"}});
  const auto s = solve_design(net, make_budgets("5", "1"));
  CHECK(s.profit == 2);
  CHECK(s.costs[0].is_infinite());
}

TEST_CASE("design_profit") {
  const auto net = parallel_pair("1", "2");
  const PathFlow<Rational> flow{{{0}, 1}, {{1}, 1}};
  CHECK(gamma_of_flow(flow, net) == 3);
  CHECK(design_profit(flow, net, make_budgets("1", "6")) == q("3/2"));
  CHECK(design_profit(PathFlow<Rational>{}, net, make_budgets("1")) == 0);
  CHECK_THROWS_AS(design_profit(flow, net, make_budgets("1")), InputError);
  CHECK_THROWS_AS(design_profit(flow, net, make_budgets("1", "0")), InputError);
  CHECK_THROWS_AS(gamma_of_flow(flow, parallel_pair("inf", "1")), InputError);
}

TEST_CASE("no protection budget") {
  CHECK_THROWS_WITH_AS(solve_design(parallel_pair("1", "1"), make_budgets("1")),
                       doctest::Contains("no protection budget"), InputError);
}

TEST_CASE("design needs one terminal pair") {
  const auto net = make_network(3, {{0, 1, "1", "1", "1"}, {2, 1, "1", "1", "1"}}, {{0, 1}, {2, 1}});
  CHECK_THROWS_AS(solve_design(net, make_budgets("1", "1")), InputError);
}

TEST_CASE("unbounded design") {
  const auto net = make_network(2, {{0, 1, "inf", "1", "0"}});
  CHECK_THROWS_AS(solve_design(net, make_budgets("1", "1")), InputError);
}

TEST_CASE("circulation examples") {
  SUBCASE("shape and arc costs") {
    const auto net = make_network(2, {{0, 1, "1", "1", "1"}});
    const auto c = build_circulation_network(net, make_budgets("3", "5"));
    REQUIRE(c.arcs.size() == 2);
    CHECK(c.arcs[c.return_arc].cost == -1);
    CHECK_FALSE(c.arcs[c.return_arc].original.has_value());
    const auto forward = c.return_arc == 0 ? 1 : 0;
    CHECK(c.arcs[forward].cost == q("3/5"));
  }
  SUBCASE("one cheap arc") {
    const auto net = make_network(2, {{0, 1, "2", "1", "1"}});
    const auto c = build_circulation_network(net, make_budgets("1", "4"));
    const auto f = min_cost_circulation(c);
    CHECK(f[c.return_arc] == 2);
    CHECK(circulation_cost(c, f) == q("-3/2"));
    CHECK_FALSE(has_negative_residual_cycle(c, f));
    CHECK(has_negative_residual_cycle(c, std::vector<Rational>(c.arcs.size(), Rational(0))));
  }
  SUBCASE("two profitable arcs") {
    const auto net = make_network(2, {{0, 1, "1", "1", "1/5"}, {0, 1, "1", "1", "9/10"}});
    const auto c = build_circulation_network(net, make_budgets("1", "1"));
    const auto f = min_cost_circulation(c);
    CHECK(f[c.return_arc] == 2);
    CHECK(circulation_cost(c, f) == q("-9/10"));
  }
  SUBCASE("infinite price is left out") {
    const auto net = make_network(2, {{0, 1, "1", "1", "inf"}, {0, 1, "1", "1", "0"}});
    CHECK(build_circulation_network(net, make_budgets("1", "1")).arcs.size() == 2);
  }
}

TEST_CASE("uniform costs") {
  const auto net = make_network(3, {{0, 2, "1", "1", "1"}, {2, 1, "1", "1", "0"}, {0, 1, "1", "1", "2"}});
  const PathFlow<Rational> flow{{{0, 1}, 1}};
  const auto c = uniform_costs(flow, net, make_budgets("1", "3"));
  CHECK(c[0] == ext("3"));
  CHECK(c[1].is_infinite());
  CHECK(c[2] == ext("0"));
}

TEST_CASE("evaluate_design checks the protection budget") {
  const auto net = make_network(2, {{0, 1, "2", "1", "1"}});
  const PathFlow<Rational> flow{{{0}, 2}};
  CHECK_THROWS_AS(evaluate_design(flow, {ext("3")}, net, make_budgets("1", "4")), InputError);
  CHECK(evaluate_design(flow, {ext("1")}, net, make_budgets("1", "4")) == 1);
  CHECK_THROWS_AS(evaluate_design(PathFlow<Rational>{{{0}, 3}}, {ext("0")}, net, make_budgets("1", "4")),
                  InputError);
}

TEST_CASE("uniformity check") {
  const auto net = make_network(
      4, {{0, 2, "2", "1", "1"}, {2, 1, "2", "1", "1"}, {0, 3, "1", "1", "1"}, {3, 1, "1", "1", "2"}});
  const auto budgets = make_budgets("1", "6");
  const auto s = solve_design(net, budgets);

  const auto report = verify_uniform_optimality(s, net, budgets, 60);
  CHECK(report.trials > 0);
  CHECK(report.trials <= 60);
  CHECK(report.improvements == 0);
  CHECK(report.baseline == s.profit);

  auto halved = s;
  for (auto& c : halved.costs) {
    if (c.is_finite()) c = Extended<Rational>(Rational(c.value() / 2));
  }
  CHECK(verify_uniform_optimality(halved, net, budgets, 60).improvements > 0);

  DesignSolution<Rational> empty;
  empty.costs = uniform_costs(empty.flow, net, budgets);
  CHECK(verify_uniform_optimality(empty, net, budgets, 60).improvements > 0);
}

TEST_CASE("random instances") {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    CAPTURE(seed);
    const auto inst = draw(seed);
    const auto s = solve_design(inst.network, inst.budgets);

    CHECK(s.profit == brute_force_design(inst.network, inst.budgets, inst.universe).value);
    CHECK(s.profit == design_profit(s.flow, inst.network, inst.budgets));
    for (const auto& [path, x] : s.flow) CHECK(x.get_den() == 1);

    const auto c = build_circulation_network(inst.network, inst.budgets);
    const auto f = min_cost_circulation(c);
    CHECK(-circulation_cost(c, f) == s.profit);
    CHECK_FALSE(has_negative_residual_cycle(c, f));

    // The uniform costs spend the protection budget exactly.
    if (s.gamma_of_flow > 0) {
      const auto loads = arc_loads(s.flow, inst.network);
      Rational spent = 0;
      for (ArcId e = 0; e < loads.size(); ++e) {
        const auto& gamma = inst.network.arcs[e].price;
        if (loads[e] > 0 && gamma.is_finite() && gamma.value() > 0) {
          spent += gamma.value() * s.costs[e].value() * loads[e];
        }
      }
      CHECK(spent == *inst.budgets.flow_player);
    }
    CHECK(evaluate_design(s.flow, s.costs, inst.network, inst.budgets) == s.profit);

    const auto approx =
        solve_design(network_cast<double>(inst.network), budgets_cast<double>(inst.budgets));
    CHECK(std::abs(approx.profit - s.profit.get_d()) <= 1e-6);
  }
}

TEST_CASE("no nearby strategy beats the uniform one") {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    CAPTURE(seed);
    const auto inst = draw(seed);
    const auto s = solve_design(inst.network, inst.budgets);
    CHECK(verify_uniform_optimality(s, inst.network, inst.budgets, 40, seed).improvements == 0);
  }
}
