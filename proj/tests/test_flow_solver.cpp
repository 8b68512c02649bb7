#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "robustflow/error.hpp"
#include "robustflow/flow_solver.hpp"
#include "robustflow/interdiction.hpp"
#include "robustflow/oracle.hpp"
#include "support.hpp"

using namespace rftest;

namespace {

RandomInstance draw(std::uint64_t seed, std::size_t commodities = 1, bool budgeted = false) {
  RandomInstanceOptions options;
  options.max_nodes = 7;
  options.max_arcs = 12;
  options.commodities = commodities;
  options.protection_prices = budgeted;
  options.flow_budget = budgeted;
  options.path_cap = 400;
  return random_instance(seed, options);
}

Rational max_flow(const Network<Rational>& net) {
  auto open = net;
  for (auto& a : open.arcs) a.cost = Extended<Rational>::infinity();
  return brute_force_rf(open, make_budgets("0"), enumerate_paths(open)).value;
}

}  // namespace

TEST_CASE("scaled costs") {
  const auto net = parallel_pair();
  const auto at1 = build_scaled_costs(net, 0, Rational(1));
  CHECK(at1.arc_coefficients == std::vector<Rational>{1, 1});
  CHECK(at1.scaled_budget == 1);
  CHECK(at1.lambda == 1);
  const auto at2 = build_scaled_costs(net, 1, Rational(1));
  CHECK(at2.arc_coefficients == std::vector<Rational>{q("1/2"), 1});
  CHECK(at2.scaled_budget == q("1/2"));
  CHECK(scaled_path_coefficient({0}, at2) == q("1/2"));

  const auto zero = build_scaled_costs_at_zero(make_network(2, {{0, 1, "1", "3"}, {0, 1, "1", "inf"}}));
  CHECK(zero.arc_coefficients == std::vector<Rational>{0, 1});
  CHECK_FALSE(zero.breakpoint_arc.has_value());

  const auto odd = make_network(2, {{0, 1, "1", "inf"}, {0, 1, "1", "0"}});
  CHECK_THROWS_AS(build_scaled_costs(odd, 0, Rational(1)), InputError);
  CHECK_THROWS_AS(build_scaled_costs(odd, 1, Rational(1)), InputError);
}

TEST_CASE("pricing") {
  const auto net = parallel_pair();
  const auto& k = net.commodities[0];
  const auto at1 = build_scaled_costs(net, 0, Rational(1));
  std::vector<Rational> y{0, 0};
  CHECK(price_lp_flow(std::span<const Rational>(y), at1, net, k).has_value());
  y = {1, 1};
  CHECK_FALSE(price_lp_flow(std::span<const Rational>(y), at1, net, k).has_value());
  y = {1, 0};
  const auto p = price_lp_flow(std::span<const Rational>(y), at1, net, k);
  REQUIRE(p.has_value());
  CHECK(*p == Path{1});
}

TEST_CASE("fixed-arc LP objectives") {
  const auto net = parallel_pair();
  const auto b = make_budgets("1");
  CHECK(solve_lp_flow_fixed_arc(net, b, 0).objective == 1);
  CHECK(solve_lp_flow_fixed_arc(net, b, 1).objective == 1);
}

TEST_CASE("c_bot") {
  const auto single = make_network(2, {{0, 1, "1", "1"}});
  CHECK(compute_c_bot(single, single.commodities[0]) == ext("1"));
  const auto series = make_network(3, {{0, 2, "1", "3"}, {2, 1, "1", "5"}});
  CHECK(compute_c_bot(series, series.commodities[0]) == ext("3"));
  const auto diamond =
      make_network(4, {{0, 2, "1", "3"}, {2, 1, "1", "4"}, {0, 3, "1", "1"}, {3, 1, "1", "5"}});
  CHECK(compute_c_bot(diamond, diamond.commodities[0]) == ext("3"));
  const auto open = make_network(2, {{0, 1, "1", "inf"}, {0, 1, "1", "2"}});
  CHECK(compute_c_bot(open, open.commodities[0]).is_infinite());
  const auto cut = make_network(3, {{0, 2, "1", "1"}});
  CHECK_THROWS_AS(compute_c_bot(cut, cut.commodities[0]), InputError);
}

TEST_CASE("candidate breakpoints") {
  const auto net =
      make_network(3, {{0, 1, "1", "2"}, {0, 2, "1", "9"}, {2, 1, "1", "inf"}, {0, 1, "1", "2"}});
  // c_bot = 9; costs 2 (twice) and 9 give two candidates.
  const auto c = candidate_breakpoints(net, false);
  REQUIRE(c.size() == 2);
  CHECK(c[0].arc == std::optional<ArcId>(1));
  CHECK(c[0].lambda == q("1/9"));
  CHECK(c[1].arc == std::optional<ArcId>(0));
  CHECK(c[1].lambda == q("1/2"));

  const auto open = make_network(2, {{0, 1, "1", "inf"}, {0, 1, "1", "3"}});
  const auto d = candidate_breakpoints(open, false);
  REQUIRE(d.size() == 2);
  CHECK_FALSE(d[0].arc.has_value());
  CHECK(d[0].lambda == 0);
}

TEST_CASE("solve_rf examples") {
  SUBCASE("parallel pair") {
    const auto s = solve_rf(parallel_pair(), make_budgets("1"));
    CHECK(s.robust_value == 1);
    CHECK(s.lp_objective == 1);
    CHECK(s.breakpoint_arc == std::optional<ArcId>(1));
    CHECK(s.lambda == q("1/2"));
    CHECK_FALSE(s.fully_interdictable);
  }
  SUBCASE("single arc stolen") {
    const auto s = solve_rf(make_network(2, {{0, 1, "1", "1"}}), make_budgets("2"));
    CHECK(s.robust_value == 0);
    CHECK(s.fully_interdictable);
    CHECK(s.flow.empty());
  }
  SUBCASE("uninterdictable arc") {
    const auto s = solve_rf(make_network(2, {{0, 1, "1", "inf"}}), make_budgets("2"));
    CHECK(s.robust_value == 1);
    CHECK(s.lambda == 0);
    CHECK_FALSE(s.breakpoint_arc.has_value());
  }
  SUBCASE("unbounded") {
    CHECK_THROWS_AS(solve_rf(make_network(2, {{0, 1, "inf", "inf"}}), make_budgets("1")),
                    InputError);
  }
  SUBCASE("float") {
    const auto s = solve_rf(network_cast<double>(parallel_pair()), budgets_cast<double>(make_budgets("1")));
    CHECK(s.robust_value == doctest::Approx(1.0));
  }
}

TEST_CASE("budgeted examples") {
  const auto one = make_network(2, {{0, 1, "5", "inf", "1"}});
  CHECK(solve_rf_budgeted(one, make_budgets("0", "2")).robust_value == 2);
  CHECK(solve_rf_budgeted(parallel_pair("1", "1"), make_budgets("1", "1")).robust_value ==
        q("1/2"));
  CHECK(solve_rf_budgeted(parallel_pair("1", "1"), make_budgets("1", "1000")).robust_value ==
        solve_rf(parallel_pair("1", "1"), make_budgets("1")).robust_value);
  CHECK_THROWS_AS(solve_rf_budgeted(parallel_pair(), make_budgets("1")), InputError);
}

TEST_CASE("multicommodity examples") {
  const auto twin = make_network(3, {{0, 1, "1", "1"}, {2, 1, "1", "1"}}, {{0, 1}, {2, 1}});
  CHECK(solve_rf_multicommodity(twin, make_budgets("1")).robust_value == 1);
  CHECK(solve_rf_multicommodity(twin, make_budgets("2")).robust_value == 0);
  const auto net = parallel_pair();
  CHECK(solve_rf_multicommodity(net, make_budgets("1")).robust_value ==
        solve_rf(net, make_budgets("1")).robust_value);
}

TEST_CASE("matches brute force") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    CAPTURE(seed);
    const auto inst = draw(seed);
    const auto expected = brute_force_rf(inst.network, inst.budgets, inst.universe).value;
    for (auto mode : {SearchMode::enumerate, SearchMode::newton}) {
      RFOptions o;
      o.mode = mode;
      const auto exact = solve_rf(inst.network, inst.budgets, o);
      CHECK(exact.robust_value == expected);
      CHECK(exact.robust_value == evaluate_robust_value(exact.flow, inst.network,
                                                        inst.budgets.interdictor));
      const auto approx =
          solve_rf(network_cast<double>(inst.network), budgets_cast<double>(inst.budgets), o);
      CHECK(std::abs(approx.robust_value - expected.get_d()) <= 1e-6);
    }
  }
}

TEST_CASE("budgeted and multicommodity match brute force") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    CAPTURE(seed);
    const auto multi = draw(seed, 2);
    CHECK(solve_rf_multicommodity(multi.network, multi.budgets).robust_value ==
          brute_force_rf(multi.network, multi.budgets, multi.universe).value);
    const auto budgeted = draw(seed, 1, true);
    CHECK(solve_rf_budgeted(budgeted.network, budgeted.budgets).robust_value ==
          brute_force_rf(budgeted.network, budgeted.budgets, budgeted.universe).value);
  }
}

TEST_CASE("search modes agree and threads do not change the answer") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    CAPTURE(seed);
    const auto inst = draw(seed);
    RFOptions serial;
    const auto a = solve_rf(inst.network, inst.budgets, serial);
    RFOptions newton;
    newton.mode = SearchMode::newton;
    const auto b = solve_rf(inst.network, inst.budgets, newton);
    CHECK(a.robust_value == b.robust_value);
    CHECK(b.lp_solves <= a.lp_solves);
    RFOptions parallel;
    parallel.threads = 4;
    const auto c = solve_rf(inst.network, inst.budgets, parallel);
    CHECK(c.robust_value == a.robust_value);
    CHECK(c.flow == a.flow);
  }
}

namespace {

// One unit either on a path of bottleneck 10 or on two crossing paths of
// bottleneck 1 that share its arcs, plus a separate arc of cost 20 and two
// dead-end arcs that only add breakpoints.
Network<Rational> two_regimes() {
  return make_network(5, {{0, 2, "1", "10"},
                          {2, 4, "5", "10"},
                          {4, 1, "1", "10"},
                          {2, 1, "5", "1"},
                          {0, 4, "5", "1"},
                          {0, 1, "1", "20"},
                          {0, 3, "1", "3"},
                          {0, 3, "1", "1/2"}});
}

}  // namespace

TEST_CASE("breakpoint values need not be concave") {
  const auto net = two_regimes();
  const auto b = make_budgets("1");
  const auto s = solve_rf(net, b);
  std::vector<std::pair<Rational, Rational>> got;
  for (const auto& r : s.breakpoints) got.emplace_back(r.lambda, r.lp_value);
  CHECK(got == std::vector<std::pair<Rational, Rational>>{{q("1/20"), q("29/20")},
                                                          {q("1/10"), q("19/10")},
                                                          {q("1/3"), q("5/3")},
                                                          {1, 2},
                                                          {2, 1}});
  CHECK_FALSE(breakpoint_values_concave(s.breakpoints, Rational(0)));
  const auto oracle = brute_force_rf(net, b, enumerate_paths(net));
  for (const auto& [lambda, value] : got) {
    const auto hit = std::find_if(oracle.breakpoints.begin(), oracle.breakpoints.end(),
                                  [&](const auto& r) { return r.lambda == lambda; });
    REQUIRE(hit != oracle.breakpoints.end());
    CHECK(hit->lp_value == value);
  }
  CHECK(s.robust_value == 2);
}

TEST_CASE("newton mode does not stop at a local maximum") {
  RFOptions newton;
  newton.mode = SearchMode::newton;
  for (const char* b : {"1/2", "3/4", "1", "11/10", "3/2"}) {
    CAPTURE(b);
    const auto net = two_regimes();
    CHECK(solve_rf(net, make_budgets(b), newton).robust_value ==
          solve_rf(net, make_budgets(b)).robust_value);
  }
}

TEST_CASE("breakpoint values obey the monotone bounds") {
  // g = phi + lambda B_I is non-decreasing and g / lambda non-increasing.
  for (std::uint64_t seed = 200; seed < 260; ++seed) {
    CAPTURE(seed);
    const auto inst = draw(seed);
    const auto s = solve_rf(inst.network, inst.budgets);
    const auto& b = inst.budgets.interdictor;
    for (std::size_t i = 0; i + 1 < s.breakpoints.size(); ++i) {
      const auto& lo = s.breakpoints[i];
      const auto& hi = s.breakpoints[i + 1];
      const Rational g_lo = lo.lp_value + lo.lambda * b;
      const Rational g_hi = hi.lp_value + hi.lambda * b;
      CHECK(g_lo <= g_hi);
      if (lo.lambda > 0) CHECK(g_hi * lo.lambda <= g_lo * hi.lambda);
    }
  }
}

TEST_CASE("each breakpoint LP bounds the robust value of its own flow") {
  RFOptions o;
  o.keep_breakpoint_flows = true;
  for (std::uint64_t seed = 300; seed < 360; ++seed) {
    CAPTURE(seed);
    const auto inst = draw(seed);
    const auto s = solve_rf(inst.network, inst.budgets, o);
    for (const auto& r : s.breakpoints) {
      CHECK(r.lp_value <= evaluate_robust_value(r.flow, inst.network, inst.budgets.interdictor));
    }
    if (!s.fully_interdictable) CHECK(s.lp_objective == s.robust_value);
  }
}

TEST_CASE("endpoint regimes") {
  for (std::uint64_t seed = 400; seed < 440; ++seed) {
    CAPTURE(seed);
    auto inst = draw(seed);
    const auto mf = max_flow(inst.network);
    CHECK(solve_rf(inst.network, make_budgets("0")).robust_value == mf);

    auto open = inst.network;
    for (auto& a : open.arcs) a.cost = Extended<Rational>::infinity();
    CHECK(solve_rf(open, make_budgets("5")).robust_value == mf);

    // A budget beyond the interdiction cost of every feasible flow.
    bool all_finite = true;
    Rational total = 0;
    for (const auto& a : inst.network.arcs) {
      if (a.cost.is_infinite()) all_finite = false;
      else if (a.capacity.is_finite()) total += a.cost.value() * a.capacity.value();
      else all_finite = false;
    }
    if (all_finite) {
      const auto s = solve_rf(inst.network, make_budgets(format_rational(total + 1)));
      CHECK(s.robust_value == 0);
      CHECK(s.fully_interdictable);
    }
  }
}
