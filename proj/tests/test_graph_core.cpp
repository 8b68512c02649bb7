#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "robustflow/error.hpp"
#include "robustflow/network.hpp"
#include "support.hpp"

using namespace rftest;

TEST_CASE("rational tokens") {
  CHECK(q("3/2") == Rational(3, 2));
  CHECK(q("-0.25") == Rational(-1, 4));
  CHECK(q("7") == 7);
  CHECK(q("6/4") == Rational(3, 2));
  CHECK_THROWS_AS(q("1.5e0"), std::invalid_argument);
  CHECK_THROWS_AS(q("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(q("abc"), std::invalid_argument);
  CHECK_THROWS_AS(q("1.2.3"), std::invalid_argument);
  CHECK_THROWS_AS(q(""), std::invalid_argument);
  CHECK(ext("inf").is_infinite());
  CHECK(format_rational(q("6/4")) == "3/2");
  CHECK(format_extended(ext("inf")) == "inf");
  CHECK(format_scalar(0.5) == "0.5");
}

TEST_CASE("extended arithmetic") {
  const auto inf = Extended<Rational>::infinity();
  const Extended<Rational> two(Rational(2));
  CHECK(two < inf);
  CHECK(min(two, inf) == two);
  CHECK(max(two, inf) == inf);
  CHECK((inf + two).is_infinite());
  CHECK((inf * Extended<Rational>(Rational(0))).is_zero());
  CHECK((two * two) == Extended<Rational>(Rational(4)));
  CHECK_THROWS(inf.value());
  CHECK(extended_cast<double>(two) == Extended<double>(2.0));
}

TEST_CASE("float tolerance") {
  CHECK(is_zero(1e-10));
  CHECK_FALSE(is_positive(1e-10));
  CHECK(is_positive(1e-8));
  CHECK(approx_equal(1.0, 1.0 + 1e-10));
  CHECK_FALSE(is_positive(Rational(0)));
  CHECK(is_positive(q("1/1000000000000")));
}

TEST_CASE("validate_instance") {
  const auto budgets = make_budgets("1");
  CHECK(validate_instance(make_network(2, {{0, 1, "1", "1"}}), budgets).empty());

  auto dangling = make_network(2, {{0, 1, "1", "1"}});
  dangling.arcs[0].head = 5;
  auto problems = validate_instance(dangling, budgets);
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].find("unknown node") != std::string::npos);

  auto negative = make_network(2, {{0, 1, "-1", "1"}});
  problems = validate_instance(negative, budgets);
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].find("negative capacity") != std::string::npos);

  auto no_terminals = make_network(2, {{0, 1, "1", "1"}}, {});
  CHECK_FALSE(validate_instance(no_terminals, budgets).empty());
  CHECK_FALSE(validate_instance(make_network(2, {{0, 1, "1", "1"}}), make_budgets("-1")).empty());
  CHECK_FALSE(validate_instance(make_network(2, {{0, 1, "1", "1"}}, {{0, 0}}), budgets).empty());
}

TEST_CASE("path shape") {
  // 0 -> 1 -> 0 -> 1 revisits nodes but no arc.
  const auto net = make_network(2, {{0, 1, "1", "1"}, {1, 0, "1", "1"}, {0, 1, "1", "1"}});
  const auto& k = net.commodities[0];
  CHECK(is_valid_path({0}, net, k));
  CHECK(is_valid_path({0, 1, 2}, net, k));
  CHECK_FALSE(is_valid_path({0, 1, 0}, net, k));
  CHECK_FALSE(is_valid_path({}, net, k));
  CHECK_FALSE(is_valid_path({1}, net, k));
  CHECK_FALSE(is_valid_path({7}, net, k));
}

TEST_CASE("bottleneck_cost") {
  const auto net = make_network(4, {{0, 2, "1", "3"}, {2, 3, "1", "1"}, {3, 1, "1", "2"},
                                    {0, 1, "1", "inf"}, {0, 1, "1", "5"}});
  CHECK(bottleneck_cost({0, 1, 2}, net) == Extended<Rational>(Rational(1)));
  CHECK(bottleneck_cost({3}, net).is_infinite());
  const auto twins = make_network(3, {{0, 2, "1", "5"}, {2, 1, "1", "5"}});
  CHECK(bottleneck_cost({0, 1}, twins) == Extended<Rational>(Rational(5)));
  CHECK_THROWS_AS(bottleneck_cost({9}, net), std::out_of_range);
}

TEST_CASE("path_price") {
  const auto net = make_network(3, {{0, 2, "1", "1", "1/2"}, {2, 1, "1", "1", "inf"}});
  CHECK(path_price({0}, net) == Extended<Rational>(Rational(1, 2)));
  CHECK(path_price({0, 1}, net).is_infinite());
}

TEST_CASE("decompose_flow examples") {
  SUBCASE("single arc") {
    const auto net = make_network(2, {{0, 1, "5", "1"}});
    const std::vector<Rational> f{2};
    const auto flow = decompose_flow(std::span<const Rational>(f), net, 0, 1);
    CHECK(flow == PathFlow<Rational>{{{0}, 2}});
  }
  SUBCASE("parallel arcs") {
    const auto net = parallel_pair();
    const std::vector<Rational> f{1, 1};
    const auto flow = decompose_flow(std::span<const Rational>(f), net, 0, 1);
    CHECK(flow == PathFlow<Rational>{{{0}, 1}, {{1}, 1}});
  }
  SUBCASE("diamond") {
    const auto net =
        make_network(4, {{0, 2, "3", "1"}, {2, 1, "3", "1"}, {0, 3, "3", "1"}, {3, 1, "3", "1"}});
    const std::vector<Rational> f{3, 3, 3, 3};
    const auto flow = decompose_flow(std::span<const Rational>(f), net, 0, 1);
    CHECK(flow == PathFlow<Rational>{{{0, 1}, 3}, {{2, 3}, 3}});
    CHECK(arc_loads(flow, net) == f);
  }
  SUBCASE("conservation violated") {
    const auto net = make_network(3, {{0, 2, "3", "1"}, {2, 1, "3", "1"}});
    const std::vector<Rational> f{2, 1};
    CHECK_THROWS_AS(decompose_flow(std::span<const Rational>(f), net, 0, 1), InputError);
  }
  SUBCASE("over capacity") {
    const auto net = make_network(2, {{0, 1, "1", "1"}});
    const std::vector<Rational> f{2};
    CHECK_THROWS_AS(decompose_flow(std::span<const Rational>(f), net, 0, 1), InputError);
  }
  SUBCASE("cycle away from the terminals is dropped") {
    const auto net =
        make_network(4, {{0, 1, "1", "1"}, {2, 3, "1", "1"}, {3, 2, "1", "1"}});
    const std::vector<Rational> f{1, 1, 1};
    const auto flow = decompose_flow(std::span<const Rational>(f), net, 0, 1);
    CHECK(flow == PathFlow<Rational>{{{0}, 1}});
  }
}

// Random acyclic networks: every arc points from a lower to a higher node, so
// arc flows built from path flows have no cycles and must be reproduced
// exactly.
TEST_CASE("decompose_flow reproduces acyclic loads") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = 3 + rng() % 5;
    Network<Rational> net;
    net.node_count = n;
    const std::size_t m = 2 + rng() % 12;
    for (std::size_t i = 0; i < m; ++i) {
      NodeId a = rng() % n, b = rng() % n;
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      net.arcs.push_back({a, b, ext("inf"), ext("1"), ext("0")});
    }
    net.commodities.push_back({0, n - 1, std::nullopt});

    // Random walks forward from the source.
    PathFlow<Rational> flow;
    for (int p = 0; p < 4; ++p) {
      Path path;
      NodeId at = 0;
      while (at != n - 1) {
        std::vector<ArcId> out;
        for (ArcId e = 0; e < net.arcs.size(); ++e) {
          if (net.arcs[e].tail == at) out.push_back(e);
        }
        if (out.empty()) break;
        const ArcId e = out[rng() % out.size()];
        path.push_back(e);
        at = net.arcs[e].head;
      }
      Rational x(1 + rng() % 5, 1 + rng() % 3);
      x.canonicalize();
      if (at == n - 1 && !path.empty()) flow[path] += x;
    }

    const auto loads = arc_loads(flow, net);
    const auto back = decompose_flow(std::span<const Rational>(loads), net, 0, n - 1);
    CHECK(arc_loads(back, net) == loads);
    CHECK(flow_value(back) == flow_value(flow));
    CHECK(back.size() <= net.arcs.size());
    for (const auto& [path, x] : back) CHECK(is_valid_path(path, net));
  }
}

TEST_CASE("decompose_flow keeps integrality") {
  std::mt19937_64 rng(5);
  const auto net = make_network(
      5, {{0, 2, "inf", "1"}, {0, 3, "inf", "1"}, {2, 3, "inf", "1"}, {2, 4, "inf", "1"},
          {3, 4, "inf", "1"}, {4, 1, "inf", "1"}, {3, 1, "inf", "1"}});
  for (int round = 0; round < 100; ++round) {
    PathFlow<Rational> flow;
    const std::vector<Path> paths{{0, 3, 5}, {0, 2, 4, 5}, {0, 2, 6}, {1, 6}, {1, 4, 5}};
    for (const auto& p : paths) flow[p] = Rational(static_cast<long>(rng() % 4));
    const auto loads = arc_loads(flow, net);
    const auto back = decompose_flow(std::span<const Rational>(loads), net, 0, 1);
    for (const auto& [path, x] : back) CHECK(x.get_den() == 1);
    CHECK(arc_loads(back, net) == loads);
  }
}

TEST_CASE("flow_violations") {
  const auto net = parallel_pair();
  CHECK(flow_violations(PathFlow<Rational>{{{0}, 1}}, net).empty());
  CHECK_FALSE(flow_violations(PathFlow<Rational>{{{0}, 2}}, net).empty());
  CHECK_FALSE(flow_violations(PathFlow<Rational>{{{0}, -1}}, net).empty());
  CHECK_FALSE(flow_violations(PathFlow<Rational>{{{0, 1}, 1}}, net).empty());
}

TEST_CASE("casts to float") {
  const auto net = network_cast<double>(parallel_pair());
  CHECK(net.arcs[1].cost == Extended<double>(2.0));
  const auto b = budgets_cast<double>(make_budgets("1/2", "3"));
  CHECK(b.interdictor == 0.5);
  CHECK(*b.flow_player == 3.0);
}
