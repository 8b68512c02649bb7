#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "robustflow/cli.hpp"
#include "robustflow/error.hpp"
#include "robustflow/instance_io.hpp"
#include "support.hpp"

using namespace rftest;

namespace {

const std::string data_dir = ROBUSTFLOW_TEST_DATA;

Instance parse(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "robustflow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string scratch_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("robustflow_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

std::string data(const std::string& name) { return data_dir + "/" + name; }

}  // namespace

TEST_CASE("parse a minimal instance") {
  const auto inst = parse("c two arcs\np rf 2 2\nk 1 2\na 1 1 2 1 1 0\na 2 1 2 3/2 inf 1/2\nb 1\n");
  CHECK(inst.kind == ProblemKind::rf);
  CHECK(inst.comments == std::vector<std::string>{"two arcs"});
  CHECK(inst.network.node_count == 2);
  REQUIRE(inst.network.arcs.size() == 2);
  CHECK(inst.network.arcs[1].capacity == ext("3/2"));
  CHECK(inst.network.arcs[1].cost.is_infinite());
  CHECK(inst.network.arcs[1].price == ext("1/2"));
  CHECK(inst.budgets.interdictor == 1);
  CHECK_FALSE(inst.budgets.flow_player.has_value());
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_WITH_AS(parse("p rf 2 1\nk 1 2\na 1 1 2 x 1 0\nb 1\n"),
                       doctest::Contains("line 3"), InputError);
  CHECK_THROWS_WITH_AS(parse("p rf 2 1\nq 1\n"), doctest::Contains("line 2: unknown line type"),
                       InputError);
  CHECK_THROWS_WITH_AS(parse("k 1 2\n"), doctest::Contains("line 1"), InputError);
  CHECK_THROWS_WITH_AS(parse("p rf 2 1\nk 1 2\na 1 1 3 1 1 0\nb 1\n"), doctest::Contains("line 3"),
                       InputError);
  CHECK_THROWS_AS(parse("p rf 2 2\nk 1 2\na 1 1 2 1 1 0\nb 1\n"), InputError);
  CHECK_THROWS_AS(parse("p rf 2 1\nk 1 2\na 1 1 2 1 1 0\n"), InputError);
  CHECK_THROWS_AS(parse("p rf 2 1\nk 1 2\na 1 1 2 1 1\nb 1\n"), InputError);
  CHECK_THROWS_AS(parse(""), InputError);
}

TEST_CASE("short arc lines for mf and adp") {
  const auto mf = parse("p mf 3 2\nk 1 3 2\na 1 1 2 4\na 2 2 3 inf\n");
  CHECK(mf.kind == ProblemKind::mf);
  CHECK(mf.network.arcs[0].cost.is_infinite());
  CHECK(mf.network.arcs[0].price == ext("0"));
  CHECK(*mf.network.commodities[0].demand == 2);
}

TEST_CASE("round trip") {
  for (const char* text : {
           "p rf 2 2\nk 1 2\na 1 1 2 1 1 0\na 2 1 2 1 2 0\nb 1\n",
           "c note\np rf 3 2\nk 1 3\na 1 1 2 3/2 inf 1/2\na 2 2 3 inf 2 0\nb 5/3 4\n",
           "p mf 3 1\nk 1 3 2\nk 2 3 1/2\na 1 1 3 4\n",
           "p adp 4 2\nk 1 2\nk 3 4\na 1 1 2 1\na 2 3 4 1\n",
       }) {
    CHECK(serialize_instance(parse(text)) == text);
  }
}

TEST_CASE("digest") {
  const std::string text = "p rf 2 2\nk 1 2\na 1 1 2 1 1 0\na 2 1 2 1 2 0\nb 1\n";
  const auto a = instance_digest(parse(text));
  CHECK(a.size() == 16);
  CHECK(a == instance_digest(parse("c comments do not count\n" + text)));
  CHECK(a != instance_digest(parse("p rf 2 2\nk 1 2\na 1 1 2 1 1 0\na 2 1 2 1 3 0\nb 1\n")));
  CHECK(a == instance_digest(read_instance(data("parallel.rf"))));
}

TEST_CASE("flow, plan and increase files") {
  const auto inst = read_instance(data("parallel.rf"));
  std::istringstream flow_text("value 1\npath 2 1 2\npath 1 1/2 1\n");
  const auto flow = parse_flow(flow_text, inst.network);
  CHECK(flow.order == std::vector<Path>{{0}, {1}});
  CHECK(flow.flow.at({0}) == q("1/2"));

  std::istringstream plan_text("z 1 1 1/4\n");
  const auto plan = parse_plan(plan_text, flow);
  REQUIRE(plan.steals.size() == 1);
  CHECK(plan.steals[0].path == Path{0});

  std::istringstream inc_text("cplus 2 3\n");
  CHECK(parse_increase(inc_text, inst.network) == std::vector<Rational>{0, 3});

  std::istringstream gap("path 2 1 2\n");
  CHECK_THROWS_AS(parse_flow(gap, inst.network), InputError);
  std::istringstream bad_path("path 1 1 3\n");
  CHECK_THROWS_AS(parse_flow(bad_path, inst.network), InputError);

  CHECK(format_flow_lines(flow.flow) == "path 1 1/2 1\npath 2 1 2\n");
}

TEST_CASE("cli solve-rf") {
  const auto r = run({"solve-rf", data("parallel.rf")});
  CHECK(r.code == 0);
  CHECK(r.out.find("value 1\n") != std::string::npos);
  CHECK(r.out.find("breakpoint 2\n") != std::string::npos);

  const auto exact = run({"solve-rf", data("parallel.rf"), "--arith", "exact", "--mode", "newton"});
  CHECK(exact.code == 0);
  CHECK(exact.out.find("lambda 1/2\n") != std::string::npos);

  const auto json = run({"solve-rf", data("parallel.rf"), "--json"});
  CHECK(json.code == 0);
  CHECK(json.out.find("\"schema\": 1") != std::string::npos);

  const auto csv = std::filesystem::temp_directory_path() / "robustflow_test_breakpoints.csv";
  const auto with_csv =
      run({"solve-rf", data("parallel.rf"), "--report-breakpoints", csv.string()});
  CHECK(with_csv.code == 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "arc_id,c_f,lambda,lp_value");
}

TEST_CASE("cli evaluate reads back its own report") {
  const auto solved = run({"solve-rf", data("parallel.rf"), "--arith", "exact"});
  const auto flow = scratch_file("flow.txt", solved.out);
  const auto r = run({"evaluate", data("parallel.rf"), "--flow", flow});
  CHECK(r.code == 0);
  CHECK(r.out.find("value 1\n") != std::string::npos);

  const auto greedy_plan = scratch_file("plan_ok.txt", "z 1 1 1\n");
  CHECK(run({"evaluate", data("parallel.rf"), "--flow", flow, "--plan", greedy_plan}).code == 0);
  const auto lavish = scratch_file("plan_over.txt", "z 2 2 1\nz 1 1 1\n");
  const auto over = run({"evaluate", data("parallel.rf"), "--flow", flow, "--plan", lavish});
  CHECK(over.code == 1);
  CHECK_FALSE(over.err.empty());
}

TEST_CASE("cli solve-design and oracle") {
  const auto d = run({"solve-design", data("single_arc_design.rf"), "--arith", "exact"});
  CHECK(d.code == 0);
  CHECK(d.out.find("value 3/2\n") != std::string::npos);

  const auto o = run({"oracle", data("parallel.rf")});
  CHECK(o.code == 0);
  CHECK(o.out.find("value 1\n") != std::string::npos);
  const auto od = run({"oracle", data("single_arc_design.rf"), "--problem", "design"});
  CHECK(od.code == 0);
  CHECK(od.out.find("value 3/2\n") != std::string::npos);
}

TEST_CASE("cli gen-reduction") {
  const auto mf = scratch_file("in.mf", "p mf 2 1\nk 1 2 1\na 1 1 2 1\n");
  const auto out = std::filesystem::temp_directory_path() / "robustflow_test_out.rf";
  CHECK(run({"gen-reduction", mf, "--kind", "mf", "-o", out.string()}).code == 0);
  const auto solved = run({"solve-rf", out.string(), "--arith", "exact"});
  CHECK(solved.code == 0);
  CHECK(solved.out.find("value 1\n") != std::string::npos);

  const auto adp = scratch_file("in.adp", "p adp 4 2\nk 1 2\nk 3 4\na 1 1 2 1\na 2 3 4 1\n");
  const auto printed = run({"gen-reduction", adp, "--kind", "adp"});
  CHECK(printed.code == 0);
  CHECK(printed.out.find("p rf") != std::string::npos);
}

TEST_CASE("cli failures") {
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"solve-rf", data("missing.rf")}).code == 1);
  const auto broken = scratch_file("broken.rf", "p rf 2 1\nk 1 2\na 1 1 2 1 1\nb 1\n");
  const auto r = run({"solve-rf", broken});
  CHECK(r.code == 1);
  CHECK(r.err.find("line 3") != std::string::npos);
  const auto open = scratch_file("open.rf", "p rf 2 1\nk 1 2\na 1 1 2 inf inf 0\nb 1\n");
  CHECK(run({"solve-rf", open}).code == 1);
  CHECK(run({"solve-design", data("parallel.rf")}).code == 1);
}
