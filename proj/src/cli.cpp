#include "robustflow/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "robustflow/design_solver.hpp"
#include "robustflow/error.hpp"
#include "robustflow/flow_solver.hpp"
#include "robustflow/instance_io.hpp"
#include "robustflow/interdiction.hpp"
#include "robustflow/oracle.hpp"
#include "robustflow/reductions.hpp"

namespace robustflow::cli {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Settings {
  std::string instance;
  std::string arith = "float";
  std::string mode = "enumerate";
  std::string problem = "rf";
  std::string kind;
  std::string breakpoints_csv;
  std::string flow_file;
  std::string plan_file;
  std::string increase_file;
  std::string output;
  unsigned threads = 1;
  std::size_t cap = default_path_cap;
  bool json = false;
};

// Thrown when a computed value disagrees with its independent re-evaluation.
class VerificationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

template <Scalar T>
bool close(const T& a, const T& b) {
  if constexpr (NumericTraits<T>::exact) {
    return a == b;
  } else {
    return std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(b));
  }
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

template <Scalar T>
json number(const T& x) {
  return json{{"value", format_scalar(x)}, {"approx", to_double(x)}};
}

template <Scalar T>
json flow_json(const PathFlow<T>& flow) {
  json paths = json::array();
  std::size_t index = 1;
  for (const auto& [path, x] : flow) {
    json arcs = json::array();
    for (ArcId e : path) arcs.push_back(e + 1);
    paths.push_back({{"index", index++}, {"amount", format_scalar(x)}, {"arcs", arcs}});
  }
  return paths;
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Text reports are "key value" lines followed by the flow's path lines, so
// a report can be fed back to `evaluate --flow`.
void print_report(std::ostream& out, const json& report, const std::string& flow_lines) {
  for (const auto& [key, value] : report.items()) {
    if (key == "paths" || key == "cstar") continue;
    out << key << ' ';
    if (value.is_object() && value.contains("value")) {
      out << value["value"].get<std::string>();
    } else if (value.is_string()) {
      out << value.get<std::string>();
    } else if (value.is_null()) {
      out << "none";
    } else {
      out << value.dump();
    }
    out << '\n';
  }
  if (report.contains("cstar")) {
    for (const auto& entry : report["cstar"]) {
      out << "cstar " << entry["arc"].get<std::size_t>() << ' ' << entry["cost"].get<std::string>()
          << '\n';
    }
  }
  out << flow_lines;
}

void emit(std::ostream& out, const Settings& s, const json& report, const std::string& lines) {
  if (s.json) {
    out << report.dump(2) << '\n';
  } else {
    print_report(out, report, lines);
  }
}

json header(const char* command, const Instance& instance, const Settings& s) {
  json report;
  report["schema"] = 1;
  report["command"] = command;
  report["instance"] = instance_digest(instance);
  report["arith"] = s.arith;
  return report;
}

template <Scalar T>
void write_breakpoints(const std::string& path, const std::vector<BreakpointRecord<T>>& records) {
  std::ofstream csv(path);
  if (!csv) throw InputError("cannot write " + path);
  csv << "arc_id,c_f,lambda,lp_value\n";
  for (const auto& r : records) {
    csv << (r.arc ? std::to_string(*r.arc + 1) : std::string()) << ','
        << format_scalar(r.cost) << ',' << format_scalar(r.lambda) << ','
        << format_scalar(r.lp_value) << '\n';
  }
}

SearchMode parse_mode(const std::string& mode) {
  return mode == "newton" ? SearchMode::newton : SearchMode::enumerate;
}

Instance load_rf(const Settings& s) {
  auto instance = read_instance(s.instance);
  if (instance.kind != ProblemKind::rf) {
    throw InputError("expected a 'p rf' instance, got 'p " + std::string(to_string(instance.kind)) +
                     "'");
  }
  return instance;
}

template <Scalar T>
int solve_rf_command(const Settings& s, std::ostream& out) {
  const auto instance = load_rf(s);
  const auto network = network_cast<T>(instance.network);
  const auto budgets = budgets_cast<T>(instance.budgets);
  RFOptions options;
  options.mode = parse_mode(s.mode);
  options.threads = s.threads;

  const auto start = Clock::now();
  const auto sol = solve_rf_multicommodity(network, budgets, options);
  const double ms = elapsed_ms(start);

  const T check = evaluate_robust_value(sol.flow, network, budgets.interdictor);
  if (!close(check, sol.robust_value) || !close(sol.robust_value, sol.lp_objective)) {
    throw VerificationError("robust value " + format_scalar(sol.robust_value) +
                            " does not match its re-evaluation " + format_scalar(check));
  }
  if (!s.breakpoints_csv.empty()) write_breakpoints(s.breakpoints_csv, sol.breakpoints);

  auto report = header("solve-rf", instance, s);
  report["solver"] = budgets.flow_player ? "budgeted" : "robust-flow";
  report["mode"] = to_string(options.mode);
  report["value"] = number(sol.robust_value);
  report["breakpoint"] = sol.breakpoint_arc ? json(*sol.breakpoint_arc + 1) : json(nullptr);
  report["lambda"] = number(sol.lambda);
  report["fully_interdictable"] = sol.fully_interdictable;
  report["lp_solves"] = sol.lp_solves;
  if (!s.breakpoints_csv.empty()) report["breakpoints_csv"] = s.breakpoints_csv;
  report["time_ms"] = ms;
  report["paths"] = flow_json(sol.flow);
  emit(out, s, report, format_flow_lines(sol.flow));
  return 0;
}

template <Scalar T>
json cstar_json(const std::vector<Extended<T>>& costs) {
  json list = json::array();
  for (ArcId e = 0; e < costs.size(); ++e) {
    list.push_back({{"arc", e + 1}, {"cost", format_scalar(costs[e])}});
  }
  return list;
}

template <Scalar T>
int solve_design_command(const Settings& s, std::ostream& out) {
  const auto instance = load_rf(s);
  const auto network = network_cast<T>(instance.network);
  const auto budgets = budgets_cast<T>(instance.budgets);

  const auto start = Clock::now();
  const auto sol = solve_design(network, budgets);
  const double ms = elapsed_ms(start);

  const T check = evaluate_design(sol.flow, sol.costs, network, budgets);
  if (!close(check, sol.profit)) {
    throw VerificationError("design profit " + format_scalar(sol.profit) +
                            " does not match its re-evaluation " + format_scalar(check));
  }

  auto report = header("solve-design", instance, s);
  report["solver"] = "design";
  report["value"] = number(sol.profit);
  report["gamma"] = number(sol.gamma_of_flow);
  report["time_ms"] = ms;
  report["cstar"] = cstar_json(sol.costs);
  report["paths"] = flow_json(sol.flow);
  emit(out, s, report, format_flow_lines(sol.flow));
  return 0;
}

template <Scalar T>
int evaluate_command(const Settings& s, std::ostream& out) {
  const auto instance = load_rf(s);
  const auto network = network_cast<T>(instance.network);
  const auto budgets = budgets_cast<T>(instance.budgets);
  auto flow_in = open(s.flow_file);
  const auto indexed = parse_flow(flow_in, instance.network);
  const auto flow = path_flow_cast<T>(indexed.flow);
  const auto problems = flow_violations(flow, network);
  if (!problems.empty()) throw InputError("infeasible flow: " + problems.front());

  auto report = header("evaluate", instance, s);
  report["flow_value"] = number(flow_value(flow));

  std::vector<Extended<T>> costs = arc_costs(network);
  if (!s.increase_file.empty()) {
    if (!budgets.flow_player) throw InputError("an increase needs a protection budget B_F");
    auto in = open(s.increase_file);
    const auto increase = parse_increase(in, instance.network);
    ProtectInstance<T> protect;
    protect.network = network;
    protect.budgets = budgets;
    std::vector<T> inc;
    for (const auto& x : increase) inc.push_back(scalar_cast<T>(x));
    report["value"] = number(evaluate_protect(protect, flow, inc));
    for (ArcId e = 0; e < costs.size(); ++e) costs[e] = costs[e] + Extended<T>(inc[e]);
  } else {
    report["value"] = number(evaluate_robust_value(flow, network, budgets.interdictor));
  }

  if (!s.plan_file.empty()) {
    auto in = open(s.plan_file);
    const auto parsed = parse_plan(in, indexed);
    InterdictionPlan<T> plan;
    for (const auto& z : parsed.steals) {
      if (z.arc >= network.arcs.size()) throw InputError("plan names an unknown arc");
      plan.steals.push_back({z.arc, z.path, scalar_cast<T>(z.amount)});
    }
    const auto spent = plan_cost(plan, std::span<const Extended<T>>(costs));
    if (spent.is_infinite() || is_positive(T(spent.value() - budgets.interdictor))) {
      throw InputError("plan exceeds the interdictor budget (cost " + format_scalar(spent) + ")");
    }
    report["plan_cost"] = number(spent.value());
    report["plan_value"] = number(robust_value(flow, plan).total_value);
  }
  emit(out, s, report, "");
  return 0;
}

int gen_reduction_command(const Settings& s, std::ostream& out) {
  const auto source = read_instance(s.instance);
  Instance generated;
  generated.kind = ProblemKind::rf;
  generated.comments.push_back("generated by robustflow gen-reduction --kind " + s.kind);
  generated.comments.push_back("source " + instance_digest(source));

  if (s.kind == "mf") {
    if (source.kind != ProblemKind::mf) throw InputError("--kind mf needs a 'p mf' instance");
    const auto red = mf_to_rf(source.network);
    generated.network = red.network;
    generated.budgets = red.budgets;
    std::ostringstream note;
    note << "terminal arcs";
    for (std::size_t i = 0; i < red.source_arcs.size(); ++i) {
      note << ' ' << red.source_arcs[i] + 1 << '/' << red.sink_arcs[i] + 1;
    }
    note << ", direct arc " << red.direct_arc + 1;
    generated.comments.push_back(note.str());
    generated.comments.push_back("value 1 iff the multicommodity demands are routable");
  } else {
    if (source.kind != ProblemKind::adp) throw InputError("--kind adp needs a 'p adp' instance");
    const auto red = adp_to_protect(source.network);
    generated.network = red.network;
    generated.budgets = red.budgets;
    generated.comments.push_back("protection instance: c holds the base cost c0");
    generated.comments.push_back("M " + format_rational(red.big_m));
    std::ostringstream note;
    note << "a1 " << red.a1 + 1 << " z1 " << red.z1 + 1 << " a2 " << red.a2 + 1 << " z2 "
         << red.z2 + 1;
    generated.comments.push_back(note.str());
    generated.comments.push_back("value 1/M iff arc-disjoint terminal paths exist, else 0");
  }

  const auto text = serialize_instance(generated);
  if (s.output.empty()) {
    out << text;
  } else {
    std::ofstream file(s.output);
    if (!file) throw InputError("cannot write " + s.output);
    file << text;
  }
  return 0;
}

template <Scalar T>
int oracle_command(const Settings& s, std::ostream& out) {
  const auto instance = load_rf(s);
  const auto network = network_cast<T>(instance.network);
  const auto budgets = budgets_cast<T>(instance.budgets);

  const auto start = Clock::now();
  const auto universe = enumerate_paths(network, s.cap);
  const auto result = s.problem == "design" ? brute_force_design(network, budgets, universe)
                                            : brute_force_rf(network, budgets, universe);
  const double ms = elapsed_ms(start);

  if (!s.breakpoints_csv.empty() && s.problem != "design") {
    std::vector<BreakpointRecord<T>> records;
    for (const auto& b : result.breakpoints) {
      BreakpointRecord<T> r;
      r.lambda = b.lambda;
      r.lp_value = b.lp_value;
      r.cost = Extended<T>::infinity();
      if (is_positive(b.lambda)) {
        r.cost = Extended<T>(T(T(1) / b.lambda));
        for (ArcId e = 0; e < network.arcs.size(); ++e) {
          if (network.arcs[e].cost == r.cost) {
            r.arc = e;
            break;
          }
        }
      }
      records.push_back(std::move(r));
    }
    write_breakpoints(s.breakpoints_csv, records);
  }

  auto report = header("oracle", instance, s);
  report["solver"] = s.problem == "design" ? "brute-force-design" : "brute-force-rf";
  report["value"] = number(result.value);
  report["paths_enumerated"] = universe.size();
  report["time_ms"] = ms;
  report["paths"] = flow_json(result.flow);
  emit(out, s, report, format_flow_lines(result.flow));
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust maximum flow against a flow-stealing interdictor", "robustflow"};
  app.require_subcommand(1);
  Settings s;
  const std::vector<std::string> ariths{"exact", "float"};

  auto* rf = app.add_subcommand("solve-rf", "Solve robust flow (budgeted when the file has B_F)");
  rf->add_option("instance", s.instance, "Instance file")->required();
  rf->add_option("--mode", s.mode, "Breakpoint search")->check(CLI::IsMember({"enumerate", "newton"}));
  rf->add_option("--arith", s.arith, "Arithmetic")->check(CLI::IsMember(ariths));
  rf->add_option("--report-breakpoints", s.breakpoints_csv, "Write the breakpoint table as CSV");
  rf->add_option("--threads", s.threads, "Worker threads for breakpoint LPs")->check(CLI::Range(1u, 256u));
  rf->add_flag("--json", s.json, "JSON report");

  auto* design = app.add_subcommand("solve-design", "Solve the network design variant");
  design->add_option("instance", s.instance, "Instance file")->required();
  design->add_option("--arith", s.arith, "Arithmetic")->check(CLI::IsMember(ariths));
  design->add_flag("--json", s.json, "JSON report");

  auto* eval = app.add_subcommand("evaluate", "Robust value of a given path flow");
  eval->add_option("instance", s.instance, "Instance file")->required();
  eval->add_option("--flow", s.flow_file, "Path flow file")->required();
  eval->add_option("--plan", s.plan_file, "Interdiction plan to check and apply");
  eval->add_option("--increase", s.increase_file, "Cost increases c+ (protection variant)");
  eval->add_option("--arith", s.arith, "Arithmetic")->check(CLI::IsMember(ariths));
  eval->add_flag("--json", s.json, "JSON report");

  auto* gen = app.add_subcommand("gen-reduction", "Build a robust flow instance from mf or adp");
  gen->add_option("instance", s.instance, "Source instance file")->required();
  gen->add_option("--kind", s.kind, "Reduction")->required()->check(CLI::IsMember({"mf", "adp"}));
  gen->add_option("-o,--output", s.output, "Output file (default stdout)");

  auto* oracle = app.add_subcommand("oracle", "Brute-force reference value");
  oracle->add_option("instance", s.instance, "Instance file")->required();
  oracle->add_option("--problem", s.problem, "Problem")->check(CLI::IsMember({"rf", "design"}));
  oracle->add_option("--arith", s.arith, "Arithmetic")->check(CLI::IsMember(ariths));
  oracle->add_option("--cap", s.cap, "Path enumeration cap")->check(CLI::PositiveNumber);
  oracle->add_option("--mode", s.mode, "Accepted for symmetry with solve-rf; ignored");
  oracle->add_option("--threads", s.threads, "Accepted for symmetry with solve-rf; ignored");
  oracle->add_option("--report-breakpoints", s.breakpoints_csv, "Write the breakpoint table as CSV");
  oracle->add_flag("--json", s.json, "JSON report");
  oracle->preparse_callback([&](std::size_t) { s.arith = "exact"; });
  eval->preparse_callback([&](std::size_t) { s.arith = "exact"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    const bool exact = s.arith == "exact";
    if (rf->parsed()) return exact ? solve_rf_command<Rational>(s, out) : solve_rf_command<double>(s, out);
    if (design->parsed()) {
      return exact ? solve_design_command<Rational>(s, out) : solve_design_command<double>(s, out);
    }
    if (eval->parsed()) return exact ? evaluate_command<Rational>(s, out) : evaluate_command<double>(s, out);
    if (gen->parsed()) return gen_reduction_command(s, out);
    return exact ? oracle_command<Rational>(s, out) : oracle_command<double>(s, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const OracleLimitError& e) {
    err << "error: instance too large for the oracle: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace robustflow::cli
