#include "robustflow/instance_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "robustflow/error.hpp"

namespace robustflow {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(std::move(t));
  return tokens;
}

class LineError {
 public:
  explicit LineError(std::size_t line) : line_(line) {}
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("line " + std::to_string(line_) + ": " + what);
  }

 private:
  std::size_t line_;
};

std::size_t parse_index(const std::string& token, std::size_t upper, const char* what,
                        const LineError& at) {
  std::size_t value = 0;
  std::size_t used = 0;
  try {
    value = std::stoull(token, &used);
  } catch (const std::exception&) {
    at.fail(std::string("bad ") + what + " '" + token + "'");
  }
  if (used != token.size() || value < 1 || value > upper) {
    at.fail(std::string("bad ") + what + " '" + token + "'");
  }
  return value - 1;
}

Rational number(const std::string& token, const LineError& at) {
  try {
    return parse_rational(token);
  } catch (const std::invalid_argument&) {
    at.fail("bad number '" + token + "'");
  }
}

Extended<Rational> extended_number(const std::string& token, const LineError& at) {
  try {
    return parse_extended(token);
  } catch (const std::invalid_argument&) {
    at.fail("bad number '" + token + "'");
  }
}

bool is_comment(const std::string& line) { return line == "c" || line.rfind("c ", 0) == 0; }

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

const char* to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::mf:
      return "mf";
    case ProblemKind::adp:
      return "adp";
    default:
      return "rf";
  }
}

Instance parse_instance(std::istream& in) {
  Instance out;
  bool have_header = false;
  bool have_budget = false;
  std::size_t declared_arcs = 0;
  std::vector<bool> seen_arc;
  std::string line;
  for (std::size_t number_of_line = 1; std::getline(in, line); ++number_of_line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const LineError at(number_of_line);
    if (is_comment(line)) {
      out.comments.push_back(line.size() > 2 ? line.substr(2) : std::string());
      continue;
    }
    if (is_blank(line)) continue;
    const auto tok = split(line);
    const std::string& tag = tok[0];

    if (tag == "p") {
      if (have_header) at.fail("duplicate problem line");
      if (tok.size() != 4) at.fail("expected 'p <kind> <nodes> <arcs>'");
      if (tok[1] == "rf") {
        out.kind = ProblemKind::rf;
      } else if (tok[1] == "mf") {
        out.kind = ProblemKind::mf;
      } else if (tok[1] == "adp") {
        out.kind = ProblemKind::adp;
      } else {
        at.fail("unknown problem kind '" + tok[1] + "'");
      }
      const auto nodes = parse_index(tok[2], SIZE_MAX - 1, "node count", at) + 1;
      declared_arcs = tok[3] == "0" ? 0 : parse_index(tok[3], SIZE_MAX - 1, "arc count", at) + 1;
      out.network.node_count = nodes;
      out.network.arcs.resize(declared_arcs);
      seen_arc.assign(declared_arcs, false);
      have_header = true;
      continue;
    }
    if (!have_header) at.fail("expected problem line first");

    const std::size_t n = out.network.node_count;
    if (tag == "k") {
      if (tok.size() != 3 && tok.size() != 4) at.fail("expected 'k <source> <sink> [demand]'");
      Commodity<Rational> k;
      k.source = parse_index(tok[1], n, "node", at);
      k.sink = parse_index(tok[2], n, "node", at);
      if (tok.size() == 4) k.demand = number(tok[3], at);
      out.network.commodities.push_back(std::move(k));
    } else if (tag == "a") {
      const bool short_form = out.kind != ProblemKind::rf && tok.size() == 5;
      if (tok.size() != 7 && !short_form) {
        at.fail(out.kind == ProblemKind::rf ? "expected 'a <id> <tail> <head> <u> <c> <gamma>'"
                                            : "expected 'a <id> <tail> <head> <u> [<c> <gamma>]'");
      }
      const auto id = parse_index(tok[1], declared_arcs, "arc id", at);
      if (seen_arc[id]) at.fail("duplicate arc id " + tok[1]);
      seen_arc[id] = true;
      auto& arc = out.network.arcs[id];
      arc.tail = parse_index(tok[2], n, "node", at);
      arc.head = parse_index(tok[3], n, "node", at);
      arc.capacity = extended_number(tok[4], at);
      arc.cost = short_form ? Extended<Rational>::infinity() : extended_number(tok[5], at);
      arc.price = short_form ? Extended<Rational>(0) : extended_number(tok[6], at);
    } else if (tag == "b") {
      if (have_budget) at.fail("duplicate budget line");
      if (tok.size() != 2 && tok.size() != 3) at.fail("expected 'b <B_I> [B_F]'");
      out.budgets.interdictor = number(tok[1], at);
      if (tok.size() == 3) out.budgets.flow_player = number(tok[2], at);
      have_budget = true;
    } else {
      at.fail("unknown line type '" + tag + "'");
    }
  }

  if (!have_header) throw InputError("missing problem line");
  for (std::size_t e = 0; e < declared_arcs; ++e) {
    if (!seen_arc[e]) throw InputError("arc " + std::to_string(e + 1) + " is not defined");
  }
  if (out.kind == ProblemKind::rf) {
    if (!have_budget) throw InputError("missing budget line");
    const auto problems = validate_instance(out.network, out.budgets);
    if (!problems.empty()) throw InputError("invalid instance: " + problems.front());
  }
  return out;
}

Instance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse_instance(in);
}

std::string serialize_instance(const Instance& instance) {
  std::ostringstream out;
  for (const auto& c : instance.comments) out << (c.empty() ? "c" : "c " + c) << '\n';
  const auto& net = instance.network;
  out << "p " << to_string(instance.kind) << ' ' << net.node_count << ' ' << net.arcs.size()
      << '\n';
  for (const auto& k : net.commodities) {
    out << "k " << k.source + 1 << ' ' << k.sink + 1;
    if (k.demand) out << ' ' << format_rational(*k.demand);
    out << '\n';
  }
  for (ArcId e = 0; e < net.arcs.size(); ++e) {
    const auto& a = net.arcs[e];
    out << "a " << e + 1 << ' ' << a.tail + 1 << ' ' << a.head + 1 << ' '
        << format_extended(a.capacity);
    if (instance.kind == ProblemKind::rf) {
      out << ' ' << format_extended(a.cost) << ' ' << format_extended(a.price);
    }
    out << '\n';
  }
  if (instance.kind == ProblemKind::rf || instance.budgets.interdictor != 0 ||
      instance.budgets.flow_player) {
    out << "b " << format_rational(instance.budgets.interdictor);
    if (instance.budgets.flow_player) out << ' ' << format_rational(*instance.budgets.flow_player);
    out << '\n';
  }
  return out.str();
}

std::string instance_digest(const Instance& instance) {
  Instance bare = instance;
  bare.comments.clear();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_instance(bare)) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, hash >>= 4) out[i] = hex[hash & 0xf];
  return out;
}

IndexedFlow parse_flow(std::istream& in, const Network<Rational>& network) {
  IndexedFlow out;
  std::vector<std::optional<std::pair<Path, Rational>>> slots;
  std::string line;
  for (std::size_t number_of_line = 1; std::getline(in, line); ++number_of_line) {
    const LineError at(number_of_line);
    if (is_comment(line) || is_blank(line)) continue;
    const auto tok = split(line);
    if (tok[0] != "path") continue;  // solver reports interleave other records
    if (tok.size() < 4) at.fail("expected 'path <index> <amount> <arc ids...>'");
    const auto index = parse_index(tok[1], SIZE_MAX - 1, "path index", at);
    Path path;
    for (std::size_t i = 3; i < tok.size(); ++i) {
      path.push_back(parse_index(tok[i], network.arcs.size(), "arc id", at));
    }
    if (!is_valid_path(path, network)) at.fail("not a terminal-to-terminal path");
    if (slots.size() <= index) slots.resize(index + 1);
    if (slots[index]) at.fail("duplicate path index " + tok[1]);
    slots[index] = std::pair(std::move(path), number(tok[2], at));
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) throw InputError("path index " + std::to_string(i + 1) + " is missing");
    if (out.flow.count(slots[i]->first)) {
      throw InputError("path " + format_path(slots[i]->first) + " listed twice");
    }
    if (is_negative(slots[i]->second)) throw InputError("negative path flow");
    out.order.push_back(slots[i]->first);
    out.flow.emplace(slots[i]->first, slots[i]->second);
  }
  return out;
}

InterdictionPlan<Rational> parse_plan(std::istream& in, const IndexedFlow& flow) {
  InterdictionPlan<Rational> plan;
  std::string line;
  for (std::size_t number_of_line = 1; std::getline(in, line); ++number_of_line) {
    const LineError at(number_of_line);
    if (is_comment(line) || is_blank(line)) continue;
    const auto tok = split(line);
    if (tok[0] != "z" || tok.size() != 4) at.fail("expected 'z <arc id> <path index> <amount>'");
    const auto arc = parse_index(tok[1], SIZE_MAX - 1, "arc id", at);
    const auto index = parse_index(tok[2], flow.order.size(), "path index", at);
    const auto amount = number(tok[3], at);
    if (amount < 0) at.fail("negative amount");
    plan.steals.push_back({arc, flow.order[index], amount});
  }
  return plan;
}

std::vector<Rational> parse_increase(std::istream& in, const Network<Rational>& network) {
  std::vector<Rational> increase(network.arcs.size(), Rational(0));
  std::string line;
  for (std::size_t number_of_line = 1; std::getline(in, line); ++number_of_line) {
    const LineError at(number_of_line);
    if (is_comment(line) || is_blank(line)) continue;
    const auto tok = split(line);
    if (tok[0] != "cplus" || tok.size() != 3) at.fail("expected 'cplus <arc id> <value>'");
    increase[parse_index(tok[1], network.arcs.size(), "arc id", at)] = number(tok[2], at);
  }
  return increase;
}

template <Scalar T>
std::string format_flow_lines(const PathFlow<T>& flow) {
  std::ostringstream out;
  std::size_t index = 1;
  for (const auto& [path, x] : flow) {
    out << "path " << index++ << ' ' << format_scalar(x) << ' ' << format_path(path) << '\n';
  }
  return out.str();
}

template std::string format_flow_lines(const PathFlow<double>&);
template std::string format_flow_lines(const PathFlow<Rational>&);

}  // namespace robustflow
