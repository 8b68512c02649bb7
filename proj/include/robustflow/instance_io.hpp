#pragma once

// Text formats.
//
// Instance, one record per line; lines starting with "c " are comments:
//
//   p rf|mf|adp <nodes> <arcs>
//   k <source> <sink> [demand]           one per commodity
//   a <id> <tail> <head> <u> <c> <gamma>  ids 1..arcs; c and gamma optional
//                                         for mf and adp
//   b <B_I> [B_F]                        required for rf
//
// Nodes and arc ids are 1-based in files and 0-based in memory. Numbers are
// integers, decimals, p/q fractions, or "inf". The canonical form written by
// serialize_instance lists comments, p, k, a (by id), b, and writes numbers
// as reduced fractions.
//
// Path flow:   path <index> <amount> <arc ids...>
// Plan:        z <arc id> <path index> <amount>
// Increase:    cplus <arc id> <value>

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "robustflow/interdiction.hpp"
#include "robustflow/network.hpp"

namespace robustflow {

enum class ProblemKind { rf, mf, adp };

const char* to_string(ProblemKind kind);

struct Instance {
  ProblemKind kind = ProblemKind::rf;
  Network<Rational> network;
  Budgets<Rational> budgets;
  std::vector<std::string> comments;  // without the leading "c "
};

/// Throws InputError("line N: ...") on syntax errors and
/// InputError("invalid instance: ...") on semantic ones.
Instance parse_instance(std::istream& in);
Instance read_instance(const std::string& path);

std::string serialize_instance(const Instance& instance);

/// FNV-1a over the canonical serialization without comments, as 16 hex
/// digits.
std::string instance_digest(const Instance& instance);

/// Path flows keep their file order through the returned index list.
struct IndexedFlow {
  PathFlow<Rational> flow;
  std::vector<Path> order;  // order[i] is the path with index i + 1
};

IndexedFlow parse_flow(std::istream& in, const Network<Rational>& network);
InterdictionPlan<Rational> parse_plan(std::istream& in, const IndexedFlow& flow);
std::vector<Rational> parse_increase(std::istream& in, const Network<Rational>& network);

template <Scalar T>
std::string format_flow_lines(const PathFlow<T>& flow);

}  // namespace robustflow
