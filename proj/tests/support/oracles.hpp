#pragma once

// Independent reference implementations used to cross-check the library.
// None of these share code paths with the code they check.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dynevo/envs/env.hpp"
#include "dynevo/net/dynamic_net.hpp"

namespace testsupport {

using dynevo::net::DynamicNet;
using dynevo::net::NodeId;

// ------------------------------------------------------------------ forward

/// Two-buffer interpreter: a map of previous-pass outputs and a map of the
/// current pass. Every node walks the full connection list to find its inputs.
class ReferenceInterpreter {
 public:
  explicit ReferenceInterpreter(const DynamicNet& net);
  std::vector<double> step(const std::vector<double>& inputs);

 private:
  const DynamicNet& net_;
  std::map<std::uint32_t, double> prev_;
};

// ------------------------------------------------------------------ cascade

/// Plain edge-set model of a net for the cascade oracle.
struct GraphModel {
  struct NodeInfo {
    dynevo::net::NodeKind kind;
    int layer;
  };
  std::map<std::uint32_t, NodeInfo> nodes;
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  int layer_count = 0;

  static GraphModel of(const DynamicNet& net);
  friend bool operator==(const GraphModel& a, const GraphModel& b);
};

/// Recomputes "every hidden node has an in-edge and an out-edge" from scratch
/// each round, deletes all violators at once, repeats to fixpoint, then
/// renumbers layers densely. Returns the number of nodes removed.
int cascade_oracle(GraphModel& g);

// ---------------------------------------------------------------------- DOT

struct DotGraph {
  std::string name;
  bool directed = false;
  std::map<std::string, std::map<std::string, std::string>> nodes;
  struct Edge {
    std::string from, to;
    std::map<std::string, std::string> attrs;
  };
  std::vector<Edge> edges;
  /// Subgraph name -> node ids declared inside it.
  std::map<std::string, std::vector<std::string>> subgraphs;
  std::map<std::string, std::map<std::string, std::string>> subgraph_attrs;
};

/// Recursive-descent parser for the DOT language (graph/digraph, node, edge,
/// attribute and subgraph statements, quoted and unquoted ids, comments).
/// Throws std::runtime_error with a position on syntax errors.
DotGraph parse_dot(const std::string& text);

// --------------------------------------------------------------- statistics

/// Pearson statistic against equal expected counts.
double chi_square_uniform(const std::vector<long>& counts);
/// Upper quantile of the chi-square distribution at significance `p`.
double chi_square_critical(int degrees_of_freedom, double p);

// ----------------------------------------------------------------- nets

/// Net shaped by `mutations` random mutations and perturbations, with
/// parameters drawn at scale `sigma`.
DynamicNet random_net(int d_in, int d_out, int mutations, std::uint64_t seed, double sigma = 1.0);

/// Arbitrary layered graph built with the low-level edits, without the
/// liveness invariant: hidden nodes may lack inputs or outputs.
DynamicNet random_raw_net(int total_nodes, int edges, std::uint64_t seed);

// ----------------------------------------------------------------- golden

struct GoldenStep {
  int step = 0;
  double action = 0.0;
  std::vector<double> state;
  double reward = 0.0;
  bool terminated = false;
};

struct GoldenTrajectory {
  std::string task;
  std::vector<double> initial;
  std::vector<GoldenStep> steps;
};

GoldenTrajectory load_golden(const std::string& path);

/// Directory holding the recorded trajectories.
std::string golden_dir();

/// Replays a recorded trajectory and returns the largest absolute deviation
/// over every state component and reward, or +inf on a termination mismatch.
double golden_max_deviation(const GoldenTrajectory& g);

}  // namespace testsupport
