#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dynevo::net {

enum class NodeKind : std::uint8_t { Input = 0, Hidden = 1, Output = 2 };

/// Node identifier. Assigned from a per-genome monotone counter and never reused.
enum class NodeId : std::uint32_t {};

constexpr std::uint32_t to_index(NodeId id) noexcept { return static_cast<std::uint32_t>(id); }

struct Node {
  NodeId id{};
  NodeKind kind = NodeKind::Input;
  int layer = 0;
  double bias = 0.0;  // meaningless for Input nodes
  std::vector<NodeId> in_nodes;   // connection creation order
  std::vector<NodeId> out_nodes;  // connection creation order
};

struct Connection {
  NodeId src{};
  NodeId dst{};
  double weight = 0.0;

  friend bool operator==(const Connection&, const Connection&) = default;
};

/// Recurrent network as a directed layered graph.
///
/// Layer 0 holds the inputs, layer `layer_count() - 1` the outputs, hidden
/// nodes live strictly in between and no hidden layer is ever empty. Nodes are
/// stored in ascending id order. The connection list is the single owner of
/// weights; each node's `in_nodes`/`out_nodes` mirror it in the same order.
///
/// The mutating members below are low-level graph edits: they keep the
/// adjacency lists consistent but do not enforce hidden-node liveness. The
/// mutation operators in mutations.hpp compose them and run cascade cleanup.
class DynamicNet {
 public:
  DynamicNet() = default;

  int d_input() const { return d_input_; }
  int d_output() const { return d_output_; }
  int layer_count() const { return layer_count_; }
  int output_layer() const { return layer_count_ - 1; }
  bool architecture_frozen() const { return frozen_; }
  std::uint32_t next_id() const { return next_id_; }

  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Connection> connections() const { return connections_; }

  const Node* find(NodeId id) const;
  const Node& node(NodeId id) const;
  bool has_connection(NodeId src, NodeId dst) const;
  const Connection* find_connection(NodeId src, NodeId dst) const;

  std::vector<NodeId> input_ids() const { return ids_of(NodeKind::Input); }
  std::vector<NodeId> hidden_ids() const { return ids_of(NodeKind::Hidden); }
  std::vector<NodeId> output_ids() const { return ids_of(NodeKind::Output); }
  /// Hidden and output ids, ascending.
  std::vector<NodeId> non_input_ids() const;
  std::size_t hidden_count() const;

  void add_connection(NodeId src, NodeId dst, double weight);
  void remove_connection(NodeId src, NodeId dst);
  NodeId add_node(NodeKind kind, int layer, double bias);
  /// Removes a hidden node and every incident connection.
  void remove_hidden_node(NodeId id);
  /// Shifts every node at layer >= `at` one layer up and grows the layer count.
  void insert_layer(int at);
  /// Drops empty hidden layers and renumbers the rest contiguously.
  /// Returns the number of layers removed.
  int remove_empty_layers();

  void set_bias(NodeId id, double bias);
  void set_weight(NodeId src, NodeId dst, double weight);

  /// Visits every parameter in canonical order: biases of non-input nodes by
  /// ascending id, then connection weights in connection order.
  template <typename F>
  void visit_parameters(F&& f) {
    for (auto& n : nodes_)
      if (n.kind != NodeKind::Input) f(n.bias);
    for (auto& c : connections_) f(c.weight);
  }
  template <typename F>
  void visit_parameters(F&& f) const {
    for (const auto& n : nodes_)
      if (n.kind != NodeKind::Input) f(n.bias);
    for (const auto& c : connections_) f(c.weight);
  }

  friend bool operator==(const DynamicNet& a, const DynamicNet& b);

 private:
  friend DynamicNet new_minimal(int d_input, int d_output);
  friend DynamicNet build_static(int d_input, int d_output);
  friend class GenomeCodec;

  Node& node_mut(NodeId id);
  std::vector<NodeId> ids_of(NodeKind kind) const;

  int d_input_ = 0;
  int d_output_ = 0;
  int layer_count_ = 0;
  bool frozen_ = false;
  std::uint32_t next_id_ = 0;
  std::vector<Node> nodes_;
  std::vector<Connection> connections_;
};

/// Inputs at layer 0, outputs at layer 1, no connections, zero biases.
DynamicNet new_minimal(int d_input, int d_output);

/// Frozen [d_input, 50, 50, d_output] recurrent baseline, all parameters zero.
/// Both hidden layers are fully self-connected (self-loops included); the
/// output layer has no recurrence.
DynamicNet build_static(int d_input, int d_output);

inline constexpr int kStaticHiddenWidth = 50;

/// Inputs plus every non-input node that has at least one in-node, ascending id.
std::vector<NodeId> receiving_nodes(const DynamicNet& net);

/// One (src, dst) entry per connection, grouped by ascending source id; a node
/// appears once per out-node.
std::vector<std::pair<NodeId, NodeId>> emitting_list(const DynamicNet& net);

/// One weight per connection plus one bias per non-input node.
std::size_t param_count(const DynamicNet& net);

/// Full structural audit. Returns one human-readable line per violated
/// invariant; empty means the genome is well formed.
std::vector<std::string> check_invariants(const DynamicNet& net);

}  // namespace dynevo::net
