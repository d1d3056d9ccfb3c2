#include "dynevo/net/dynamic_net.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fmt/format.h>
#include <set>
#include <stdexcept>

namespace dynevo::net {

namespace {

void erase_value(std::vector<NodeId>& v, NodeId id) {
  auto it = std::find(v.begin(), v.end(), id);
  if (it != v.end()) v.erase(it);
}

bool same_node(const Node& a, const Node& b) {
  // Bias is compared bitwise so that -0.0 and NaN payloads survive round trips.
  return a.id == b.id && a.kind == b.kind && a.layer == b.layer &&
         std::bit_cast<std::uint64_t>(a.bias) == std::bit_cast<std::uint64_t>(b.bias) &&
         a.in_nodes == b.in_nodes && a.out_nodes == b.out_nodes;
}

}  // namespace

const Node* DynamicNet::find(NodeId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const Node& n, NodeId v) { return n.id < v; });
  return (it != nodes_.end() && it->id == id) ? &*it : nullptr;
}

const Node& DynamicNet::node(NodeId id) const {
  const Node* n = find(id);
  if (!n) throw std::out_of_range(fmt::format("unknown node {}", to_index(id)));
  return *n;
}

Node& DynamicNet::node_mut(NodeId id) { return const_cast<Node&>(node(id)); }

bool DynamicNet::has_connection(NodeId src, NodeId dst) const {
  const Node* d = find(dst);
  return d && std::find(d->in_nodes.begin(), d->in_nodes.end(), src) != d->in_nodes.end();
}

const Connection* DynamicNet::find_connection(NodeId src, NodeId dst) const {
  auto it = std::find_if(connections_.begin(), connections_.end(),
                         [&](const Connection& c) { return c.src == src && c.dst == dst; });
  return it == connections_.end() ? nullptr : &*it;
}

std::vector<NodeId> DynamicNet::ids_of(NodeKind kind) const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_)
    if (n.kind == kind) out.push_back(n.id);
  return out;
}

std::vector<NodeId> DynamicNet::non_input_ids() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_)
    if (n.kind != NodeKind::Input) out.push_back(n.id);
  return out;
}

std::size_t DynamicNet::hidden_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const Node& n) { return n.kind == NodeKind::Hidden; }));
}

void DynamicNet::add_connection(NodeId src, NodeId dst, double weight) {
  Node& d = node_mut(dst);
  if (d.kind == NodeKind::Input) throw std::invalid_argument("connection into an input node");
  if (has_connection(src, dst))
    throw std::invalid_argument(
        fmt::format("duplicate connection {} -> {}", to_index(src), to_index(dst)));
  Node& s = node_mut(src);
  s.out_nodes.push_back(dst);
  d.in_nodes.push_back(src);
  connections_.push_back({src, dst, weight});
}

void DynamicNet::remove_connection(NodeId src, NodeId dst) {
  auto it = std::find_if(connections_.begin(), connections_.end(),
                         [&](const Connection& c) { return c.src == src && c.dst == dst; });
  if (it == connections_.end())
    throw std::invalid_argument(
        fmt::format("no connection {} -> {}", to_index(src), to_index(dst)));
  connections_.erase(it);
  erase_value(node_mut(src).out_nodes, dst);
  erase_value(node_mut(dst).in_nodes, src);
}

NodeId DynamicNet::add_node(NodeKind kind, int layer, double bias) {
  const NodeId id{next_id_++};
  Node n;
  n.id = id;
  n.kind = kind;
  n.layer = layer;
  n.bias = bias;
  nodes_.push_back(std::move(n));  // ids are monotone, order is preserved
  return id;
}

void DynamicNet::remove_hidden_node(NodeId id) {
  const Node& n = node(id);
  if (n.kind != NodeKind::Hidden) throw std::invalid_argument("only hidden nodes can be removed");
  std::vector<std::pair<NodeId, NodeId>> incident;
  for (NodeId src : n.in_nodes) incident.emplace_back(src, id);
  for (NodeId dst : n.out_nodes)
    if (dst != id) incident.emplace_back(id, dst);
  for (auto [s, d] : incident) remove_connection(s, d);
  nodes_.erase(std::find_if(nodes_.begin(), nodes_.end(),
                            [&](const Node& x) { return x.id == id; }));
}

void DynamicNet::insert_layer(int at) {
  if (at <= 0 || at > output_layer()) throw std::invalid_argument("insert_layer out of range");
  for (auto& n : nodes_)
    if (n.layer >= at) ++n.layer;
  ++layer_count_;
}

int DynamicNet::remove_empty_layers() {
  std::vector<int> population(static_cast<std::size_t>(layer_count_), 0);
  for (const auto& n : nodes_) ++population[static_cast<std::size_t>(n.layer)];
  std::vector<int> remap(population.size());
  int next = 0;
  for (std::size_t l = 0; l < population.size(); ++l) {
    const bool keep = l == 0 || l + 1 == population.size() || population[l] > 0;
    remap[l] = next;
    if (keep) ++next;
  }
  const int removed = layer_count_ - next;
  if (removed == 0) return 0;
  for (auto& n : nodes_) n.layer = remap[static_cast<std::size_t>(n.layer)];
  layer_count_ = next;
  return removed;
}

void DynamicNet::set_bias(NodeId id, double bias) {
  Node& n = node_mut(id);
  if (n.kind == NodeKind::Input) throw std::invalid_argument("input nodes carry no bias");
  n.bias = bias;
}

void DynamicNet::set_weight(NodeId src, NodeId dst, double weight) {
  auto* c = const_cast<Connection*>(find_connection(src, dst));
  if (!c) throw std::invalid_argument("set_weight: no such connection");
  c->weight = weight;
}

bool operator==(const DynamicNet& a, const DynamicNet& b) {
  if (a.d_input_ != b.d_input_ || a.d_output_ != b.d_output_ ||
      a.layer_count_ != b.layer_count_ || a.frozen_ != b.frozen_ || a.next_id_ != b.next_id_ ||
      a.nodes_.size() != b.nodes_.size() || a.connections_.size() != b.connections_.size())
    return false;
  for (std::size_t i = 0; i < a.nodes_.size(); ++i)
    if (!same_node(a.nodes_[i], b.nodes_[i])) return false;
  for (std::size_t i = 0; i < a.connections_.size(); ++i) {
    const auto& x = a.connections_[i];
    const auto& y = b.connections_[i];
    if (x.src != y.src || x.dst != y.dst ||
        std::bit_cast<std::uint64_t>(x.weight) != std::bit_cast<std::uint64_t>(y.weight))
      return false;
  }
  return true;
}

DynamicNet new_minimal(int d_input, int d_output) {
  if (d_input < 1 || d_output < 1)
    throw std::invalid_argument(fmt::format("invalid dimensions ({}, {})", d_input, d_output));
  DynamicNet net;
  net.d_input_ = d_input;
  net.d_output_ = d_output;
  net.layer_count_ = 2;
  for (int i = 0; i < d_input; ++i) net.add_node(NodeKind::Input, 0, 0.0);
  for (int i = 0; i < d_output; ++i) net.add_node(NodeKind::Output, 1, 0.0);
  return net;
}

DynamicNet build_static(int d_input, int d_output) {
  DynamicNet net = new_minimal(d_input, d_output);
  net.insert_layer(1);
  net.insert_layer(1);
  std::vector<NodeId> h1, h2;
  for (int i = 0; i < kStaticHiddenWidth; ++i) h1.push_back(net.add_node(NodeKind::Hidden, 1, 0.0));
  for (int i = 0; i < kStaticHiddenWidth; ++i) h2.push_back(net.add_node(NodeKind::Hidden, 2, 0.0));
  for (NodeId in : net.input_ids())
    for (NodeId h : h1) net.add_connection(in, h, 0.0);
  for (NodeId a : h1)
    for (NodeId b : h1) net.add_connection(a, b, 0.0);
  for (NodeId a : h1)
    for (NodeId b : h2) net.add_connection(a, b, 0.0);
  for (NodeId a : h2)
    for (NodeId b : h2) net.add_connection(a, b, 0.0);
  for (NodeId a : h2)
    for (NodeId out : net.output_ids()) net.add_connection(a, out, 0.0);
  net.frozen_ = true;
  return net;
}

std::vector<NodeId> receiving_nodes(const DynamicNet& net) {
  std::vector<NodeId> out;
  for (const auto& n : net.nodes())
    if (n.kind == NodeKind::Input || !n.in_nodes.empty()) out.push_back(n.id);
  return out;
}

std::vector<std::pair<NodeId, NodeId>> emitting_list(const DynamicNet& net) {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(net.connections().size());
  for (const auto& n : net.nodes())
    for (NodeId dst : n.out_nodes) out.emplace_back(n.id, dst);
  return out;
}

std::size_t param_count(const DynamicNet& net) {
  std::size_t biases = 0;
  for (const auto& n : net.nodes())
    if (n.kind != NodeKind::Input) ++biases;
  return biases + net.connections().size();
}

std::vector<std::string> check_invariants(const DynamicNet& net) {
  std::vector<std::string> errs;
  const int last = net.layer_count() - 1;
  if (net.layer_count() < 2) errs.push_back("layer_count below 2");

  int inputs = 0, outputs = 0;
  std::vector<int> layer_pop(static_cast<std::size_t>(std::max(net.layer_count(), 0)), 0);
  std::uint32_t prev_id = 0;
  bool first = true;
  for (const auto& n : net.nodes()) {
    const auto id = to_index(n.id);
    if (!first && id <= prev_id) errs.push_back(fmt::format("node ids not ascending at {}", id));
    if (id >= net.next_id()) errs.push_back(fmt::format("node {} beyond id counter", id));
    first = false;
    prev_id = id;
    if (n.layer < 0 || n.layer > last) {
      errs.push_back(fmt::format("node {} layer {} out of range", id, n.layer));
      continue;
    }
    ++layer_pop[static_cast<std::size_t>(n.layer)];
    switch (n.kind) {
      case NodeKind::Input:
        ++inputs;
        if (n.layer != 0) errs.push_back(fmt::format("input {} not at layer 0", id));
        if (!n.in_nodes.empty()) errs.push_back(fmt::format("input {} has in-nodes", id));
        break;
      case NodeKind::Output:
        ++outputs;
        if (n.layer != last) errs.push_back(fmt::format("output {} not at last layer", id));
        break;
      case NodeKind::Hidden:
        if (n.layer == 0 || n.layer == last)
          errs.push_back(fmt::format("hidden {} on boundary layer {}", id, n.layer));
        if (n.in_nodes.empty()) errs.push_back(fmt::format("hidden {} has no in-connection", id));
        if (n.out_nodes.empty()) errs.push_back(fmt::format("hidden {} has no out-connection", id));
        break;
    }
    if (n.kind != NodeKind::Input && !std::isfinite(n.bias))
      errs.push_back(fmt::format("node {} bias not finite", id));
  }
  if (inputs != net.d_input()) errs.push_back("input node count differs from d_input");
  if (outputs != net.d_output()) errs.push_back("output node count differs from d_output");
  for (int l = 1; l < last; ++l)
    if (layer_pop[static_cast<std::size_t>(l)] == 0)
      errs.push_back(fmt::format("hidden layer {} is empty", l));

  std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (const auto& c : net.connections()) {
    const Node* s = net.find(c.src);
    const Node* d = net.find(c.dst);
    if (!s || !d) {
      errs.push_back(fmt::format("connection {} -> {} references a missing node",
                                 to_index(c.src), to_index(c.dst)));
      continue;
    }
    if (d->kind == NodeKind::Input)
      errs.push_back(fmt::format("connection into input {}", to_index(c.dst)));
    if (!pairs.emplace(to_index(c.src), to_index(c.dst)).second)
      errs.push_back(fmt::format("duplicate connection {} -> {}", to_index(c.src), to_index(c.dst)));
    if (!std::isfinite(c.weight)) errs.push_back("connection weight not finite");
  }
  // Adjacency lists must be exactly the connection list filtered per node.
  for (const auto& n : net.nodes()) {
    std::vector<NodeId> in, out;
    for (const auto& c : net.connections()) {
      if (c.dst == n.id) in.push_back(c.src);
      if (c.src == n.id) out.push_back(c.dst);
    }
    if (in != n.in_nodes) errs.push_back(fmt::format("node {} in_nodes inconsistent", to_index(n.id)));
    if (out != n.out_nodes)
      errs.push_back(fmt::format("node {} out_nodes inconsistent", to_index(n.id)));
  }
  return errs;
}

}  // namespace dynevo::net
