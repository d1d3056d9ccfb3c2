#include "dynevo/net/mutations.hpp"

#include <algorithm>

namespace dynevo::net {

namespace {

void require_mutable(const DynamicNet& net) {
  if (net.architecture_frozen()) throw MutationError("architecture is frozen");
}

}  // namespace

std::string_view to_string(MutationKind kind) {
  switch (kind) {
    case MutationKind::GrowConnection: return "grow_connection";
    case MutationKind::PruneConnection: return "prune_connection";
    case MutationKind::GrowNode: return "grow_node";
    case MutationKind::PruneNode: return "prune_node";
  }
  return "unknown";
}

bool apply_grow_connection(DynamicNet& net, NodeId src, NodeId dst, double weight) {
  if (net.has_connection(src, dst)) return false;
  net.add_connection(src, dst, weight);
  return true;
}

int apply_prune_connection(DynamicNet& net, NodeId src, NodeId dst) {
  net.remove_connection(src, dst);
  return cascade_cleanup(net);
}

NodePlacement place_hidden_node(const DynamicNet& net, NodeId first, NodeId third) {
  const int from = net.node(first).layer;
  const int to = net.node(third).layer;
  if (to > from) {
    const int target = from + 1;
    if (target == net.output_layer() || target == to) return {target, true};
    return {target, false};
  }
  const int target = from - 1;
  if (target <= 0 || target == to) return {from, true};
  return {target, false};
}

NodeId apply_grow_node(DynamicNet& net, NodeId first, NodeId second, NodeId third,
                       const GrowNodeParams& params) {
  if (first == second) throw MutationError("grow_node needs two distinct in-nodes");
  if (net.node(third).kind == NodeKind::Input) throw MutationError("grow_node target is an input");
  const NodePlacement where = place_hidden_node(net, first, third);
  if (where.insert_layer) net.insert_layer(where.layer);
  const NodeId hidden = net.add_node(NodeKind::Hidden, where.layer, params.bias);
  apply_grow_connection(net, first, hidden, params.w_first);
  apply_grow_connection(net, second, hidden, params.w_second);
  apply_grow_connection(net, hidden, third, params.w_out);
  return hidden;
}

int apply_prune_node(DynamicNet& net, NodeId hidden) {
  net.remove_hidden_node(hidden);
  return cascade_cleanup(net);
}

int cascade_cleanup(DynamicNet& net) {
  int removed = 0;
  for (;;) {
    std::vector<NodeId> dead;
    for (const auto& n : net.nodes())
      if (n.kind == NodeKind::Hidden && (n.in_nodes.empty() || n.out_nodes.empty()))
        dead.push_back(n.id);
    if (dead.empty()) break;
    for (NodeId id : dead) net.remove_hidden_node(id);
    removed += static_cast<int>(dead.size());
  }
  net.remove_empty_layers();
  return removed;
}

MutationOutcome grow_connection(DynamicNet& net, RngStream& rng, double init_sigma) {
  require_mutable(net);
  const auto sources = receiving_nodes(net);
  const auto targets = net.non_input_ids();
  MutationOutcome out{MutationKind::GrowConnection, false, {}, 0};
  for (int attempt = 0; attempt <= kGrowConnectionRetries; ++attempt) {
    const NodeId src = sources[rng.uniform_index(sources.size())];
    const NodeId dst = targets[rng.uniform_index(targets.size())];
    if (net.has_connection(src, dst)) continue;
    apply_grow_connection(net, src, dst, init_sigma * rng.normal());
    out.applied = true;
    out.nodes = {src, dst};
    return out;
  }
  return out;
}

MutationOutcome prune_connection(DynamicNet& net, RngStream& rng) {
  require_mutable(net);
  if (net.connections().empty()) throw MutationError("prune_connection on a net without connections");
  // Sample from the emitting list (a node once per out-node), then one of its
  // out-nodes.
  std::vector<NodeId> emitters;
  emitters.reserve(net.connections().size());
  for (const auto& n : net.nodes())
    emitters.insert(emitters.end(), n.out_nodes.size(), n.id);
  const NodeId src = emitters[rng.uniform_index(emitters.size())];
  const auto& outs = net.node(src).out_nodes;
  const NodeId dst = outs[rng.uniform_index(outs.size())];
  MutationOutcome out{MutationKind::PruneConnection, true, {src, dst}, 0};
  out.cascade_removed = apply_prune_connection(net, src, dst);
  return out;
}

MutationOutcome grow_node(DynamicNet& net, RngStream& rng, double init_sigma) {
  require_mutable(net);
  const auto receivers = receiving_nodes(net);
  if (receivers.size() < 2) throw MutationError("grow_node needs two receiving nodes");
  const auto targets = net.non_input_ids();
  const std::size_t i = rng.uniform_index(receivers.size());
  std::size_t j = rng.uniform_index(receivers.size() - 1);
  if (j >= i) ++j;
  const NodeId third = targets[rng.uniform_index(targets.size())];
  GrowNodeParams params;
  params.bias = init_sigma * rng.normal();
  params.w_first = init_sigma * rng.normal();
  params.w_second = init_sigma * rng.normal();
  params.w_out = init_sigma * rng.normal();
  const NodeId hidden = apply_grow_node(net, receivers[i], receivers[j], third, params);
  return {MutationKind::GrowNode, true, {receivers[i], receivers[j], third, hidden}, 0};
}

MutationOutcome prune_node(DynamicNet& net, RngStream& rng) {
  require_mutable(net);
  const auto hidden = net.hidden_ids();
  if (hidden.empty()) throw MutationError("prune_node on a net without hidden nodes");
  const NodeId victim = hidden[rng.uniform_index(hidden.size())];
  MutationOutcome out{MutationKind::PruneNode, true, {victim}, 0};
  out.cascade_removed = apply_prune_node(net, victim);
  return out;
}

std::vector<MutationKind> applicable_mutations(const DynamicNet& net) {
  std::vector<MutationKind> kinds{MutationKind::GrowConnection};
  if (!net.connections().empty()) kinds.push_back(MutationKind::PruneConnection);
  if (receiving_nodes(net).size() >= 2) kinds.push_back(MutationKind::GrowNode);
  if (net.hidden_count() > 0) kinds.push_back(MutationKind::PruneNode);
  return kinds;
}

MutationOutcome mutate(DynamicNet& net, RngStream& rng, double init_sigma) {
  require_mutable(net);
  const auto kinds = applicable_mutations(net);
  switch (kinds[rng.uniform_index(kinds.size())]) {
    case MutationKind::GrowConnection: return grow_connection(net, rng, init_sigma);
    case MutationKind::PruneConnection: return prune_connection(net, rng);
    case MutationKind::GrowNode: return grow_node(net, rng, init_sigma);
    case MutationKind::PruneNode: return prune_node(net, rng);
  }
  return {};
}

void perturb_parameters(DynamicNet& net, RngStream& rng, double sigma) {
  net.visit_parameters([&](double& p) { p += sigma * rng.normal(); });
}

}  // namespace dynevo::net
