#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <stdexcept>
#include <vector>

#include "dynevo/net/dynamic_net.hpp"
#include "dynevo/rng.hpp"

namespace dynevo::net {

enum class MutationKind : std::uint8_t {
  GrowConnection = 0,
  PruneConnection = 1,
  GrowNode = 2,
  PruneNode = 3,
};

std::string_view to_string(MutationKind kind);

struct MutationOutcome {
  MutationKind kind = MutationKind::GrowConnection;
  /// False only for a grow_connection that found no free pair.
  bool applied = false;
  /// Sampled nodes, in sampling order. For grow_node the created hidden node
  /// is appended last.
  std::vector<NodeId> nodes;
  /// Hidden nodes removed by cascade cleanup (the pruned node itself excluded).
  int cascade_removed = 0;
};

/// Thrown when a mutation is requested on a frozen architecture or when its
/// applicability precondition does not hold.
class MutationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Number of extra pair draws grow_connection makes after hitting an existing
/// connection before giving up.
inline constexpr int kGrowConnectionRetries = 16;

/// Parameters created by mutations are drawn from N(0, init_sigma^2).
MutationOutcome grow_connection(DynamicNet& net, RngStream& rng, double init_sigma = 1.0);
MutationOutcome prune_connection(DynamicNet& net, RngStream& rng);
MutationOutcome grow_node(DynamicNet& net, RngStream& rng, double init_sigma = 1.0);
MutationOutcome prune_node(DynamicNet& net, RngStream& rng);

/// Deletes hidden nodes lacking in-connections or out-connections until none
/// remain, then drops empty hidden layers. Returns the number of nodes removed.
int cascade_cleanup(DynamicNet& net);

/// Mutations currently applicable, in MutationKind order.
std::vector<MutationKind> applicable_mutations(const DynamicNet& net);

/// Samples one applicable mutation uniformly and applies it.
MutationOutcome mutate(DynamicNet& net, RngStream& rng, double init_sigma = 1.0);

/// Adds an independent N(0, sigma^2) draw to every weight and bias.
void perturb_parameters(DynamicNet& net, RngStream& rng, double sigma);

// Deterministic forms of the four mutations with every sampled choice given
// explicitly. The RNG-driven mutations above sample their choices and
// delegate here.

/// Creates src -> dst unless it already exists. Returns whether it was created.
bool apply_grow_connection(DynamicNet& net, NodeId src, NodeId dst, double weight);

/// Deletes src -> dst and runs cascade cleanup; returns cascade removals.
int apply_prune_connection(DynamicNet& net, NodeId src, NodeId dst);

struct GrowNodeParams {
  double bias = 0.0;
  double w_first = 0.0;
  double w_second = 0.0;
  double w_out = 0.0;
};

/// Layer the new hidden node of a grow_node(first, ..., third) lands on, and
/// whether a fresh layer is inserted at that index first.
struct NodePlacement {
  int layer = 0;
  bool insert_layer = false;
};
NodePlacement place_hidden_node(const DynamicNet& net, NodeId first, NodeId third);

/// Creates a hidden node fed by `first` and `second` and feeding `third`.
/// Connections that would duplicate an existing pair are skipped.
NodeId apply_grow_node(DynamicNet& net, NodeId first, NodeId second, NodeId third,
                       const GrowNodeParams& params);

/// Deletes a hidden node with all of its connections and runs cascade cleanup;
/// returns cascade removals.
int apply_prune_node(DynamicNet& net, NodeId hidden);

}  // namespace dynevo::net
