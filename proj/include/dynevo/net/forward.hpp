#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "dynevo/net/dynamic_net.hpp"
#include "dynevo/simd/kernels.hpp"

namespace dynevo::net {

/// Activations from the previous forward pass, one entry per non-input node.
struct PassState {
  std::map<NodeId, double> prev_output;

  friend bool operator==(const PassState&, const PassState&) = default;
};

/// Zero activations for every non-input node of `net`.
PassState reset_state(const DynamicNet& net);

/// Flattened, execution-ready copy of a DynamicNet.
///
/// Activations live in one buffer of 2N values: slots [0, N) hold the current
/// pass, slots [N, 2N) the previous pass. Each non-input node is a unit whose
/// in-connections are stored as (weight, slot) pairs, with the slot pointing
/// into the current half when the source sits on a strictly lower layer and
/// into the previous half otherwise. A pass is then one gathered dot product
/// per unit, processed in ascending layer order.
class CompiledNet {
 public:
  explicit CompiledNet(const DynamicNet& net,
                       const simd::Kernels& kernels = simd::active_kernels());

  /// Zeroes the previous-pass activations.
  void reset();

  /// Runs one pass. The returned span is valid until the next call.
  std::span<const double> step(std::span<const double> inputs);

  PassState state() const;
  /// Entries for unknown nodes are ignored; missing entries read as 0.
  void load_state(const PassState& state);

  std::size_t input_size() const { return input_slots_.size(); }
  std::size_t output_size() const { return output_slots_.size(); }

 private:
  struct Unit {
    std::uint32_t slot;
    std::uint32_t begin;
    std::uint32_t count;
    double bias;
  };

  const simd::Kernels* kernels_;
  std::size_t n_ = 0;
  std::vector<NodeId> slot_ids_;
  std::vector<double> values_;
  std::vector<Unit> units_;
  std::vector<double> weights_;
  std::vector<std::int32_t> sources_;
  std::vector<std::uint32_t> input_slots_;
  std::vector<std::uint32_t> output_slots_;
  std::vector<double> outputs_;
};

/// One pass of `net` from `state`; updates `state` in place and returns the
/// output activations in output-node creation order.
std::vector<double> forward(const DynamicNet& net, PassState& state,
                            std::span<const double> inputs);

}  // namespace dynevo::net
