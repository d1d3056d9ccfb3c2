#include "dynevo/net/forward.hpp"

#include <algorithm>
#include <cstring>
#include <fmt/format.h>
#include <numeric>
#include <stdexcept>

namespace dynevo::net {

PassState reset_state(const DynamicNet& net) {
  PassState s;
  for (const auto& n : net.nodes())
    if (n.kind != NodeKind::Input) s.prev_output.emplace(n.id, 0.0);
  return s;
}

CompiledNet::CompiledNet(const DynamicNet& net, const simd::Kernels& kernels)
    : kernels_(&kernels), n_(net.nodes().size()) {
  const auto nodes = net.nodes();
  slot_ids_.reserve(n_);
  for (const auto& n : nodes) slot_ids_.push_back(n.id);
  auto slot_of = [&](NodeId id) {
    auto it = std::lower_bound(slot_ids_.begin(), slot_ids_.end(), id);
    return static_cast<std::uint32_t>(it - slot_ids_.begin());
  };

  std::vector<std::uint32_t> order;
  for (std::uint32_t i = 0; i < n_; ++i) {
    switch (nodes[i].kind) {
      case NodeKind::Input: input_slots_.push_back(i); break;
      case NodeKind::Output: output_slots_.push_back(i); [[fallthrough]];
      case NodeKind::Hidden: order.push_back(i); break;
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return nodes[a].layer < nodes[b].layer; });

  // Incoming weights per destination, in in_nodes order.
  std::vector<std::vector<double>> in_weights(n_);
  for (std::uint32_t i = 0; i < n_; ++i) in_weights[i].resize(nodes[i].in_nodes.size());
  for (const auto& c : net.connections()) {
    const auto d = slot_of(c.dst);
    const auto& ins = nodes[d].in_nodes;
    const auto k = std::find(ins.begin(), ins.end(), c.src) - ins.begin();
    in_weights[d][static_cast<std::size_t>(k)] = c.weight;
  }

  units_.reserve(order.size());
  for (std::uint32_t u : order) {
    const Node& dst = nodes[u];
    Unit unit{u, static_cast<std::uint32_t>(weights_.size()),
              static_cast<std::uint32_t>(dst.in_nodes.size()), dst.bias};
    for (std::size_t k = 0; k < dst.in_nodes.size(); ++k) {
      const auto s = slot_of(dst.in_nodes[k]);
      const bool same_pass = nodes[s].layer < dst.layer;
      weights_.push_back(in_weights[u][k]);
      sources_.push_back(static_cast<std::int32_t>(same_pass ? s : s + n_));
    }
    units_.push_back(unit);
  }
  values_.assign(2 * n_, 0.0);
  outputs_.assign(output_slots_.size(), 0.0);
}

void CompiledNet::reset() { std::fill(values_.begin() + static_cast<std::ptrdiff_t>(n_), values_.end(), 0.0); }

std::span<const double> CompiledNet::step(std::span<const double> inputs) {
  if (inputs.size() != input_slots_.size())
    throw std::invalid_argument(
        fmt::format("forward: expected {} inputs, got {}", input_slots_.size(), inputs.size()));
  double* cur = values_.data();
  for (std::size_t i = 0; i < inputs.size(); ++i) cur[input_slots_[i]] = inputs[i];
  for (const Unit& u : units_) {
    const double z = u.bias + kernels_->dot_gather(weights_.data() + u.begin,
                                                   sources_.data() + u.begin, cur, u.count);
    cur[u.slot] = z > 0.0 ? z : 0.0;
  }
  std::memcpy(cur + n_, cur, n_ * sizeof(double));
  for (std::size_t i = 0; i < output_slots_.size(); ++i) outputs_[i] = cur[output_slots_[i]];
  return outputs_;
}

PassState CompiledNet::state() const {
  PassState s;
  std::vector<bool> is_input(n_, false);
  for (auto i : input_slots_) is_input[i] = true;
  for (std::size_t i = 0; i < n_; ++i)
    if (!is_input[i]) s.prev_output.emplace(slot_ids_[i], values_[n_ + i]);
  return s;
}

void CompiledNet::load_state(const PassState& state) {
  reset();
  for (std::size_t i = 0; i < n_; ++i) {
    auto it = state.prev_output.find(slot_ids_[i]);
    if (it != state.prev_output.end()) values_[n_ + i] = it->second;
  }
  for (auto i : input_slots_) values_[n_ + i] = 0.0;
}

std::vector<double> forward(const DynamicNet& net, PassState& state,
                            std::span<const double> inputs) {
  CompiledNet compiled(net);
  compiled.load_state(state);
  auto out = compiled.step(inputs);
  state = compiled.state();
  return {out.begin(), out.end()};
}

}  // namespace dynevo::net
