#pragma once

#include <cstdint>
#include <span>

#include "dynevo/envs/env.hpp"
#include "dynevo/envs/standardizer.hpp"
#include "dynevo/net/dynamic_net.hpp"

namespace dynevo::envs {

/// Maps non-negative network outputs to an action.
/// Discrete: argmax, lowest index on ties. Continuous: clip to [0, 1], then
/// scale affinely onto [low, high].
Action decode_action(std::span<const double> raw, const ActionSpace& space);

/// Runs one episode per seed and returns the mean accumulated reward.
///
/// The network's recurrent state and the environment are reset at the start
/// of every episode. When the task standardizes inputs, each observation
/// first updates `standardizer` and is then standardized by it.
double run_episode_set(const net::DynamicNet& net, const EnvSpec& spec,
                       RunningStandardizer& standardizer,
                       std::span<const std::uint64_t> episode_seeds);

}  // namespace dynevo::envs
