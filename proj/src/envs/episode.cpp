#include "dynevo/envs/episode.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <stdexcept>
#include <vector>

#include "dynevo/net/forward.hpp"

namespace dynevo::envs {

Action decode_action(std::span<const double> raw, const ActionSpace& space) {
  if (raw.size() != action_arity(space))
    throw std::invalid_argument(fmt::format("decode_action: {} outputs for an action space of arity {}",
                                            raw.size(), action_arity(space)));
  if (std::holds_alternative<Discrete>(space)) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < raw.size(); ++i)
      if (raw[i] > raw[best]) best = i;
    return static_cast<int>(best);
  }
  const auto& box = std::get<Continuous>(space);
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    out[i] = std::clamp(raw[i], 0.0, 1.0) * (box.high[i] - box.low[i]) + box.low[i];
  return out;
}

double run_episode_set(const net::DynamicNet& net, const EnvSpec& spec,
                       RunningStandardizer& standardizer,
                       std::span<const std::uint64_t> episode_seeds) {
  if (net.d_input() != spec.obs_dim ||
      static_cast<std::size_t>(net.d_output()) != action_arity(spec.action_space))
    throw std::invalid_argument(fmt::format("network ({}, {}) does not fit {} ({}, {})",
                                            net.d_input(), net.d_output(), spec.name, spec.obs_dim,
                                            action_arity(spec.action_space)));
  if (episode_seeds.size() != static_cast<std::size_t>(spec.episodes_per_eval))
    throw std::invalid_argument(fmt::format("{} evaluates {} episodes, got {} seeds", spec.name,
                                            spec.episodes_per_eval, episode_seeds.size()));
  if (spec.standardize_inputs && standardizer.dim() != static_cast<std::size_t>(spec.obs_dim))
    throw std::invalid_argument("standardizer dimension does not match the observation size");

  net::CompiledNet policy(net);
  EnvInstance env(spec.task, episode_seeds.front());
  std::vector<double> inputs(static_cast<std::size_t>(spec.obs_dim));
  double total = 0.0;
  for (const std::uint64_t seed : episode_seeds) {
    env.reset(seed);
    policy.reset();
    double episode_return = 0.0;
    while (!env.done()) {
      const auto obs = env.observation();
      if (spec.standardize_inputs) {
        standardizer.update(obs);
        standardizer.apply(obs, inputs);
      } else {
        std::copy(obs.begin(), obs.end(), inputs.begin());
      }
      const auto raw = policy.step(inputs);
      episode_return += env.step(decode_action(raw, spec.action_space)).reward;
    }
    total += episode_return;
  }
  return total / static_cast<double>(episode_seeds.size());
}

}  // namespace dynevo::envs
