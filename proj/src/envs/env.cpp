#include "dynevo/envs/env.hpp"

#include <fmt/format.h>

#include "dynevo/envs/physics.hpp"

namespace dynevo::envs {

std::string_view task_name(Task task) {
  switch (task) {
    case Task::CartPole: return "CartPole-v1";
    case Task::Acrobot: return "Acrobot-v1";
    case Task::MountainCar: return "MountainCar-v0";
    case Task::MountainCarContinuous: return "MountainCarContinuous-v0";
    case Task::Pendulum: return "Pendulum-v1";
  }
  return "unknown";
}

Task parse_task(std::string_view name) {
  for (Task t : kAllTasks)
    if (task_name(t) == name) return t;
  std::string supported;
  for (Task t : kAllTasks) {
    if (!supported.empty()) supported += ", ";
    supported += task_name(t);
  }
  throw UnsupportedTask(
      fmt::format("unsupported task '{}'; supported tasks: {}", name, supported));
}

std::size_t action_arity(const ActionSpace& space) {
  if (const auto* d = std::get_if<Discrete>(&space)) return static_cast<std::size_t>(d->n);
  return std::get<Continuous>(space).low.size();
}

EnvSpec env_spec(Task task) {
  EnvSpec s;
  s.task = task;
  s.name = std::string(task_name(task));
  switch (task) {
    case Task::CartPole:
      s.obs_dim = 4;
      s.action_space = Discrete{2};
      s.max_steps = 500;
      break;
    case Task::Acrobot:
      s.obs_dim = 6;
      s.action_space = Discrete{3};
      s.max_steps = 500;
      break;
    case Task::MountainCar:
      s.obs_dim = 2;
      s.action_space = Discrete{3};
      s.max_steps = 200;
      break;
    case Task::MountainCarContinuous:
      s.obs_dim = 2;
      s.action_space = Continuous{{-1.0}, {1.0}};
      s.max_steps = 999;
      break;
    case Task::Pendulum:
      s.obs_dim = 3;
      s.action_space = Continuous{{-2.0}, {2.0}};
      s.max_steps = 200;
      s.episodes_per_eval = 5;
      s.standardize_inputs = true;
      break;
  }
  return s;
}

EnvInstance::EnvInstance(Task task, std::uint64_t seed)
    : spec_(env_spec(task)), obs_(static_cast<std::size_t>(spec_.obs_dim), 0.0) {
  reset(seed);
}

std::span<const double> EnvInstance::reset(std::uint64_t seed) {
  RngStream rng(mix64(seed));
  state_ = physics::sample_initial(spec_.task, rng);
  steps_ = 0;
  done_ = false;
  physics::observe(spec_.task, state_, obs_);
  return obs_;
}

StepResult EnvInstance::step(const Action& action) {
  if (done_) throw std::logic_error("step() called on a finished episode; reset first");
  if (const auto* d = std::get_if<Discrete>(&spec_.action_space)) {
    const int* a = std::get_if<int>(&action);
    if (!a || *a < 0 || *a >= d->n)
      throw std::invalid_argument(fmt::format("{}: invalid discrete action", spec_.name));
  } else {
    const auto* v = std::get_if<std::vector<double>>(&action);
    if (!v || v->size() != action_arity(spec_.action_space))
      throw std::invalid_argument(fmt::format("{}: invalid continuous action", spec_.name));
  }
  const auto t = physics::advance(spec_.task, state_, action);
  ++steps_;
  done_ = t.terminated || steps_ >= spec_.max_steps;
  physics::observe(spec_.task, state_, obs_);
  return {obs_, t.reward, done_, t.terminated};
}

void EnvInstance::set_state(const PhysicsState& state) {
  state_ = state;
  done_ = false;
  physics::observe(spec_.task, state_, obs_);
}

EnvInstance make_env(std::string_view name, std::uint64_t seed) {
  return EnvInstance(parse_task(name), seed);
}

}  // namespace dynevo::envs
