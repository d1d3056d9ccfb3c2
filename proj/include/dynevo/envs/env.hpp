#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dynevo/rng.hpp"

namespace dynevo::envs {

enum class Task : std::uint8_t {
  CartPole,
  Acrobot,
  MountainCar,
  MountainCarContinuous,
  Pendulum,
};

inline constexpr std::array kAllTasks{Task::CartPole, Task::Acrobot, Task::MountainCar,
                                      Task::MountainCarContinuous, Task::Pendulum};

/// Gym identifier, e.g. "CartPole-v1".
std::string_view task_name(Task task);

class UnsupportedTask : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws UnsupportedTask naming every supported identifier.
Task parse_task(std::string_view name);

struct Discrete {
  int n = 2;
};
struct Continuous {
  std::vector<double> low;
  std::vector<double> high;
};
using ActionSpace = std::variant<Discrete, Continuous>;

/// Number of network outputs the space consumes.
std::size_t action_arity(const ActionSpace& space);

/// Either a discrete choice or a continuous vector.
using Action = std::variant<int, std::vector<double>>;

struct EnvSpec {
  Task task = Task::CartPole;
  std::string name;
  int obs_dim = 0;
  ActionSpace action_space;
  int max_steps = 0;
  int episodes_per_eval = 1;
  bool standardize_inputs = false;
};

EnvSpec env_spec(Task task);

struct StepResult {
  std::span<const double> observation;  // valid until the next reset/step
  double reward = 0.0;
  bool done = false;
  bool terminated = false;  // true when ended by the task, not the step limit
};

/// Physics state; components beyond the task's state size are unused.
using PhysicsState = std::array<double, 4>;

/// One seeded classic-control environment.
///
/// Dynamics are deterministic; randomness enters only through reset, which
/// draws the initial state from an RngStream seeded with mix64(seed).
class EnvInstance {
 public:
  EnvInstance(Task task, std::uint64_t seed);

  const EnvSpec& spec() const { return spec_; }

  std::span<const double> reset(std::uint64_t seed);

  /// Throws std::logic_error when the episode is already done, and
  /// std::invalid_argument for an action outside the action space.
  StepResult step(const Action& action);

  int steps() const { return steps_; }
  bool done() const { return done_; }
  const PhysicsState& state() const { return state_; }
  std::span<const double> observation() const { return obs_; }

  /// Overwrites the physics state (fidelity tests start from recorded states).
  void set_state(const PhysicsState& state);

 private:
  EnvSpec spec_;
  PhysicsState state_{};
  std::vector<double> obs_;
  int steps_ = 0;
  bool done_ = false;
};

/// Accepts a Gym identifier; see parse_task.
EnvInstance make_env(std::string_view name, std::uint64_t seed);

}  // namespace dynevo::envs
