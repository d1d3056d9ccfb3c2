#pragma once

#include <span>

#include "dynevo/envs/env.hpp"

// Raw per-task dynamics with the constants of the Gym classic-control
// reference implementations. No step counting, no episode bookkeeping.
//
// State layouts:
//   CartPole               [x, x_dot, theta, theta_dot]
//   Acrobot                [theta1, theta2, dtheta1, dtheta2]
//   MountainCar(+Cont.)    [position, velocity]
//   Pendulum               [theta, theta_dot]
namespace dynevo::envs::physics {

struct Transition {
  double reward = 0.0;
  bool terminated = false;
};

int state_size(Task task);

/// Initial-state distribution of the reference implementation.
PhysicsState sample_initial(Task task, RngStream& rng);

/// Advances `state` by one timestep under `action` (already validated).
Transition advance(Task task, PhysicsState& state, const Action& action);

/// Writes the observation for `state` into `out` (size obs_dim). Values are
/// rounded through float, as the reference environments emit float32.
void observe(Task task, const PhysicsState& state, std::span<double> out);

namespace cartpole {
inline constexpr double kGravity = 9.8;
inline constexpr double kMassCart = 1.0;
inline constexpr double kMassPole = 0.1;
inline constexpr double kHalfLength = 0.5;
inline constexpr double kForceMag = 10.0;
inline constexpr double kTau = 0.02;
inline constexpr double kThetaThreshold = 12 * 2 * 3.141592653589793 / 360;
inline constexpr double kXThreshold = 2.4;
}  // namespace cartpole

}  // namespace dynevo::envs::physics
