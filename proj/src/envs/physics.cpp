#include "dynevo/envs/physics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dynevo::envs::physics {

namespace {

using std::numbers::pi;

double as_f32(double x) { return static_cast<double>(static_cast<float>(x)); }

// ---------------------------------------------------------------- CartPole

Transition cartpole_advance(PhysicsState& s, int action) {
  using namespace cartpole;
  constexpr double total_mass = kMassPole + kMassCart;
  constexpr double polemass_length = kMassPole * kHalfLength;
  auto& [x, x_dot, theta, theta_dot] = s;
  const double force = action == 1 ? kForceMag : -kForceMag;
  const double costheta = std::cos(theta);
  const double sintheta = std::sin(theta);
  const double temp = (force + polemass_length * (theta_dot * theta_dot) * sintheta) / total_mass;
  const double thetaacc =
      (kGravity * sintheta - costheta * temp) /
      (kHalfLength * (4.0 / 3.0 - kMassPole * (costheta * costheta) / total_mass));
  const double xacc = temp - polemass_length * thetaacc * costheta / total_mass;
  x = x + kTau * x_dot;
  x_dot = x_dot + kTau * xacc;
  theta = theta + kTau * theta_dot;
  theta_dot = theta_dot + kTau * thetaacc;
  const bool terminated =
      x < -kXThreshold || x > kXThreshold || theta < -kThetaThreshold || theta > kThetaThreshold;
  return {1.0, terminated};
}

// ----------------------------------------------------------------- Acrobot

namespace acrobot {
constexpr double kDt = 0.2;
constexpr double kL1 = 1.0;
constexpr double kM1 = 1.0;
constexpr double kM2 = 1.0;
constexpr double kLc1 = 0.5;
constexpr double kLc2 = 0.5;
constexpr double kI1 = 1.0;
constexpr double kI2 = 1.0;
constexpr double kG = 9.8;
constexpr double kMaxVel1 = 4 * pi;
constexpr double kMaxVel2 = 9 * pi;
constexpr double kTorque[3] = {-1.0, 0.0, 1.0};

using Vec4 = std::array<double, 4>;

// "book" variant of the equations of motion.
Vec4 dsdt(const Vec4& s, double a) {
  const double theta1 = s[0], theta2 = s[1], dtheta1 = s[2], dtheta2 = s[3];
  const double d1 = kM1 * (kLc1 * kLc1) +
                    kM2 * (kL1 * kL1 + kLc2 * kLc2 + 2 * kL1 * kLc2 * std::cos(theta2)) + kI1 + kI2;
  const double d2 = kM2 * (kLc2 * kLc2 + kL1 * kLc2 * std::cos(theta2)) + kI2;
  const double phi2 = kM2 * kLc2 * kG * std::cos(theta1 + theta2 - pi / 2.0);
  const double phi1 = -kM2 * kL1 * kLc2 * (dtheta2 * dtheta2) * std::sin(theta2) -
                      2 * kM2 * kL1 * kLc2 * dtheta2 * dtheta1 * std::sin(theta2) +
                      (kM1 * kLc1 + kM2 * kL1) * kG * std::cos(theta1 - pi / 2) + phi2;
  const double ddtheta2 =
      (a + d2 / d1 * phi1 - kM2 * kL1 * kLc2 * (dtheta1 * dtheta1) * std::sin(theta2) - phi2) /
      (kM2 * (kLc2 * kLc2) + kI2 - (d2 * d2) / d1);
  const double ddtheta1 = -(d2 * ddtheta2 + phi1) / d1;
  return {dtheta1, dtheta2, ddtheta1, ddtheta2};
}

Vec4 rk4_step(const Vec4& y0, double a) {
  constexpr double dt = kDt;
  constexpr double dt2 = dt / 2.0;
  auto axpy = [](const Vec4& y, double h, const Vec4& k) {
    return Vec4{y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
  };
  const Vec4 k1 = dsdt(y0, a);
  const Vec4 k2 = dsdt(axpy(y0, dt2, k1), a);
  const Vec4 k3 = dsdt(axpy(y0, dt2, k2), a);
  const Vec4 k4 = dsdt(axpy(y0, dt, k3), a);
  Vec4 out;
  for (int i = 0; i < 4; ++i)
    out[i] = y0[i] + dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

double wrap(double x, double lo, double hi) {
  const double diff = hi - lo;
  while (x > hi) x = x - diff;
  while (x < lo) x = x + diff;
  return x;
}

}  // namespace acrobot

Transition acrobot_advance(PhysicsState& s, int action) {
  using namespace acrobot;
  auto ns = rk4_step(s, kTorque[action]);
  ns[0] = wrap(ns[0], -pi, pi);
  ns[1] = wrap(ns[1], -pi, pi);
  ns[2] = std::clamp(ns[2], -kMaxVel1, kMaxVel1);
  ns[3] = std::clamp(ns[3], -kMaxVel2, kMaxVel2);
  s = ns;
  const bool terminated = -std::cos(s[0]) - std::cos(s[1] + s[0]) > 1.0;
  return {terminated ? 0.0 : -1.0, terminated};
}

// ------------------------------------------------------------- MountainCar

namespace mountain_car {
constexpr double kMinPosition = -1.2;
constexpr double kMaxPosition = 0.6;
constexpr double kMaxSpeed = 0.07;
constexpr double kGoalPosition = 0.5;
constexpr double kContinuousGoalPosition = 0.45;
constexpr double kForce = 0.001;
constexpr double kGravity = 0.0025;
constexpr double kPower = 0.0015;
}  // namespace mountain_car

Transition mountain_car_advance(PhysicsState& s, int action) {
  using namespace mountain_car;
  double position = s[0];
  double velocity = s[1];
  velocity += (action - 1) * kForce + std::cos(3 * position) * (-kGravity);
  velocity = std::clamp(velocity, -kMaxSpeed, kMaxSpeed);
  position += velocity;
  position = std::clamp(position, kMinPosition, kMaxPosition);
  if (position == kMinPosition && velocity < 0) velocity = 0;
  s[0] = position;
  s[1] = velocity;
  return {-1.0, position >= kGoalPosition && velocity >= 0};
}

// The continuous variant stores its state as float32 between steps, so the
// position read at the start of a step is always float-representable and
// 3 * position is rounded to float before the cosine.
Transition mountain_car_continuous_advance(PhysicsState& s, double action) {
  using namespace mountain_car;
  double position = s[0];
  double velocity = s[1];
  const double force = std::min(std::max(action, -1.0), 1.0);
  velocity += force * kPower - kGravity * std::cos(as_f32(3 * position));
  if (velocity > kMaxSpeed) velocity = kMaxSpeed;
  if (velocity < -kMaxSpeed) velocity = -kMaxSpeed;
  position += velocity;
  if (position > kMaxPosition) position = kMaxPosition;
  if (position < kMinPosition) position = kMinPosition;
  if (position == kMinPosition && velocity < 0) velocity = 0;
  const bool terminated = position >= kContinuousGoalPosition && velocity >= 0;
  double reward = terminated ? 100.0 : 0.0;
  reward -= std::pow(action, 2) * 0.1;
  s[0] = as_f32(position);
  s[1] = as_f32(velocity);
  return {reward, terminated};
}

// ---------------------------------------------------------------- Pendulum

namespace pendulum {
constexpr double kMaxSpeed = 8.0;
constexpr double kMaxTorque = 2.0;
constexpr double kDt = 0.05;
constexpr double kG = 10.0;
constexpr double kM = 1.0;
constexpr double kL = 1.0;

// Floored modulo, matching numpy's float remainder.
double floor_mod(double a, double b) {
  double m = std::fmod(a, b);
  if (m != 0.0 && ((b < 0) != (m < 0))) m += b;
  return m;
}

double angle_normalize(double x) { return floor_mod(x + pi, 2 * pi) - pi; }
}  // namespace pendulum

Transition pendulum_advance(PhysicsState& s, double torque) {
  using namespace pendulum;
  const double th = s[0];
  const double thdot = s[1];
  const double u = std::clamp(torque, -kMaxTorque, kMaxTorque);
  const double an = angle_normalize(th);
  const double costs = an * an + 0.1 * (thdot * thdot) + 0.001 * (u * u);
  double newthdot =
      thdot + (3 * kG / (2 * kL) * std::sin(th) + 3.0 / (kM * (kL * kL)) * u) * kDt;
  newthdot = std::clamp(newthdot, -kMaxSpeed, kMaxSpeed);
  const double newth = th + newthdot * kDt;
  s[0] = newth;
  s[1] = newthdot;
  return {-costs, false};
}

}  // namespace

int state_size(Task task) {
  switch (task) {
    case Task::CartPole:
    case Task::Acrobot: return 4;
    case Task::MountainCar:
    case Task::MountainCarContinuous:
    case Task::Pendulum: return 2;
  }
  return 0;
}

PhysicsState sample_initial(Task task, RngStream& rng) {
  PhysicsState s{};
  switch (task) {
    case Task::CartPole:
      for (auto& v : s) v = rng.uniform(-0.05, 0.05);
      break;
    case Task::Acrobot:
      for (auto& v : s) v = as_f32(rng.uniform(-0.1, 0.1));
      break;
    case Task::MountainCar:
      s[0] = rng.uniform(-0.6, -0.4);
      break;
    case Task::MountainCarContinuous:
      s[0] = as_f32(rng.uniform(-0.6, -0.4));
      break;
    case Task::Pendulum:
      s[0] = rng.uniform(-pi, pi);
      s[1] = rng.uniform(-1.0, 1.0);
      break;
  }
  return s;
}

Transition advance(Task task, PhysicsState& state, const Action& action) {
  switch (task) {
    case Task::CartPole: return cartpole_advance(state, std::get<int>(action));
    case Task::Acrobot: return acrobot_advance(state, std::get<int>(action));
    case Task::MountainCar: return mountain_car_advance(state, std::get<int>(action));
    case Task::MountainCarContinuous:
      return mountain_car_continuous_advance(state, std::get<std::vector<double>>(action)[0]);
    case Task::Pendulum: return pendulum_advance(state, std::get<std::vector<double>>(action)[0]);
  }
  return {};
}

void observe(Task task, const PhysicsState& s, std::span<double> out) {
  switch (task) {
    case Task::CartPole:
      for (int i = 0; i < 4; ++i) out[i] = as_f32(s[i]);
      break;
    case Task::Acrobot:
      out[0] = as_f32(std::cos(s[0]));
      out[1] = as_f32(std::sin(s[0]));
      out[2] = as_f32(std::cos(s[1]));
      out[3] = as_f32(std::sin(s[1]));
      out[4] = as_f32(s[2]);
      out[5] = as_f32(s[3]);
      break;
    case Task::MountainCar:
    case Task::MountainCarContinuous:
      out[0] = as_f32(s[0]);
      out[1] = as_f32(s[1]);
      break;
    case Task::Pendulum:
      out[0] = as_f32(std::cos(s[0]));
      out[1] = as_f32(std::sin(s[0]));
      out[2] = as_f32(s[1]);
      break;
  }
}

}  // namespace dynevo::envs::physics
