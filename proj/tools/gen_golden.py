#!/usr/bin/env python3
"""Record reference trajectories from gymnasium for the environment tests.

Each file holds one trajectory:

    task <name>
    initial <state components>
    <step> <action> <state components after the step> <reward> <terminated>

Actions come from a fixed script (a simple controller or a seeded random
sequence), so the C++ side replays them without any policy of its own.
"""

import argparse
import math
import pathlib

import gymnasium as gym
import numpy as np

STEPS = 100
TRAJECTORIES = 3


def cartpole_action(state, rng):
    x, x_dot, theta, theta_dot = state
    push = theta + 0.3 * theta_dot + 0.01 * x + 0.05 * x_dot
    if rng.random() < 0.1:
        return int(rng.integers(2))
    return 1 if push > 0 else 0


def discrete_action(n):
    return lambda state, rng: int(rng.integers(n))


def box_action(low, high):
    return lambda state, rng: np.array([rng.uniform(low, high)], dtype=np.float64)


TASKS = {
    "CartPole-v1": cartpole_action,
    "Acrobot-v1": discrete_action(3),
    "MountainCar-v0": discrete_action(3),
    "MountainCarContinuous-v0": box_action(-1.0, 1.0),
    "Pendulum-v1": box_action(-2.0, 2.0),
}


def fmt(v):
    return repr(float(v))


def record(name, k):
    env = gym.make(name).unwrapped
    env.reset(seed=1000 + k)
    rng = np.random.default_rng(7919 * (k + 1))
    lines = [f"task {name}", "initial " + " ".join(fmt(v) for v in np.asarray(env.state, dtype=np.float64))]
    for step in range(STEPS):
        action = TASKS[name](np.asarray(env.state, dtype=np.float64), rng)
        _, reward, terminated, _, _ = env.step(action)
        act = fmt(action[0]) if isinstance(action, np.ndarray) else str(action)
        state = " ".join(fmt(v) for v in np.asarray(env.state, dtype=np.float64))
        lines.append(f"{step} {act} {state} {fmt(reward)} {int(bool(terminated))}")
        if terminated:
            break
    return "\n".join(lines) + "\n"


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=pathlib.Path, default=pathlib.Path(__file__).parent.parent / "tests" / "golden")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name in TASKS:
        for k in range(TRAJECTORIES):
            text = record(name, k)
            (args.out / f"{name}_{k}.txt").write_text(text)
            print(f"{name} #{k}: {text.count(chr(10)) - 2} steps")


if __name__ == "__main__":
    main()
