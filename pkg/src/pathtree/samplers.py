"""State sampling strategies for random-graph construction.

The uniform sampler draws positions and headings uniformly inside the
world bounds. The camera-based sampler instead picks a random object that
exists in the sampled hypothesis and draws a valid position whose heading
points straight at it, so the sensor has a high chance of seeing it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .beliefs import Mode
from .world import Environment, RobotState, is_valid


class SamplerError(RuntimeError):
    pass


class SampleKind(Enum):
    UNIFORM = "uniform"
    GOAL = "goal"
    CAMERA = "camera"


@dataclass
class SamplerConfig:
    kind: str = "uniform"  # "uniform" or "camera"
    goal_bias: float = 0.2
    camera_fraction: float = 0.5
    seed: int = 0
    camera_retries: int = 100

    def __post_init__(self) -> None:
        if self.kind not in ("uniform", "camera"):
            raise ValueError(f"unknown sampler kind {self.kind!r}")
        for name in ("goal_bias", "camera_fraction"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")


class StateSampler:
    """Owns its RNG; one instance per planning run keeps runs reproducible."""

    def __init__(self, config: SamplerConfig):
        self.config = config
        self.rng = random.Random(config.seed)

    def uniform_state(self, env: Environment) -> RobotState:
        b = env.bounds
        return RobotState(
            self.rng.uniform(b.x_min, b.x_max),
            self.rng.uniform(b.y_min, b.y_max),
            self.rng.uniform(-math.pi, math.pi),
        )

    def camera_state(self, env: Environment, h_idx: int) -> RobotState:
        """Valid state under hypothesis h whose heading points at a random
        object that exists in h. Raises if no object exists or the retry
        budget runs out."""
        presence = env.space.hypotheses[h_idx].presence
        candidates = [i for i in range(env.num_objects) if presence[i]]
        if not candidates:
            raise SamplerError(f"no object present in hypothesis {h_idx}")
        target = env.po_objects[candidates[self.rng.randrange(len(candidates))]]
        b = env.bounds
        for _ in range(self.config.camera_retries):
            x = self.rng.uniform(b.x_min, b.x_max)
            y = self.rng.uniform(b.y_min, b.y_max)
            state = RobotState(
                x, y, math.atan2(target.center[1] - y, target.center[0] - x)
            )
            if is_valid(state, h_idx, env):
                return state
        raise SamplerError(
            f"no valid camera pose for object {target.index} "
            f"after {self.config.camera_retries} tries"
        )

    def next_state(self, env: Environment, h_idx: int) -> tuple[RobotState, SampleKind]:
        """One draw of the combined sampling strategy for hypothesis h.

        With probability goal_bias the goal state of h is returned; the
        camera sampler replaces the remaining uniform draw with a
        camera-aimed one with probability camera_fraction (falling back to
        uniform when h contains no object at all).
        """
        if self.rng.random() < self.config.goal_bias:
            return env.goal_for_hypothesis(h_idx), SampleKind.GOAL
        if self.config.kind == "camera" and self.rng.random() < self.config.camera_fraction:
            if env.mode is Mode.GOALS or env.space.hypotheses[h_idx].presence.count(1):
                return self.camera_state(env, h_idx), SampleKind.CAMERA
        return self.uniform_state(env), SampleKind.UNIFORM


def compute_camera_frame(cam_pos, target_pos) -> np.ndarray:
    """Rotation matrix of a camera at cam_pos looking at target_pos (3D).

    Column z is the normalized view direction, column x is the normalized
    cross product of the world z-axis with it, and column y completes the
    right-handed frame, keeping the camera horizontal. Raises when the view
    direction is parallel to the world z-axis.
    """
    cam = np.asarray(cam_pos, dtype=float)
    target = np.asarray(target_pos, dtype=float)
    direction = target - cam
    norm = np.linalg.norm(direction)
    if norm == 0.0:
        raise ValueError("camera and target coincide")
    z = direction / norm
    x = np.cross(np.array([0.0, 0.0, 1.0]), z)
    x_norm = np.linalg.norm(x)
    if x_norm < 1e-12:
        raise ValueError("view direction is parallel to the world z-axis")
    x /= x_norm
    y = np.cross(z, x)
    return np.column_stack([x, y, z])
