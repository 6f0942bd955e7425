"""Bundled demo worlds used by the test suite and the benchmark examples.

All three are desk-scale: a toy world with two possibly-present discs on
the straight line to the goal, a three-door corridor with a long fallback
route, and a warehouse-style world with three possible item locations.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .beliefs import Belief, Mode
from .geometry import ConvexPolygon
from .world import (
    Bounds,
    Environment,
    PartiallyObservableObject,
    RobotState,
    SensorParams,
)


def build_toy() -> Environment:
    """Two partially observable discs sit on the start-goal line; each forces
    a detour when present and the sensor sees only one of them at a time."""
    return Environment(
        bounds=Bounds(0.0, 0.0, 10.0, 6.0),
        robot_radius=0.2,
        sensor=SensorParams(fov_half_angle=math.radians(60.0), max_range=2.0),
        static_obstacles=[],
        po_objects=[
            PartiallyObservableObject(0, (3.0, 3.0), 0.8, blocks_when_present=True),
            PartiallyObservableObject(1, (7.0, 3.0), 0.8, blocks_when_present=True),
        ],
        mode=Mode.OBSTACLES,
        start=RobotState(0.5, 3.0, 0.0),
        goals=[RobotState(9.5, 3.0, 0.0)],
        initial_belief=Belief.uniform(4),
    )


def _wall_block(x0: float, x1: float, y0: float, y1: float) -> ConvexPolygon:
    return ConvexPolygon(((x0, y0), (x1, y0), (x1, y1), (x0, y1)))


def build_corridor() -> Environment:
    """Three doors through a long wall, closest first; going around the far
    end of the wall always works but is expensive."""
    y0, y1 = 2.85, 3.15
    return Environment(
        bounds=Bounds(0.0, 0.0, 12.0, 6.0),
        robot_radius=0.2,
        sensor=SensorParams(fov_half_angle=math.radians(60.0), max_range=2.4),
        static_obstacles=[
            _wall_block(0.0, 1.4, y0, y1),
            _wall_block(2.6, 4.9, y0, y1),
            _wall_block(6.1, 8.4, y0, y1),
            _wall_block(9.6, 10.5, y0, y1),
        ],
        po_objects=[
            PartiallyObservableObject(0, (2.0, 3.0), 0.62, blocks_when_present=True),
            PartiallyObservableObject(1, (5.5, 3.0), 0.62, blocks_when_present=True),
            PartiallyObservableObject(2, (9.0, 3.0), 0.62, blocks_when_present=True),
        ],
        mode=Mode.OBSTACLES,
        start=RobotState(1.0, 1.2, math.radians(90.0)),
        goals=[RobotState(1.0, 4.8, math.radians(90.0))],
        initial_belief=Belief.uniform(8),
    )


def build_goal_world() -> Environment:
    """An item sits at one of three known locations; the robot must look at
    locations until the belief is certain, then fetch."""
    return Environment(
        bounds=Bounds(0.0, 0.0, 10.0, 7.0),
        robot_radius=0.2,
        sensor=SensorParams(fov_half_angle=math.radians(60.0), max_range=2.6),
        static_obstacles=[
            ConvexPolygon(((4.0, 2.5), (6.0, 2.5), (6.0, 4.5), (4.0, 4.5))),
        ],
        po_objects=[
            PartiallyObservableObject(0, (9.0, 5.8), 0.35, blocks_when_present=False),
            PartiallyObservableObject(1, (9.0, 1.2), 0.35, blocks_when_present=False),
            PartiallyObservableObject(2, (1.0, 5.8), 0.35, blocks_when_present=False),
        ],
        mode=Mode.GOALS,
        start=RobotState(0.8, 0.8, 0.0),
        goals=[
            RobotState(8.3, 5.8, 0.0),
            RobotState(8.3, 1.2, 0.0),
            RobotState(1.7, 5.8, math.radians(180.0)),
        ],
        initial_belief=Belief(tuple(Fraction(1, 3) for _ in range(3))),
    )


DEMO_WORLDS = {
    "toy": build_toy,
    "corridor": build_corridor,
    "goals": build_goal_world,
}
