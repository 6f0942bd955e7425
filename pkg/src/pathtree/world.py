"""Self-contained 2D world: disc robot, static obstacles, partially
observable objects, and a cone-of-view sensor.

The world never holds a mutable "current hypothesis"; every validity and
sensing query takes the hypothesis index explicitly, so an Environment is
immutable and safe to share.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

from .beliefs import Belief, HypothesisSpace, Mode, enumerate_hypotheses
from .geometry import (
    Circle,
    ConvexPolygon,
    Shape,
    interpolate_angle,
    normalize_angle,
    point_segment_distance,
    shortest_arc,
)


class ScenarioError(ValueError):
    """Raised for malformed scenario files; message names the JSON path."""


@dataclass(frozen=True)
class RobotState:
    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", normalize_angle(self.theta))

    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class SensorParams:
    fov_half_angle: float
    max_range: float

    def __post_init__(self) -> None:
        if not 0 < self.fov_half_angle <= math.pi:
            raise ValueError("fov half angle must be in (0, pi]")
        if self.max_range <= 0:
            raise ValueError("sensor range must be positive")


@dataclass(frozen=True)
class PartiallyObservableObject:
    index: int
    center: tuple[float, float]
    radius: float
    blocks_when_present: bool


@dataclass(frozen=True)
class Bounds:
    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self) -> None:
        if self.x_max < self.x_min or self.y_max < self.y_min:
            raise ValueError("bounds are empty")

    def contains_disc(self, x: float, y: float, r: float) -> bool:
        return (
            self.x_min + r <= x <= self.x_max - r
            and self.y_min + r <= y <= self.y_max - r
        )


def distance(a: RobotState, b: RobotState, w_theta: float = 0.0) -> float:
    """Planar distance plus an optional weighted angular term.

    sqrt(dx^2 + dy^2) + w_theta * |shortest arc between headings|.
    """
    d = math.hypot(b.x - a.x, b.y - a.y)
    if w_theta:
        d += w_theta * abs(shortest_arc(a.theta, b.theta))
    return d


@dataclass
class Environment:
    bounds: Bounds
    robot_radius: float
    sensor: SensorParams
    static_obstacles: list[Shape]
    po_objects: list[PartiallyObservableObject]
    mode: Mode
    start: RobotState
    goals: list[RobotState]
    initial_belief: Belief
    _space: HypothesisSpace = field(init=False, repr=False)
    _presence_masks: list[int] = field(init=False, repr=False)
    _blocking_masks: list[int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n = len(self.po_objects)
        for i, obj in enumerate(self.po_objects):
            if obj.index != i:
                raise ValueError(f"object {i} carries index {obj.index}")
        self._space = enumerate_hypotheses(self.mode, n)
        self._space.check_belief(self.initial_belief)
        if self.mode is Mode.GOALS:
            if len(self.goals) != n:
                raise ValueError("goals mode needs one goal per location")
        elif len(self.goals) != 1:
            raise ValueError("obstacles mode uses a single shared goal")
        # Per-hypothesis object masks: which objects exist, and which of
        # those actually block the robot.
        self._presence_masks = []
        self._blocking_masks = []
        for h in self._space.hypotheses:
            present = 0
            blocking = 0
            for obj in self.po_objects:
                if h.presence[obj.index]:
                    present |= 1 << obj.index
                    if obj.blocks_when_present:
                        blocking |= 1 << obj.index
            self._presence_masks.append(present)
            self._blocking_masks.append(blocking)

    @property
    def space(self) -> HypothesisSpace:
        return self._space

    @property
    def num_objects(self) -> int:
        return len(self.po_objects)

    @property
    def goal_tolerance(self) -> float:
        return self.robot_radius / 10.0

    @property
    def default_resolution(self) -> float:
        return self.robot_radius / 2.0

    def goal_for_hypothesis(self, h_idx: int) -> RobotState:
        if self.mode is Mode.GOALS:
            return self.goals[self._space.hypotheses[h_idx].presence.index(1)]
        return self.goals[0]

    def is_goal(self, state: RobotState, belief: Belief) -> bool:
        """Goal test used by the planner.

        Obstacles mode: the state sits at the shared goal position (within
        tolerance), regardless of belief. Goals mode: the belief must be
        certain of one location and the state must sit at that location's
        goal.
        """
        tol = self.goal_tolerance
        if self.mode is Mode.OBSTACLES:
            g = self.goals[0]
            return math.hypot(state.x - g.x, state.y - g.y) <= tol
        if not belief.is_final():
            return False
        g = self.goal_for_hypothesis(belief.final_hypothesis())
        return math.hypot(state.x - g.x, state.y - g.y) <= tol

    def validate_start(self) -> None:
        for h in range(self._space.num_worlds):
            if not is_valid(self.start, h, self):
                raise ValueError(f"start state is invalid in hypothesis {h}")

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        obstacles = []
        for shape in self.static_obstacles:
            if isinstance(shape, Circle):
                obstacles.append(
                    {"circle": {"center": list(shape.center), "radius": shape.radius}}
                )
            else:
                obstacles.append({"polygon": [list(v) for v in shape.vertices]})
        return {
            "bounds": {
                "xMin": self.bounds.x_min,
                "yMin": self.bounds.y_min,
                "xMax": self.bounds.x_max,
                "yMax": self.bounds.y_max,
            },
            "robotRadius": self.robot_radius,
            "sensor": {
                "fovHalfAngleDeg": math.degrees(self.sensor.fov_half_angle),
                "range": self.sensor.max_range,
            },
            "staticObstacles": obstacles,
            "poObjects": [
                {"center": list(o.center), "radius": o.radius} for o in self.po_objects
            ],
            "mode": self.mode.value,
            "start": _state_to_dict(self.start),
            "goals": [_state_to_dict(g) for g in self.goals],
            "initialBelief": self.initial_belief.to_strings(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Environment":
        return _environment_from_dict(data)


def _state_to_dict(state: RobotState) -> dict[str, float]:
    return {"x": state.x, "y": state.y, "thetaDeg": math.degrees(state.theta)}


def _require(data: dict, key: str, path: str) -> Any:
    if key not in data:
        raise ScenarioError(f"{path}.{key}: missing")
    return data[key]


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _point(value: Any, path: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ScenarioError(f"{path}: expected [x, y]")
    return (_number(value[0], f"{path}[0]"), _number(value[1], f"{path}[1]"))


def _state_from_dict(data: Any, path: str) -> RobotState:
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: expected an object")
    return RobotState(
        _number(_require(data, "x", path), f"{path}.x"),
        _number(_require(data, "y", path), f"{path}.y"),
        math.radians(_number(data.get("thetaDeg", 0.0), f"{path}.thetaDeg")),
    )


def _environment_from_dict(data: dict[str, Any]) -> Environment:
    if not isinstance(data, dict):
        raise ScenarioError("$: expected a JSON object")
    b = _require(data, "bounds", "$")
    try:
        bounds = Bounds(
            _number(_require(b, "xMin", "$.bounds"), "$.bounds.xMin"),
            _number(_require(b, "yMin", "$.bounds"), "$.bounds.yMin"),
            _number(_require(b, "xMax", "$.bounds"), "$.bounds.xMax"),
            _number(_require(b, "yMax", "$.bounds"), "$.bounds.yMax"),
        )
    except ValueError as exc:
        raise ScenarioError(f"$.bounds: {exc}") from exc
    robot_radius = _number(_require(data, "robotRadius", "$"), "$.robotRadius")
    if robot_radius <= 0:
        raise ScenarioError("$.robotRadius: must be positive")
    s = _require(data, "sensor", "$")
    try:
        sensor = SensorParams(
            math.radians(
                _number(_require(s, "fovHalfAngleDeg", "$.sensor"), "$.sensor.fovHalfAngleDeg")
            ),
            _number(_require(s, "range", "$.sensor"), "$.sensor.range"),
        )
    except ValueError as exc:
        raise ScenarioError(f"$.sensor: {exc}") from exc

    obstacles: list[Shape] = []
    for i, entry in enumerate(data.get("staticObstacles", [])):
        path = f"$.staticObstacles[{i}]"
        if not isinstance(entry, dict):
            raise ScenarioError(f"{path}: expected an object")
        if "circle" in entry:
            c = entry["circle"]
            obstacles.append(
                Circle(
                    _point(_require(c, "center", path), f"{path}.circle.center"),
                    _number(_require(c, "radius", path), f"{path}.circle.radius"),
                )
            )
        elif "polygon" in entry:
            pts = entry["polygon"]
            if not isinstance(pts, list):
                raise ScenarioError(f"{path}.polygon: expected a list of points")
            try:
                obstacles.append(
                    ConvexPolygon(
                        tuple(_point(p, f"{path}.polygon[{j}]") for j, p in enumerate(pts))
                    )
                )
            except ValueError as exc:
                raise ScenarioError(f"{path}.polygon: {exc}") from exc
        else:
            raise ScenarioError(f"{path}: expected a 'circle' or 'polygon' key")

    try:
        mode = Mode(_require(data, "mode", "$"))
    except ValueError as exc:
        raise ScenarioError("$.mode: expected 'obstacles' or 'goals'") from exc

    po_objects = []
    for i, entry in enumerate(data.get("poObjects", [])):
        path = f"$.poObjects[{i}]"
        if not isinstance(entry, dict):
            raise ScenarioError(f"{path}: expected an object")
        po_objects.append(
            PartiallyObservableObject(
                index=i,
                center=_point(_require(entry, "center", path), f"{path}.center"),
                radius=_number(_require(entry, "radius", path), f"{path}.radius"),
                blocks_when_present=(mode is Mode.OBSTACLES),
            )
        )

    start = _state_from_dict(_require(data, "start", "$"), "$.start")
    goals_raw = _require(data, "goals", "$")
    if not isinstance(goals_raw, list) or not goals_raw:
        raise ScenarioError("$.goals: expected a nonempty list")
    goals = [_state_from_dict(g, f"$.goals[{i}]") for i, g in enumerate(goals_raw)]

    try:
        space = enumerate_hypotheses(mode, len(po_objects))
    except ValueError as exc:
        raise ScenarioError(f"$.poObjects: {exc}") from exc
    if "initialBelief" in data:
        raw = data["initialBelief"]
        if not isinstance(raw, list):
            raise ScenarioError("$.initialBelief: expected a list of 'p/q' strings")
        try:
            belief = Belief.from_strings(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise ScenarioError(f"$.initialBelief: {exc}") from exc
        if len(belief) != space.num_worlds:
            raise ScenarioError(
                f"$.initialBelief: {len(belief)} entries for {space.num_worlds} hypotheses"
            )
    else:
        belief = space.uniform_belief()

    try:
        env = Environment(
            bounds=bounds,
            robot_radius=robot_radius,
            sensor=sensor,
            static_obstacles=obstacles,
            po_objects=po_objects,
            mode=mode,
            start=start,
            goals=goals,
            initial_belief=belief,
        )
        env.validate_start()
    except ValueError as exc:
        raise ScenarioError(f"$: {exc}") from exc
    return env


def load_scenario(path: str) -> Environment:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"$: invalid JSON ({exc})") from exc
    return _environment_from_dict(data)


def save_scenario(env: Environment, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(env.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- validity ------------------------------------------------------------


def is_valid(state: RobotState, h_idx: int, env: Environment) -> bool:
    """Collision test for the robot disc under one world hypothesis."""
    profile = state_profile(state, env)
    return profile[0] and not (profile[1] & env._blocking_masks[h_idx])


def state_profile(state: RobotState, env: Environment) -> tuple[bool, int]:
    """Hypothesis-independent collision summary for one state.

    Returns (clear of bounds and static obstacles, mask of po-objects the
    robot disc overlaps). Validity under hypothesis h follows by masking
    with the objects that block in h.
    """
    r = env.robot_radius
    if not env.bounds.contains_disc(state.x, state.y, r):
        return (False, 0)
    for shape in env.static_obstacles:
        if shape.overlaps_disc(state.x, state.y, r):
            return (False, 0)
    hit = 0
    for obj in env.po_objects:
        if math.hypot(state.x - obj.center[0], state.y - obj.center[1]) < obj.radius + r:
            hit |= 1 << obj.index
    return (True, hit)


def motion_states(
    a: RobotState, b: RobotState, resolution: float
) -> list[RobotState]:
    """States along the straight (x, y) segment, headings on the shortest arc.

    Consecutive samples are at most `resolution` apart in arc length;
    endpoints are included and the spacing is symmetric in a and b.
    """
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    length = math.hypot(b.x - a.x, b.y - a.y)
    steps = max(1, math.ceil(length / resolution))
    states = []
    for i in range(steps + 1):
        t = i / steps
        states.append(
            RobotState(
                a.x + (b.x - a.x) * t,
                a.y + (b.y - a.y) * t,
                interpolate_angle(a.theta, b.theta, t),
            )
        )
    return states


def motion_profile(
    a: RobotState, b: RobotState, env: Environment, resolution: float | None = None
) -> tuple[bool, int]:
    """Like state_profile, but swept along the motion from a to b."""
    if resolution is None:
        resolution = env.default_resolution
    base_ok = True
    hit = 0
    for s in motion_states(a, b, resolution):
        ok, mask = state_profile(s, env)
        if not ok:
            return (False, 0)
        hit |= mask
        base_ok = base_ok and ok
    return (base_ok, hit)


def is_motion_valid(
    a: RobotState,
    b: RobotState,
    h_idx: int,
    env: Environment,
    resolution: float | None = None,
) -> bool:
    """True iff every interpolated state along a-b is valid in hypothesis h."""
    ok, hit = motion_profile(a, b, env, resolution)
    return ok and not (hit & env._blocking_masks[h_idx])


# -- sensing -------------------------------------------------------------


def visibility_profile(
    state: RobotState, env: Environment
) -> list[tuple[bool, int]]:
    """Per-object sensing summary, independent of the hypothesis.

    For each object: (geometrically visible ignoring other po-objects,
    mask of po-objects that would occlude it if present). Geometric
    visibility requires the object center within sensor range, within the
    view cone, and a sight line clear of static obstacles.
    """
    result: list[tuple[bool, int]] = []
    pos = state.position()
    for obj in env.po_objects:
        dx = obj.center[0] - state.x
        dy = obj.center[1] - state.y
        if math.hypot(dx, dy) > env.sensor.max_range:
            result.append((False, 0))
            continue
        bearing = math.atan2(dy, dx)
        if abs(shortest_arc(state.theta, bearing)) > env.sensor.fov_half_angle:
            result.append((False, 0))
            continue
        if any(s.intersects_segment(pos, obj.center) for s in env.static_obstacles):
            result.append((False, 0))
            continue
        blockers = 0
        for other in env.po_objects:
            if other.index == obj.index:
                continue
            if (
                point_segment_distance(*other.center, *pos, *obj.center)
                < other.radius
            ):
                blockers |= 1 << other.index
        result.append((True, blockers))
    return result


def targets_found(state: RobotState, h_idx: int, env: Environment) -> list[int]:
    """Indices of object locations the sensor reports from `state` in world h.

    A location is reported whether or not its object is present (the sensor
    sees the spot as occupied or empty); only occlusion by *other* objects
    that are present in hypothesis h can hide it.
    """
    present = env._presence_masks[h_idx]
    return [
        obj.index
        for obj, (ok, blockers) in zip(env.po_objects, visibility_profile(state, env))
        if ok and not (blockers & present)
    ]
