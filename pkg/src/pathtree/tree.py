"""Path trees: extraction from the belief graph, shortcut simplification,
expected-cost evaluation, and constraint validation."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

from .beliefs import Belief, branching_probability
from .world import Environment, RobotState, distance, is_motion_valid

if TYPE_CHECKING:  # pragma: no cover
    from .planner import BeliefGraph


class ExtractionError(RuntimeError):
    pass


@dataclass
class TreeVertex:
    state: RobotState
    is_goal: bool
    belief: Belief


class PathTree:
    """Directed tree of robot states; edges are motions or observations."""

    def __init__(self) -> None:
        self.vertices: list[TreeVertex] = []
        self.children: list[list[tuple[int, bool]]] = []  # (child id, is_observation)
        self.root = 0

    def add_vertex(self, state: RobotState, is_goal: bool, belief: Belief) -> int:
        self.vertices.append(TreeVertex(state, is_goal, belief))
        self.children.append([])
        return len(self.vertices) - 1

    def add_edge(self, parent: int, child: int, is_observation: bool) -> None:
        self.children[parent].append((child, is_observation))

    def edges(self) -> list[tuple[int, int, bool]]:
        return [
            (u, v, obs)
            for u, kids in enumerate(self.children)
            for v, obs in kids
        ]

    def leaves(self) -> list[int]:
        return [i for i, kids in enumerate(self.children) if not kids]

    def observation_sources(self) -> list[int]:
        return [
            i
            for i, kids in enumerate(self.children)
            if any(obs for _, obs in kids)
        ]

    def to_dict(self) -> dict[str, Any]:
        return {
            "root": self.root,
            "vertices": [
                {
                    "id": i,
                    "x": v.state.x,
                    "y": v.state.y,
                    "thetaDeg": math.degrees(v.state.theta),
                    "isGoal": v.is_goal,
                    "belief": v.belief.to_strings(),
                }
                for i, v in enumerate(self.vertices)
            ],
            "edges": [
                {"from": u, "to": v, "isObservation": obs} for u, v, obs in self.edges()
            ],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PathTree":
        tree = cls()
        verts = sorted(data["vertices"], key=lambda v: v["id"])
        for i, v in enumerate(verts):
            if v["id"] != i:
                raise ValueError("vertex ids must be 0..n-1")
            tree.add_vertex(
                RobotState(v["x"], v["y"], math.radians(v.get("thetaDeg", 0.0))),
                bool(v["isGoal"]),
                Belief.from_strings(v["belief"]),
            )
        for e in data["edges"]:
            tree.add_edge(int(e["from"]), int(e["to"]), bool(e["isObservation"]))
        tree.root = int(data.get("root", 0))
        return tree


def extract_path_tree(bg: "BeliefGraph", costs: list[float]) -> PathTree:
    """Walk the cost-to-go field from the start vertex into a path tree.

    Movement steps follow the neighbor minimizing cost(u) + distance(v, u)
    (ties to the lowest vertex id; a zero-length candidate may not displace
    an incumbent that already matches the vertex's own cost). Whenever the
    observation update is what realizes a vertex's cost, the walk branches
    into every posterior child instead, recursing into the ones that are
    not yet goals.
    """
    if bg.start_id is None:
        raise ExtractionError("belief graph has no start vertex")
    if costs[bg.start_id] == math.inf:
        raise ExtractionError("start vertex has infinite cost-to-go")

    tree = PathTree()
    visited = {bg.start_id}
    root_vertex = bg.vertices[bg.start_id]
    root = tree.add_vertex(
        root_vertex.state, root_vertex.is_goal, bg.beliefs[root_vertex.belief_id]
    )
    if root_vertex.is_goal:
        return tree
    _walk(bg, costs, tree, visited, root, bg.start_id)
    return tree


def _observation_candidate(bg: "BeliefGraph", costs: list[float], vid: int) -> float | None:
    children = bg.children[vid]
    if not children:
        return None
    total = 0.0
    for child, p in children:
        if costs[child] == math.inf:
            return math.inf
        total += p * costs[child]
    return total


def _walk(
    bg: "BeliefGraph",
    costs: list[float],
    tree: PathTree,
    visited: set[int],
    tree_vertex: int,
    belief_vertex: int,
) -> None:
    while True:
        observation = _observation_candidate(bg, costs, belief_vertex)

        best = None
        best_total = math.inf
        for u, d in bg.move_nbrs[belief_vertex]:
            if u in visited:
                continue
            total = costs[u] + d
            if best is None or total < best_total:
                # A zero-length hop must not displace an incumbent that
                # already realizes this vertex's own cost.
                if d == 0.0 and best is not None and best_total == costs[belief_vertex]:
                    continue
                best = u
                best_total = total

        if observation is not None and (best is None or observation <= best_total):
            if observation == math.inf:
                raise ExtractionError(
                    f"vertex {belief_vertex} has no admissible successor"
                )
            for child, _ in bg.children[belief_vertex]:
                if child in visited:
                    raise ExtractionError(
                        f"posterior vertex {child} was already extracted"
                    )
                cv = bg.vertices[child]
                ct = tree.add_vertex(cv.state, cv.is_goal, bg.beliefs[cv.belief_id])
                tree.add_edge(tree_vertex, ct, is_observation=True)
                visited.add(child)
                if not cv.is_goal:
                    _walk(bg, costs, tree, visited, ct, child)
            return

        if best is None or best_total == math.inf:
            raise ExtractionError(f"vertex {belief_vertex} has no admissible successor")

        bv = bg.vertices[best]
        bt = tree.add_vertex(bv.state, bv.is_goal, bg.beliefs[bv.belief_id])
        tree.add_edge(tree_vertex, bt, is_observation=False)
        visited.add(best)
        tree_vertex = bt
        belief_vertex = best
        if bv.is_goal:
            return


# -- simplification -------------------------------------------------------


def _segments(tree: PathTree) -> list[list[int]]:
    """Maximal movement-only chains, delimited by the root, observation
    vertices, branch points, and leaves."""
    starts = [tree.root]
    for u, v, obs in tree.edges():
        if obs or len(tree.children[u]) > 1:
            starts.append(v)
    segments = []
    for start in starts:
        chain = [start]
        v = start
        while True:
            kids = tree.children[v]
            if len(kids) != 1 or kids[0][1]:
                break
            v = kids[0][0]
            chain.append(v)
        segments.append(chain)
    return segments


def simplify_path_tree(
    tree: PathTree,
    env: Environment,
    rounds: int = 100,
    rng: random.Random | None = None,
    resolution: float | None = None,
) -> PathTree:
    """Shortcut each movement segment of the tree.

    Every segment between observation points is given `rounds` shortcut
    attempts; each picks two random waypoints and replaces everything in
    between by a straight motion if that motion is collision-free in every
    hypothesis the segment's belief still allows. Observation vertices,
    branching structure, and leaf states are preserved exactly.
    """
    if rng is None:
        rng = random.Random(0)

    new_chains: dict[int, list[int]] = {}
    for chain in _segments(tree):
        support = tree.vertices[chain[0]].belief.support()
        states = [tree.vertices[i].state for i in chain]
        alive = list(range(len(chain)))
        for _ in range(rounds):
            if len(alive) < 3:
                break
            i, j = sorted(rng.sample(range(len(alive)), 2))
            if j - i < 2:
                continue
            a = states[alive[i]]
            b = states[alive[j]]
            if all(
                is_motion_valid(a, b, h, env, resolution) for h in support
            ):
                del alive[i + 1 : j]
        new_chains[chain[0]] = [chain[k] for k in alive]

    # Rebuild the tree, walking chains from the root and re-attaching the
    # branches at their (unchanged) segment endpoints.
    out = PathTree()

    def emit(old_start: int, new_parent: int | None, via_observation: bool) -> None:
        prev = new_parent
        first = True
        for old in new_chains[old_start]:
            v = tree.vertices[old]
            nid = out.add_vertex(v.state, v.is_goal, v.belief)
            if prev is not None:
                out.add_edge(prev, nid, is_observation=first and via_observation)
            prev = nid
            first = False
        for child, obs in tree.children[new_chains[old_start][-1]]:
            emit(child, prev, obs)

    emit(tree.root, None, False)
    out.root = 0
    return out


# -- evaluation -----------------------------------------------------------


def evaluate_path_tree_cost(tree: PathTree, w_theta: float = 0.0) -> float:
    """Expected execution cost of the tree under its root belief.

    Movement edges contribute their length weighted by the probability of
    reaching them (the product of branching probabilities along the
    observation edges above); observation edges are free.
    """
    total = 0.0
    stack: list[tuple[int, float]] = [(tree.root, 1.0)]
    while stack:
        vid, prob = stack.pop()
        for child, obs in tree.children[vid]:
            if obs:
                p = prob * float(
                    branching_probability(
                        tree.vertices[vid].belief, tree.vertices[child].belief
                    )
                )
                stack.append((child, p))
            else:
                total += prob * distance(
                    tree.vertices[vid].state, tree.vertices[child].state, w_theta
                )
                stack.append((child, prob))
    return total


# -- validation -----------------------------------------------------------


@dataclass
class ValidationReport:
    complete_ok: bool
    complete_offenders: list[str] = field(default_factory=list)
    edges_ok: bool = True
    edge_offenders: list[str] = field(default_factory=list)
    beliefs_ok: bool = True
    belief_offenders: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.complete_ok and self.edges_ok and self.beliefs_ok

    def summary(self) -> str:
        lines = [
            f"completeness (goal leaf per hypothesis): {'pass' if self.complete_ok else 'FAIL'}",
            f"edge validity (motions valid in belief support): {'pass' if self.edges_ok else 'FAIL'}",
            f"belief consistency (posteriors across observations): {'pass' if self.beliefs_ok else 'FAIL'}",
        ]
        for item in self.complete_offenders + self.edge_offenders + self.belief_offenders:
            lines.append(f"  - {item}")
        return "\n".join(lines)


def _goal_satisfied(state: RobotState, h_idx: int, env: Environment) -> bool:
    g = env.goal_for_hypothesis(h_idx)
    return math.hypot(state.x - g.x, state.y - g.y) <= env.goal_tolerance


def validate_path_tree(tree: PathTree, env: Environment) -> ValidationReport:
    """Check the three plan constraints: completeness, edge validity, and
    belief-update consistency; offenders are reported per constraint."""
    space = env.space
    report = ValidationReport(complete_ok=True)

    # Completeness: every hypothesis can follow consistent branches from the
    # root down to a leaf that satisfies its goal.
    for h in range(space.num_worlds):
        if h not in tree.vertices[tree.root].belief.support():
            report.complete_ok = False
            report.complete_offenders.append(
                f"hypothesis {h} is outside the root belief"
            )
            continue
        found = False
        stack = [tree.root]
        while stack and not found:
            vid = stack.pop()
            kids = [
                child
                for child, _ in tree.children[vid]
                if h in tree.vertices[child].belief.support()
            ]
            if not tree.children[vid]:
                if tree.vertices[vid].is_goal and _goal_satisfied(
                    tree.vertices[vid].state, h, env
                ):
                    found = True
            stack.extend(kids)
        if not found:
            report.complete_ok = False
            report.complete_offenders.append(
                f"hypothesis {h} has no goal-satisfying leaf"
            )

    # Edge validity: movement edges must be collision-free in every
    # hypothesis their belief still allows.
    for u, v, obs in tree.edges():
        if obs:
            continue
        bu = tree.vertices[u].belief
        if bu != tree.vertices[v].belief:
            report.edges_ok = False
            report.edge_offenders.append(f"movement edge {u}->{v} changes the belief")
            continue
        for h in bu.support():
            if not is_motion_valid(
                tree.vertices[u].state, tree.vertices[v].state, h, env
            ):
                report.edges_ok = False
                report.edge_offenders.append(
                    f"movement edge {u}->{v} collides in hypothesis {h}"
                )

    # Belief consistency: observation children must be exactly the Bayes
    # posteriors of the parent for the observed objects, at the same
    # configuration.
    for u in tree.observation_sources():
        parent = tree.vertices[u]
        kids = [child for child, obs in tree.children[u] if obs]
        child_beliefs = {tree.vertices[c].belief for c in kids}
        matched: set[Belief] = set()
        for obj in range(space.num_objects):
            posteriors = [
                b for _, b in space.observe(parent.belief, obj) if b != parent.belief
            ]
            if posteriors and all(b in child_beliefs for b in posteriors):
                matched.update(posteriors)
        for c in kids:
            cv = tree.vertices[c]
            if cv.state.position() != parent.state.position():
                report.beliefs_ok = False
                report.belief_offenders.append(
                    f"observation edge {u}->{c} moves the configuration"
                )
            if cv.belief not in matched:
                report.beliefs_ok = False
                report.belief_offenders.append(
                    f"observation edge {u}->{c} is not a full posterior split "
                    f"of the parent belief"
                )

    return report
