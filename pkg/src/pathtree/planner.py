"""Graph construction and expected-cost computation.

The pipeline first grows a random graph over the configuration space whose
edges know in which world hypotheses they are collision-free, then lifts it
to a belief graph (one layer per reachable belief, linked by observation
edges at sensing states), and finally runs a Dijkstra-style dynamic program
whose relaxation mixes shortest-path updates on movement edges with
expectation updates across observation edges.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field

from .beliefs import Belief, branching_probability
from .samplers import SamplerConfig, StateSampler
from .tree import PathTree, evaluate_path_tree_cost, extract_path_tree, simplify_path_tree
from .world import (
    Environment,
    RobotState,
    distance,
    is_valid,
    motion_profile,
    visibility_profile,
)


class PlanningError(RuntimeError):
    pass


@dataclass
class RandomVertex:
    state: RobotState
    # observable[h] = object indices the sensor reports from this state in
    # world h (occlusion differs across worlds, so one list per hypothesis).
    observable: tuple[tuple[int, ...], ...]


class RandomGraph:
    """Undirected configuration-space graph with per-edge world validity."""

    def __init__(self) -> None:
        self.vertices: list[RandomVertex] = []
        self.adjacency: list[list[int]] = []
        self._edges: dict[tuple[int, int], list] = {}  # (u<v) -> [world_mask, dist]

    def add_vertex(self, vertex: RandomVertex) -> int:
        self.vertices.append(vertex)
        self.adjacency.append([])
        return len(self.vertices) - 1

    def add_edge_world(self, u: int, v: int, h_idx: int, dist: float) -> None:
        """Mark the edge u-v valid in world h, creating it if needed."""
        if u == v:
            raise ValueError("self edges are not allowed")
        key = (u, v) if u < v else (v, u)
        entry = self._edges.get(key)
        if entry is None:
            self._edges[key] = [1 << h_idx, dist]
            self.adjacency[u].append(v)
            self.adjacency[v].append(u)
        else:
            entry[0] |= 1 << h_idx

    def edge_mask(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        return self._edges[key][0]

    def edge_valid_worlds(self, u: int, v: int) -> frozenset[int]:
        mask = self.edge_mask(u, v)
        return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)

    def edges(self) -> list[tuple[int, int, int, float]]:
        """(u, v, world_mask, dist) tuples in insertion order."""
        return [(u, v, m, d) for (u, v), (m, d) in self._edges.items()]

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def neighbors_within(self, state: RobotState, radius: float) -> list[int]:
        out = []
        for i, vert in enumerate(self.vertices):
            if distance(state, vert.state) <= radius:
                out.append(i)
        return out


def _observables_per_world(state: RobotState, env: Environment) -> tuple[tuple[int, ...], ...]:
    profile = visibility_profile(state, env)
    per_world = []
    for present in env._presence_masks:
        per_world.append(
            tuple(
                i
                for i, (ok, blockers) in enumerate(profile)
                if ok and not (blockers & present)
            )
        )
    return tuple(per_world)


def build_random_graph(
    env: Environment,
    sampler: StateSampler,
    max_iterations: int,
    radius: float = 0.5,
    resolution: float | None = None,
) -> RandomGraph:
    """Grow the annotated random graph by rapid random exploration.

    Each iteration samples a hypothesis, draws a state (goal-biased, and
    camera-aimed when the sampler is configured so), rejects it unless it
    is valid in the sampled hypothesis, and connects it to every neighbor
    within `radius` in every hypothesis where the connecting motion is
    collision-free. Rejected samples do not consume iterations. Before
    sampling, one observation state per object is pre-seeded at the start
    position, oriented toward the object, so observations available from
    the start are always represented.
    """
    if max_iterations < 0:
        raise ValueError("max_iterations must be nonnegative")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if resolution is None:
        resolution = env.default_resolution
    env.validate_start()

    num_worlds = env.space.num_worlds
    blocking = env._blocking_masks
    # motion_profile returns a mask of touched objects; the set of worlds an
    # edge is valid in depends only on that mask, so cache the translation.
    worlds_for_hit: dict[int, int] = {}

    def valid_worlds_mask(hit: int) -> int:
        cached = worlds_for_hit.get(hit)
        if cached is None:
            cached = 0
            for h in range(num_worlds):
                if not (blocking[h] & hit):
                    cached |= 1 << h
            worlds_for_hit[hit] = cached
        return cached

    graph = RandomGraph()

    def connect(new_id: int, state: RobotState) -> None:
        for nbr in graph.neighbors_within(state, radius):
            if nbr == new_id:
                continue
            base_ok, hit = motion_profile(state, graph.vertices[nbr].state, env, resolution)
            if not base_ok:
                continue
            mask = valid_worlds_mask(hit)
            if not mask:
                continue
            d = distance(state, graph.vertices[nbr].state)
            for h in range(num_worlds):
                if mask >> h & 1:
                    graph.add_edge_world(new_id, nbr, h, d)

    def add_state(state: RobotState) -> int:
        vid = graph.add_vertex(RandomVertex(state, _observables_per_world(state, env)))
        connect(vid, state)
        return vid

    add_state(env.start)
    seeded = {env.start.position() + (env.start.theta,)}
    for obj in env.po_objects:
        theta = math.atan2(obj.center[1] - env.start.y, obj.center[0] - env.start.x)
        key = env.start.position() + (theta,)
        if key in seeded:
            continue
        seeded.add(key)
        add_state(RobotState(env.start.x, env.start.y, theta))

    rng = sampler.rng
    accepted = 0
    attempts = 0
    attempt_cap = max(10_000, 200 * max_iterations)
    while accepted < max_iterations:
        attempts += 1
        if attempts > attempt_cap:
            raise PlanningError(
                f"random graph stalled: {accepted} accepted samples "
                f"after {attempts} attempts"
            )
        h_idx = rng.randrange(num_worlds)
        state, _ = sampler.next_state(env, h_idx)
        if not is_valid(state, h_idx, env):
            continue
        add_state(state)
        accepted += 1

    return graph


@dataclass
class BeliefVertex:
    rv: int
    belief_id: int
    state: RobotState
    is_goal: bool


class BeliefGraph:
    """Product of the random graph with the reachable belief set.

    Movement edges stay within one belief layer; observation edges connect
    a sensing vertex to the same-configuration vertices of the posterior
    beliefs and are directed.
    """

    def __init__(self, random_graph: RandomGraph, beliefs: list[Belief]):
        self.random_graph = random_graph
        self.beliefs = beliefs
        self.vertices: list[BeliefVertex] = []
        self.index: dict[tuple[int, int], int] = {}
        self.move_nbrs: list[list[tuple[int, float]]] = []
        # children[v] = (target vertex, branching probability) per posterior
        self.children: list[list[tuple[int, float]]] = []
        self.parents: list[list[int]] = []
        self.start_id: int | None = None

    def add_vertex(self, vertex: BeliefVertex) -> int:
        vid = len(self.vertices)
        self.vertices.append(vertex)
        self.index[(vertex.rv, vertex.belief_id)] = vid
        self.move_nbrs.append([])
        self.children.append([])
        self.parents.append([])
        return vid

    def observable_objects(self, vid: int) -> tuple[tuple[int, ...], ...]:
        return self.random_graph.vertices[self.vertices[vid].rv].observable

    @property
    def num_movement_edges(self) -> int:
        return sum(len(n) for n in self.move_nbrs) // 2

    @property
    def num_observation_edges(self) -> int:
        return sum(len(c) for c in self.children)


def build_belief_graph(
    graph: RandomGraph, beliefs: list[Belief], env: Environment
) -> BeliefGraph:
    """Lift the random graph into belief space.

    Phase 1 copies every random vertex into each belief layer in which it
    has at least one compatible incident edge. Phase 2 instantiates every
    random edge in every compatible belief layer. Phase 3 adds directed
    observation edges from each vertex that can see an object (in any
    hypothesis the belief still allows) to the posterior-belief copies of
    the same configuration.
    """
    space = env.space
    bg = BeliefGraph(graph, beliefs)
    support_masks = [b.support_mask() for b in beliefs]
    belief_ids = {b: i for i, b in enumerate(beliefs)}

    # compatible belief ids per distinct edge world-mask
    compat_cache: dict[int, list[int]] = {}

    def compatible(mask: int) -> list[int]:
        got = compat_cache.get(mask)
        if got is None:
            got = [i for i, sm in enumerate(support_masks) if not (sm & ~mask)]
            compat_cache[mask] = got
        return got

    for rv, vertex in enumerate(graph.vertices):
        incident = {graph.edge_mask(rv, nbr) for nbr in graph.adjacency[rv]}
        if not incident:
            continue
        for belief_id, sm in enumerate(support_masks):
            if any(not (sm & ~mask) for mask in incident):
                bg.add_vertex(
                    BeliefVertex(
                        rv=rv,
                        belief_id=belief_id,
                        state=vertex.state,
                        is_goal=env.is_goal(vertex.state, beliefs[belief_id]),
                    )
                )

    try:
        start_belief_id = belief_ids[env.initial_belief]
    except KeyError:
        raise PlanningError("belief list does not contain the initial belief")
    start = bg.index.get((0, start_belief_id))
    if start is None:
        raise PlanningError("start vertex is unreachable in the initial belief")
    bg.start_id = start

    for u, v, mask, dist_uv in graph.edges():
        for belief_id in compatible(mask):
            bu = bg.index[(u, belief_id)]
            bv = bg.index[(v, belief_id)]
            bg.move_nbrs[bu].append((bv, dist_uv))
            bg.move_nbrs[bv].append((bu, dist_uv))
    for nbrs in bg.move_nbrs:
        nbrs.sort()

    for vid in range(len(bg.vertices)):
        vertex = bg.vertices[vid]
        belief = beliefs[vertex.belief_id]
        observable = graph.vertices[vertex.rv].observable
        seen: set[int] = set()
        for h in belief.support():
            seen.update(observable[h])
        for obj in sorted(seen):
            for _, posterior in space.observe(belief, obj):
                if posterior == belief:
                    continue
                target = bg.index[(vertex.rv, belief_ids[posterior])]
                p = float(branching_probability(belief, posterior))
                bg.children[vid].append((target, p))
                bg.parents[target].append(vid)

    return bg


def compute_expected_costs(bg: BeliefGraph) -> list[float]:
    """Optimal expected cost-to-go for every belief-graph vertex.

    Label-correcting Dijkstra seeded at the goal vertices. Relaxing across
    a movement edge adds the edge length; relaxing an observation source
    takes the branching-probability-weighted sum over all its posterior
    children (infinite while any child is still unreached).
    """
    inf = math.inf
    costs = [inf] * len(bg.vertices)
    pq: list[tuple[float, int]] = []
    for vid, vertex in enumerate(bg.vertices):
        if vertex.is_goal:
            costs[vid] = 0.0
            heapq.heappush(pq, (0.0, vid))
    while pq:
        c, v = heapq.heappop(pq)
        if c > costs[v]:
            continue
        for u, d in bg.move_nbrs[v]:
            cand = d + c
            if cand < costs[u]:
                costs[u] = cand
                heapq.heappush(pq, (cand, u))
        for u in bg.parents[v]:
            cand = 0.0
            for child, p in bg.children[u]:
                child_cost = costs[child]
                if child_cost == inf:
                    cand = inf
                    break
                cand += p * child_cost
            if cand < costs[u]:
                costs[u] = cand
                heapq.heappush(pq, (cand, u))
    return costs


@dataclass
class PlannerConfig:
    iterations: int
    radius: float = 0.5
    resolution: float | None = None
    simplify_rounds: int = 100
    sampler: SamplerConfig = field(default_factory=SamplerConfig)


@dataclass
class PlanResult:
    success: bool
    reason: str = ""
    tree: PathTree | None = None
    raw_tree: PathTree | None = None
    cost: float | None = None
    raw_cost: float | None = None
    start_cost: float | None = None
    timings: dict[str, float] = field(default_factory=dict)
    vertex_counts: dict[str, int] = field(default_factory=dict)


def run_pipeline(env: Environment, config: PlannerConfig) -> PlanResult:
    """Run the full planning pipeline and time each phase."""
    import random as _random

    sampler = StateSampler(config.sampler)
    timings: dict[str, float] = {}
    counts: dict[str, int] = {}

    t0 = time.perf_counter()
    graph = build_random_graph(
        env, sampler, config.iterations, config.radius, config.resolution
    )
    timings["randomGraph"] = time.perf_counter() - t0
    counts["randomGraph"] = len(graph.vertices)

    beliefs = env.space.all_belief_states(env.initial_belief)
    t0 = time.perf_counter()
    try:
        bg = build_belief_graph(graph, beliefs, env)
    except PlanningError as exc:
        timings["beliefGraph"] = time.perf_counter() - t0
        return PlanResult(
            success=False, reason=str(exc), timings=timings, vertex_counts=counts
        )
    timings["beliefGraph"] = time.perf_counter() - t0
    counts["beliefGraph"] = len(bg.vertices)

    t0 = time.perf_counter()
    costs = compute_expected_costs(bg)
    timings["costs"] = time.perf_counter() - t0

    start_cost = costs[bg.start_id]
    if start_cost == math.inf:
        timings["extraction"] = 0.0
        return PlanResult(
            success=False,
            reason="no complete path tree within the sampled graph",
            timings=timings,
            vertex_counts=counts,
        )

    t0 = time.perf_counter()
    raw_tree = extract_path_tree(bg, costs)
    timings["extraction"] = time.perf_counter() - t0
    counts["pathTree"] = len(raw_tree.vertices)

    t0 = time.perf_counter()
    tree = simplify_path_tree(
        raw_tree,
        env,
        rounds=config.simplify_rounds,
        rng=_random.Random(config.sampler.seed ^ 0x5F5F5F),
        resolution=config.resolution,
    )
    timings["simplification"] = time.perf_counter() - t0

    return PlanResult(
        success=True,
        tree=tree,
        raw_tree=raw_tree,
        cost=evaluate_path_tree_cost(tree),
        raw_cost=evaluate_path_tree_cost(raw_tree),
        start_cost=start_cost,
        timings=timings,
        vertex_counts=counts,
    )
