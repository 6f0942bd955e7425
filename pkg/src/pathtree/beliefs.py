"""Finite hypothesis spaces and exact-rational beliefs over them.

A world contains n partially observable binary objects. In obstacles mode
every combination of present/absent states is a hypothesis (2^n of them);
in goals mode exactly one object exists, so there are n one-hot hypotheses.
Beliefs are probability distributions over the hypothesis list, stored as
exact fractions so that equal beliefs compare equal without a tolerance.

Observations are binary and deterministic: looking at an object's location
reveals whether it is present there or not, which zeroes out every
hypothesis inconsistent with the outcome.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence


class Mode(str, Enum):
    OBSTACLES = "obstacles"
    GOALS = "goals"


@dataclass(frozen=True)
class WorldHypothesis:
    """One complete assignment of present/absent states to all objects."""

    presence: tuple[int, ...]
    index: int

    def is_present(self, object_index: int) -> bool:
        return self.presence[object_index] == 1


@dataclass(frozen=True)
class ObservationOutcome:
    object_index: int
    seen_present: bool


@dataclass(frozen=True)
class Belief:
    """Exact probability distribution over a hypothesis space.

    Entries are `Fraction`s that must be nonnegative and sum to exactly 1,
    so beliefs are hashable and deduplicate exactly.
    """

    probs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        probs = tuple(Fraction(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if any(p < 0 for p in probs):
            raise ValueError("belief entries must be nonnegative")
        if sum(probs, Fraction(0)) != 1:
            raise ValueError("belief entries must sum to exactly 1")

    def __len__(self) -> int:
        return len(self.probs)

    def support(self) -> tuple[int, ...]:
        """Indices of hypotheses with positive probability."""
        return tuple(i for i, p in enumerate(self.probs) if p > 0)

    def support_mask(self) -> int:
        """Support as a bit mask (bit i set iff hypothesis i is possible)."""
        mask = 0
        for i, p in enumerate(self.probs):
            if p > 0:
                mask |= 1 << i
        return mask

    def is_final(self) -> bool:
        """True iff the belief is certain of a single hypothesis."""
        return any(p == 1 for p in self.probs)

    def final_hypothesis(self) -> int:
        """Index of the certain hypothesis; raises unless is_final()."""
        for i, p in enumerate(self.probs):
            if p == 1:
                return i
        raise ValueError("belief is not final")

    @classmethod
    def uniform(cls, num_hypotheses: int) -> "Belief":
        if num_hypotheses <= 0:
            raise ValueError("need at least one hypothesis")
        p = Fraction(1, num_hypotheses)
        return cls(tuple(p for _ in range(num_hypotheses)))

    @classmethod
    def point(cls, num_hypotheses: int, index: int) -> "Belief":
        return cls(tuple(Fraction(1 if i == index else 0) for i in range(num_hypotheses)))

    def to_strings(self) -> list[str]:
        """Serialize as exact "p/q" strings (JSON-friendly)."""
        return [str(p) for p in self.probs]

    @classmethod
    def from_strings(cls, items: Sequence[str]) -> "Belief":
        return cls(tuple(Fraction(s) for s in items))


class HypothesisSpace:
    """The ordered, finite set of world hypotheses for n binary objects.

    Obstacles mode enumerates all 2^n presence combinations; hypothesis k has
    bit i equal to (k >> i) & 1, so the order for n=2 is
    (0,0), (1,0), (0,1), (1,1). Goals mode enumerates the n one-hot vectors
    in location order. Both orders are deterministic.
    """

    def __init__(self, mode: Mode, num_objects: int):
        mode = Mode(mode)
        if num_objects < 0:
            raise ValueError("number of objects must be nonnegative")
        if mode is Mode.GOALS and num_objects == 0:
            raise ValueError("goals mode requires at least one location")
        self.mode = mode
        self.num_objects = num_objects
        self.hypotheses: tuple[WorldHypothesis, ...]
        if mode is Mode.OBSTACLES:
            self.hypotheses = tuple(
                WorldHypothesis(tuple((k >> i) & 1 for i in range(num_objects)), k)
                for k in range(2**num_objects)
            )
        else:
            self.hypotheses = tuple(
                WorldHypothesis(tuple(1 if i == k else 0 for i in range(num_objects)), k)
                for k in range(num_objects)
            )

    @property
    def num_worlds(self) -> int:
        return len(self.hypotheses)

    def uniform_belief(self) -> Belief:
        return Belief.uniform(self.num_worlds)

    def check_belief(self, belief: Belief) -> None:
        if len(belief) != self.num_worlds:
            raise ValueError(
                f"belief has {len(belief)} entries, space has {self.num_worlds} hypotheses"
            )

    def observe(
        self, belief: Belief, object_index: int
    ) -> list[tuple[ObservationOutcome, Belief]]:
        """Bayes-update `belief` with a binary look at one object location.

        The observation model is deterministic: under hypothesis h the
        outcome is exactly h's presence bit for the object. Outcomes with
        zero prior probability are dropped and each surviving posterior is
        renormalized exactly, so an already-determined object yields a
        single entry equal to the input belief. Outcomes are ordered
        absent before present.
        """
        self.check_belief(belief)
        if not 0 <= object_index < self.num_objects:
            raise ValueError(f"object index {object_index} out of range")
        results: list[tuple[ObservationOutcome, Belief]] = []
        for seen_present in (False, True):
            bit = 1 if seen_present else 0
            masked = [
                p if self.hypotheses[i].presence[object_index] == bit else Fraction(0)
                for i, p in enumerate(belief.probs)
            ]
            total = sum(masked, Fraction(0))
            if total == 0:
                continue
            posterior = Belief(tuple(p / total for p in masked))
            results.append((ObservationOutcome(object_index, seen_present), posterior))
        return results

    def all_belief_states(self, initial: Belief) -> list[Belief]:
        """Every belief reachable from `initial` through observations.

        Breadth-first closure of {initial} under observe() over all object
        indices, deduplicated exactly; the returned order is the BFS
        discovery order with ties broken by object index and then by
        outcome (absent before present).
        """
        self.check_belief(initial)
        seen = {initial}
        order = [initial]
        queue = deque([initial])
        while queue:
            belief = queue.popleft()
            for obj in range(self.num_objects):
                for _, posterior in self.observe(belief, obj):
                    if posterior not in seen:
                        seen.add(posterior)
                        order.append(posterior)
                        queue.append(posterior)
        return order


def enumerate_hypotheses(mode: Mode, num_objects: int) -> HypothesisSpace:
    """Build the complete, ordered hypothesis space for the given mode."""
    return HypothesisSpace(mode, num_objects)


def compatible_beliefs(
    valid_worlds: Iterable[int], beliefs: Iterable[Belief]
) -> list[Belief]:
    """Beliefs whose support lies entirely within `valid_worlds`.

    A belief is compatible with a set of hypothesis indices when every
    hypothesis the belief still considers possible is in that set.
    """
    allowed = frozenset(valid_worlds)
    return [b for b in beliefs if allowed.issuperset(b.support())]


def branching_probability(parent: Belief, child: Belief) -> Fraction:
    """Probability mass of `parent` carried into `child` by an observation.

    Sum of the parent's entries at every index where the child's entry is
    positive.
    """
    if len(parent) != len(child):
        raise ValueError("beliefs are over different hypothesis spaces")
    return sum(
        (p for p, c in zip(parent.probs, child.probs) if c > 0), Fraction(0)
    )


def is_final_belief(belief: Belief) -> bool:
    """True iff exactly one entry of the belief equals 1."""
    return belief.is_final()
