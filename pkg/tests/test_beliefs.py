from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pathtree.beliefs import (
    Belief,
    Mode,
    branching_probability,
    compatible_beliefs,
    enumerate_hypotheses,
    is_final_belief,
)


def F(s):
    return Fraction(s)


def belief(*entries) -> Belief:
    return Belief(tuple(Fraction(e) for e in entries))


# -- hypothesis enumeration ------------------------------------------------


def test_obstacle_hypotheses_two_objects():
    space = enumerate_hypotheses(Mode.OBSTACLES, 2)
    assert [h.presence for h in space.hypotheses] == [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert [h.index for h in space.hypotheses] == [0, 1, 2, 3]


def test_goal_hypotheses_three_locations():
    space = enumerate_hypotheses(Mode.GOALS, 3)
    assert [h.presence for h in space.hypotheses] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_zero_objects_single_empty_hypothesis():
    space = enumerate_hypotheses(Mode.OBSTACLES, 0)
    assert [h.presence for h in space.hypotheses] == [()]


def test_goals_mode_needs_a_location():
    with pytest.raises(ValueError):
        enumerate_hypotheses(Mode.GOALS, 0)


def test_enumeration_is_stable():
    a = enumerate_hypotheses(Mode.OBSTACLES, 3)
    b = enumerate_hypotheses(Mode.OBSTACLES, 3)
    assert [h.presence for h in a.hypotheses] == [h.presence for h in b.hypotheses]


# -- belief type -----------------------------------------------------------


def test_belief_must_sum_to_one():
    with pytest.raises(ValueError):
        belief("1/2", "1/4")
    with pytest.raises(ValueError):
        belief("3/2", "-1/2")


def test_belief_equality_is_exact():
    assert belief("1/2", "1/2") == belief("2/4", "1/2")
    assert len({belief("1/2", "1/2"), belief("2/4", "1/2")}) == 1


def test_belief_round_trips_through_strings():
    b = belief("1/3", "1/3", "1/3")
    assert Belief.from_strings(b.to_strings()) == b
    assert b.to_strings() == ["1/3", "1/3", "1/3"]


# -- observe ---------------------------------------------------------------


def test_observe_uniform_four_worlds():
    space = enumerate_hypotheses(Mode.OBSTACLES, 2)
    results = space.observe(Belief.uniform(4), 0)
    assert len(results) == 2
    (out_a, post_a), (out_p, post_p) = results
    assert (out_a.seen_present, out_p.seen_present) == (False, True)
    assert post_a == belief("1/2", 0, "1/2", 0)
    assert post_p == belief(0, "1/2", 0, "1/2")


def test_observe_certain_belief_is_fixed_point():
    space = enumerate_hypotheses(Mode.OBSTACLES, 2)
    b = belief(1, 0, 0, 0)
    for obj in range(2):
        results = space.observe(b, obj)
        assert len(results) == 1
        outcome, posterior = results[0]
        assert posterior == b
        assert outcome.seen_present == bool(space.hypotheses[0].presence[obj])


def test_observe_goals_mode_first_location():
    space = enumerate_hypotheses(Mode.GOALS, 3)
    results = space.observe(belief("1/3", "1/3", "1/3"), 0)
    by_outcome = {out.seen_present: post for out, post in results}
    assert by_outcome[True] == belief(1, 0, 0)
    assert by_outcome[False] == belief(0, "1/2", "1/2")


def test_observe_rejects_bad_object_index():
    space = enumerate_hypotheses(Mode.OBSTACLES, 2)
    with pytest.raises(ValueError):
        space.observe(Belief.uniform(4), 2)


@given(
    weights=st.lists(st.integers(min_value=0, max_value=9), min_size=4, max_size=4),
    obj=st.integers(min_value=0, max_value=1),
)
def test_observe_posteriors_sum_to_exactly_one(weights, obj):
    if sum(weights) == 0:
        weights = [1, 1, 1, 1]
    total = sum(weights)
    b = Belief(tuple(Fraction(w, total) for w in weights))
    space = enumerate_hypotheses(Mode.OBSTACLES, 2)
    results = space.observe(b, obj)
    assert results
    for _, posterior in results:
        assert sum(posterior.probs, Fraction(0)) == 1
        assert all(p >= 0 for p in posterior.probs)
    # the branching probabilities of the posteriors partition the parent mass
    assert sum(
        (branching_probability(b, post) for _, post in results), Fraction(0)
    ) == 1


def test_observe_idempotent_on_final_beliefs():
    space = enumerate_hypotheses(Mode.OBSTACLES, 3)
    for i in range(space.num_worlds):
        b = Belief.point(space.num_worlds, i)
        for obj in range(3):
            assert space.observe(b, obj) == [
                (space.observe(b, obj)[0][0], b)
            ]


# -- all_belief_states -------------------------------------------------------


def test_reachable_beliefs_two_obstacles():
    space = enumerate_hypotheses(Mode.OBSTACLES, 2)
    reached = space.all_belief_states(Belief.uniform(4))
    expected = {
        belief("1/4", "1/4", "1/4", "1/4"),
        belief("1/2", "1/2", 0, 0),
        belief(1, 0, 0, 0),
        belief(0, 1, 0, 0),
        belief(0, 0, "1/2", "1/2"),
        belief(0, 0, 1, 0),
        belief(0, 0, 0, 1),
        belief("1/2", 0, "1/2", 0),
        belief(0, "1/2", 0, "1/2"),
    }
    assert len(reached) == 9
    assert set(reached) == expected
    assert reached[0] == Belief.uniform(4)


def test_reachable_beliefs_three_goal_locations():
    space = enumerate_hypotheses(Mode.GOALS, 3)
    reached = space.all_belief_states(Belief.uniform(3))
    expected = {
        belief("1/3", "1/3", "1/3"),
        belief(1, 0, 0),
        belief(0, "1/2", "1/2"),
        belief(0, 1, 0),
        belief(0, 0, 1),
        belief("1/2", 0, "1/2"),
        belief("1/2", "1/2", 0),
    }
    assert len(reached) == 7
    assert set(reached) == expected


def test_reachable_beliefs_no_objects():
    space = enumerate_hypotheses(Mode.OBSTACLES, 0)
    b = Belief.uniform(1)
    assert space.all_belief_states(b) == [b]


def test_reachable_beliefs_are_closed_under_observe():
    space = enumerate_hypotheses(Mode.OBSTACLES, 3)
    reached = space.all_belief_states(Belief.uniform(8))
    members = set(reached)
    for b in reached:
        for obj in range(3):
            for _, posterior in space.observe(b, obj):
                assert posterior in members


def _reachable_oracle(n: int) -> set[Belief]:
    """Independent enumeration: one belief per {unknown, absent, present}^n
    assignment, uniform over the consistent hypotheses."""
    space = enumerate_hypotheses(Mode.OBSTACLES, n)
    out = set()
    assignments = [[]]
    for _ in range(n):
        assignments = [a + [v] for a in assignments for v in (None, 0, 1)]
    for assignment in assignments:
        consistent = [
            h.index
            for h in space.hypotheses
            if all(
                want is None or h.presence[i] == want
                for i, want in enumerate(assignment)
            )
        ]
        p = Fraction(1, len(consistent))
        out.add(
            Belief(
                tuple(
                    p if i in consistent else Fraction(0)
                    for i in range(space.num_worlds)
                )
            )
        )
    return out


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_reachable_belief_count_is_three_to_the_n(n):
    space = enumerate_hypotheses(Mode.OBSTACLES, n)
    reached = space.all_belief_states(Belief.uniform(2**n))
    assert len(reached) == 3**n
    assert set(reached) == _reachable_oracle(n)


def test_reachable_beliefs_deterministic_order():
    space = enumerate_hypotheses(Mode.OBSTACLES, 2)
    first = space.all_belief_states(Belief.uniform(4))
    second = space.all_belief_states(Belief.uniform(4))
    assert first == second
    # BFS discovery: object 0's posteriors (absent first) precede object 1's
    assert first[1] == belief("1/2", 0, "1/2", 0)
    assert first[2] == belief(0, "1/2", 0, "1/2")
    assert first[3] == belief("1/2", "1/2", 0, 0)


# -- compatible_beliefs ------------------------------------------------------


def test_all_worlds_admit_every_belief():
    space = enumerate_hypotheses(Mode.OBSTACLES, 2)
    beliefs = space.all_belief_states(Belief.uniform(4))
    assert compatible_beliefs(range(4), beliefs) == beliefs


def test_no_worlds_admit_nothing():
    space = enumerate_hypotheses(Mode.OBSTACLES, 2)
    beliefs = space.all_belief_states(Belief.uniform(4))
    assert compatible_beliefs([], beliefs) == []


def test_compatible_beliefs_support_subset():
    space = enumerate_hypotheses(Mode.OBSTACLES, 2)
    beliefs = space.all_belief_states(Belief.uniform(4))
    got = compatible_beliefs({0, 2}, beliefs)
    # oracle: keep beliefs whose positive entries all sit at indices 0 or 2
    expected = [
        b
        for b in beliefs
        if all(p == 0 for i, p in enumerate(b.probs) if i not in (0, 2))
    ]
    assert got == expected
    assert set(got) == {
        belief(1, 0, 0, 0),
        belief(0, 0, 1, 0),
        belief("1/2", 0, "1/2", 0),
    }


# -- branching probability ---------------------------------------------------


def test_branching_probability_uniform_split():
    parent = Belief.uniform(4)
    child = belief("1/2", 0, "1/2", 0)
    assert branching_probability(parent, child) == F("1/2")


def test_branching_probability_identical_supports():
    b = belief(1, 0, 0, 0)
    assert branching_probability(b, b) == 1


def test_branching_probability_partial_mass():
    parent = belief("1/3", "1/3", "1/3")
    child = belief(0, "1/2", "1/2")
    assert branching_probability(parent, child) == F("2/3")


# -- final beliefs -------------------------------------------------------------


def test_is_final_belief():
    assert is_final_belief(belief(0, 1, 0, 0))
    assert not is_final_belief(belief("1/2", "1/2", 0, 0))
    assert not is_final_belief(Belief.uniform(4))
    assert belief(0, 1, 0, 0).final_hypothesis() == 1
