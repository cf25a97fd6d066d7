from fractions import Fraction

import pytest

from src.pomdp.belief_support import BeliefSupport, observed_update, split_by_observation, support_update
from src.pomdp.bits import is_subset, iter_bits, mask_of, popcount
from src.pomdp.pomdp import Pomdp, PomdpBuilder
from src.pomdp.pomdp_exception import PomdpException
from src.pomdp.specification import Specification, observable_reach
from src.pomdp.validation import (
    ACTION_MISMATCH,
    EMPTY_INITIAL,
    INVALID_DISTRIBUTION,
    MIXED_INITIAL,
    NO_ENABLED_ACTION,
    NOT_ABSORBING,
    OVERLAPPING_SPEC,
    make_absorbing,
    validate,
)
from tests.corpus import named_support


def two_state_model(initial=(0,)) -> Pomdp:
    builder = PomdpBuilder()
    first = builder.add_state("s", "o")
    second = builder.add_state("t", "p")
    builder.add_outcome(first, "go", second, 1)
    builder.add_outcome(second, "go", second, 1)
    builder.set_initial(initial)
    return builder.build()


def codes(diagnostics):
    return {diagnostic.code for diagnostic in diagnostics}


def test_bits():
    mask = mask_of([0, 3, 5])
    assert mask == 0b101001
    assert list(iter_bits(mask)) == [0, 3, 5]
    assert popcount(mask) == 3
    assert is_subset(mask_of([3]), mask)
    assert not is_subset(mask_of([1]), mask)


def test_cheese_is_well_formed(cheese):
    pomdp, spec = cheese
    assert validate(pomdp, spec) == []
    assert pomdp.num_states == 11
    assert pomdp.num_actions == 4
    assert pomdp.num_observations == 7
    assert spec.reach == pomdp.states_named(["10"])
    assert spec.avoid == pomdp.states_named(["9", "11"])
    assert pomdp.initial_support == pomdp.states_named(["6", "8"])


def test_overlapping_spec_is_reported():
    pomdp = two_state_model()
    assert OVERLAPPING_SPEC in codes(validate(pomdp, Specification.of([1], [1])))


def test_action_mismatch_is_reported():
    builder = PomdpBuilder()
    first = builder.add_state("s", "o")
    second = builder.add_state("t", "o")
    builder.add_outcome(first, "left", first, 1)
    builder.add_outcome(second, "right", second, 1)
    builder.set_initial([first])
    assert ACTION_MISMATCH in codes(validate(builder.build(), Specification.of([], [])))


@pytest.mark.parametrize(
    "initial, code",
    [
        ((), EMPTY_INITIAL),
        ((0, 1), MIXED_INITIAL),
    ],
)
def test_initial_support_problems(initial, code):
    pomdp = two_state_model(initial)
    assert code in codes(validate(pomdp, Specification.of([1], [])))


def test_invalid_distribution_and_missing_actions():
    builder = PomdpBuilder()
    first = builder.add_state("s", "o")
    builder.add_state("t", "p")
    builder.add_outcome(first, "go", first, Fraction(1, 2))
    builder.set_initial([first])
    found = codes(validate(builder.build(), Specification.of([], [])))
    assert INVALID_DISTRIBUTION in found
    assert NO_ENABLED_ACTION in found


def test_spec_states_must_be_absorbing():
    pomdp = two_state_model()
    assert NOT_ABSORBING in codes(validate(pomdp, Specification.of([0], [])))


def test_make_absorbing_adds_self_loops():
    builder = PomdpBuilder()
    start = builder.add_state("s", "o")
    goal = builder.add_state("goal", "g")
    builder.add_outcome(start, "go", goal, 1)
    builder.add_outcome(goal, "go", start, 1)
    builder.set_initial([start])
    model = builder.build()
    goal_spec = Specification.of([goal], [])

    absorbing = make_absorbing(model, goal_spec)
    assert absorbing.distribution(goal, 0) == ((goal, Fraction(1)),)
    assert absorbing.distribution(start, 0) == ((goal, Fraction(1)),)
    assert validate(absorbing, goal_spec) == []


def test_make_absorbing_is_idempotent(cheese):
    pomdp, spec = cheese
    assert make_absorbing(pomdp, spec) is pomdp
    assert make_absorbing(make_absorbing(pomdp, spec), spec) == pomdp


def test_support_update_splits_by_observation(cheese):
    pomdp, _ = cheese
    north = pomdp.action_index("north")
    successors = support_update(pomdp, named_support(pomdp, "6", "8"), north)
    assert set(successors) == {named_support(pomdp, "1"), named_support(pomdp, "5")}


def test_support_update_into_reach(cheese):
    pomdp, _ = cheese
    south = pomdp.action_index("south")
    assert support_update(pomdp, named_support(pomdp, "7"), south) == (named_support(pomdp, "10"),)


def test_support_update_on_absorbing_state(cheese):
    pomdp, _ = cheese
    trap = named_support(pomdp, "9")
    assert support_update(pomdp, trap, pomdp.action_index("north")) == (trap,)


def test_support_update_with_disabled_action(cheese):
    pomdp, _ = cheese
    with pytest.raises(PomdpException):
        support_update(pomdp, named_support(pomdp, "6", "8"), pomdp.action_index("east"))


def test_observed_update(cheese):
    pomdp, _ = cheese
    support = named_support(pomdp, "6", "8")
    north = pomdp.action_index("north")
    assert observed_update(pomdp, support, north, pomdp.observation_index("sw")) == named_support(pomdp, "5")
    with pytest.raises(PomdpException):
        observed_update(pomdp, support, north, pomdp.observation_index("cheese"))


def test_belief_support_construction(cheese):
    pomdp, _ = cheese
    with pytest.raises(PomdpException):
        BeliefSupport.of(pomdp, [])
    with pytest.raises(PomdpException):
        BeliefSupport.of(pomdp, pomdp.states_named(["1", "2"]))
    with pytest.raises(PomdpException):
        BeliefSupport(0, 0)

    support = named_support(pomdp, "2", "4")
    assert len(support) == 2
    assert pomdp.state_index("4") in support
    assert named_support(pomdp, "2").issubset(support)
    assert support.describe(pomdp) == "ew:{2,4}"
    assert BeliefSupport.full(pomdp, pomdp.observation_index("ns")) == named_support(pomdp, "6", "7", "8")


def test_split_by_observation(cheese):
    pomdp, _ = cheese
    parts = split_by_observation(pomdp, mask_of(pomdp.states_named(["1", "2", "4", "10"])))
    assert parts == (named_support(pomdp, "1"), named_support(pomdp, "2", "4"), named_support(pomdp, "10"))


def test_lifted_specification(cheese):
    pomdp, spec = cheese
    lifted = spec.lifted()
    assert lifted.reach_lifted(named_support(pomdp, "10"))
    assert lifted.avoid_lifted(named_support(pomdp, "9", "11"))
    assert not lifted.avoid_lifted(named_support(pomdp, "6", "8"))
    assert not lifted.reach_lifted(named_support(pomdp, "6", "8"))


def test_observable_reach_drops_shared_observations():
    builder = PomdpBuilder()
    goal = builder.add_state("goal", "shared")
    other = builder.add_state("other", "shared")
    alone = builder.add_state("alone", "own")
    for state in (goal, other, alone):
        builder.add_outcome(state, "stay", state, 1)
    builder.set_initial([other])
    pomdp = builder.build()

    restricted = observable_reach(pomdp, Specification.of([goal, alone], []))
    assert restricted.reach == frozenset({alone})


def test_malformed_models_are_rejected():
    with pytest.raises(PomdpException):
        Pomdp(
            state_names=("s",),
            action_names=("a",),
            observation_names=("o",),
            observation_of=(1,),
            transitions={},
            initial_support=frozenset({0}),
        )
    builder = PomdpBuilder()
    builder.add_state("s", "o")
    with pytest.raises(PomdpException):
        builder.add_state("s", "o")
    with pytest.raises(PomdpException):
        two_state_model().state_index("missing")
