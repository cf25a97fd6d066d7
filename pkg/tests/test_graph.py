import pytest

from src.graph.belief_support_mdp import build_belief_support_mdp, count_supports
from src.graph.graph_exception import BudgetExceededException
from src.graph.mdp_view import MdpView
from src.graph.oracle import maximal_winning_region, winning_nodes
from src.graph.preprocessing import graph_preprocessing, unsafe_states, winning_observations_fixpoint
from src.graph.qualitative import Quantifier, mdp_almost_sure_reach, mdp_safe_states
from src.pomdp.belief_support import BeliefSupport, split_by_observation
from src.pomdp.bits import iter_bits, mask_of
from src.pomdp.specification import Specification
from src.winning.region_store import WinningRegionStore
from tests.corpus import CORPUS_SEEDS, brute_force_winning, corpus_instance, named_support, policy_count, trap_model


def view(*states):
    return MdpView([{action: frozenset(targets) for action, targets in enumerate(state)} for state in states])


def test_safe_states_follow_the_escape_action():
    # 0 -> 1; 1 can stay or fall into 2
    model = view([{1}], [{2}, {1}], [{2}])
    assert mdp_safe_states(model, avoid=[2]) == frozenset({0, 1})


def test_safe_states_lose_forced_predecessors():
    model = view([{1}], [{2}], [{2}])
    assert mdp_safe_states(model, avoid=[2]) == frozenset()


def test_coin_flip_into_a_sink_is_not_almost_sure():
    model = view([{1, 2}], [{1}], [{2}])
    assert mdp_almost_sure_reach(model, [1]) == frozenset({1})


def test_retrying_is_almost_sure():
    model = view([{0, 1}, {0}], [{1}])
    assert mdp_almost_sure_reach(model, [1], Quantifier.EXISTS_POLICY) == frozenset({0, 1})
    assert mdp_almost_sure_reach(model, [1], Quantifier.FOR_ALL_POLICIES) == frozenset({1})


def test_for_all_policies_without_a_way_to_stall():
    model = view([{0, 1}], [{1}])
    assert mdp_almost_sure_reach(model, [1], Quantifier.FOR_ALL_POLICIES) == frozenset({0, 1})


def test_avoid_blocks_almost_sure_reach():
    model = view([{1}, {2}], [{1}], [{2}])
    assert mdp_almost_sure_reach(model, [2], avoid=[1]) == frozenset({0, 2})
    assert mdp_almost_sure_reach(model, [2], Quantifier.FOR_ALL_POLICIES, avoid=[1]) == frozenset({2})


def test_predecessors():
    model = view([{1}, {2}], [{1}], [{0}])
    assert model.predecessors(0) == frozenset({2})
    assert model.predecessors(1) == frozenset({0, 1})


def test_cheese_oracle(cheese, cheese_oracle):
    pomdp, _ = cheese
    expected = {
        named_support(pomdp, *names)
        for names in (("1",), ("2", "4"), ("3",), ("5",), ("6", "7", "8"), ("10",))
    }
    assert cheese_oracle.maximal_supports() == expected
    assert cheese_oracle.is_winning(BeliefSupport.initial(pomdp))
    assert not cheese_oracle.is_winning(named_support(pomdp, "9", "11"))
    assert cheese_oracle.region_size().estimate == 14


def test_cheese_belief_support_mdp(cheese):
    pomdp, spec = cheese
    assert count_supports(pomdp) == 17
    mdp = build_belief_support_mdp(pomdp, spec)
    assert mdp.num_nodes == 17
    initial = mdp.node_index(BeliefSupport.initial(pomdp))
    north = pomdp.action_index("north")
    successors = {mdp.nodes[node] for node in mdp.edges[initial][north]}
    assert successors == {named_support(pomdp, "1"), named_support(pomdp, "5")}
    assert [mdp.nodes[node] for node in mdp.reach_nodes()] == [named_support(pomdp, "10")]


def test_from_initial_explores_reachable_supports(cheese):
    pomdp, spec = cheese
    store = maximal_winning_region(pomdp, spec, from_initial=True)
    assert store.is_winning(BeliefSupport.initial(pomdp))


def test_everything_wins_when_everything_is_reach(cheese):
    pomdp, _ = cheese
    store = maximal_winning_region(pomdp, Specification.of(pomdp.states(), []))
    assert store.live_count == pomdp.num_observations
    for observation in range(pomdp.num_observations):
        assert store.is_winning(BeliefSupport.full(pomdp, observation))


def test_node_cap(cheese):
    pomdp, spec = cheese
    with pytest.raises(BudgetExceededException):
        maximal_winning_region(pomdp, spec, cap=5)
    with pytest.raises(BudgetExceededException):
        build_belief_support_mdp(pomdp, spec, seeds=[BeliefSupport.initial(pomdp)], cap=2)


@pytest.mark.parametrize("seed", CORPUS_SEEDS)
def test_oracle_agrees_with_policy_enumeration(seed):
    pomdp, spec = corpus_instance(seed)
    mdp = build_belief_support_mdp(pomdp, spec, seeds=[BeliefSupport.initial(pomdp)])
    if mdp.num_nodes > 10 or policy_count(mdp) > 5000:
        pytest.skip("too many policies to enumerate")
    assert winning_nodes(mdp) == brute_force_winning(mdp)


@pytest.mark.parametrize("seed", CORPUS_SEEDS)
def test_reachable_exploration_matches_full_oracle(seed, corpus_oracle):
    pomdp, spec = corpus_instance(seed)
    oracle = corpus_oracle(seed)
    mdp = build_belief_support_mdp(pomdp, spec, seeds=[BeliefSupport.initial(pomdp)])
    winning = winning_nodes(mdp)
    for node, support in enumerate(mdp.nodes):
        assert (node in winning) == oracle.is_winning(support)


def test_a_looping_state_spoils_its_support():
    pomdp, spec = trap_model()
    oracle = maximal_winning_region(pomdp, spec)
    assert oracle.is_winning(named_support(pomdp, "coin"))
    assert oracle.is_winning(named_support(pomdp, "goal"))
    assert not oracle.is_winning(named_support(pomdp, "trap"))
    assert not oracle.is_winning(named_support(pomdp, "trap", "coin"))


@pytest.mark.parametrize("seed", CORPUS_SEEDS)
def test_oracle_supports_hold_no_stuck_state(seed, corpus_oracle):
    pomdp, spec = corpus_instance(seed)
    for support in corpus_oracle(seed).maximal_supports():
        for state in support.states():
            if state in spec.reach:
                continue
            assert any(pomdp.post(state, action) != 1 << state for action in pomdp.enabled_actions(state))


def test_cheese_preprocessing_adds_nothing(cheese):
    pomdp, spec = cheese
    store = WinningRegionStore.from_reach(pomdp, spec)
    result = graph_preprocessing(pomdp, spec, store)
    assert result.added == 0
    assert result.sure == mask_of(pomdp.states_named(["10"]))
    assert result.winning_observations == frozenset({pomdp.observation_index("cheese")})
    assert set(iter_bits(result.unsafe)) == set(pomdp.states_named(["9", "11"]))
    assert store.maximal_supports() == {named_support(pomdp, "10")}


def test_preprocessing_is_idempotent(obstacle6):
    pomdp, spec = obstacle6
    store = WinningRegionStore.from_reach(pomdp, spec)
    winning_observations_fixpoint(pomdp, spec, store)
    before = store.maximal_supports()
    assert graph_preprocessing(pomdp, spec, store).added == 0
    assert store.maximal_supports() == before


@pytest.mark.parametrize("seed", CORPUS_SEEDS)
def test_preprocessing_is_sound(seed, corpus_oracle):
    pomdp, spec = corpus_instance(seed)
    oracle = corpus_oracle(seed)
    store = WinningRegionStore.from_reach(pomdp, spec)
    result = graph_preprocessing(pomdp, spec, store)
    assert oracle.covers(store)
    for support in split_by_observation(pomdp, result.unsafe):
        for state in support.states():
            assert not oracle.is_winning(BeliefSupport(support.observation, 1 << state))
    assert unsafe_states(pomdp, spec) == result.unsafe
