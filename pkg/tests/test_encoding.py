import pytest
import z3

from src.encoding.decode import decode
from src.encoding.encoding_exception import EncodingException
from src.encoding.incremental import encode_bounds, encode_fixed, encode_progress, encode_region
from src.encoding.oneshot import encode_oneshot
from src.encoding.transform import BOTTOM, TOP, add_shortcut, lift_specification, original_part, unfold_memory
from src.encoding.variable_book import Family, VariableBook
from src.pomdp.belief_support import BeliefSupport
from src.pomdp.bits import mask_of
from src.pomdp.validation import validate
from src.solver.solver_session import SolverSession
from src.solver.z3_backend import Z3Backend
from src.winning.region_store import WinningRegionStore
from tests.corpus import SMALL_SEEDS, named_support, small_instance


def oneshot_result(pomdp, spec, initial, rank_bound):
    with SolverSession(backend=Z3Backend()) as session:
        book = VariableBook(session, pomdp, [Family.BOUNDED_RANK], rank_bound=rank_bound)
        session.add(*encode_oneshot(pomdp, spec, initial, book))
        result = session.check()
        return result, (decode(result.model, book) if result.is_sat else None)


def test_variable_names(cheese):
    pomdp, _ = cheese
    with SolverSession(backend=Z3Backend()) as session:
        book = VariableBook(session, pomdp, [Family.PROGRESS, Family.SHORTCUT])
        assert book.name("U", 3) == "U_3"
        assert book.name("A", 0, 1) == "A_0_1"
        assert session.is_declared("Sw_2")
        assert session.is_declared("D_10")
        assert not session.is_declared("r_0")


def test_bounded_rank_needs_a_bound(cheese):
    pomdp, _ = cheese
    with SolverSession(backend=Z3Backend()) as session:
        with pytest.raises(EncodingException):
            VariableBook(session, pomdp, [Family.BOUNDED_RANK])


def test_no_memoryless_policy_from_the_initial_support(cheese):
    pomdp, spec = cheese
    result, _ = oneshot_result(pomdp, spec, BeliefSupport.initial(pomdp), pomdp.num_states)
    assert result.is_unsat


def test_memoryless_policy_from_the_top_left_corner(cheese):
    pomdp, spec = cheese
    result, decoded = oneshot_result(pomdp, spec, named_support(pomdp, "1"), pomdp.num_states)
    assert result.is_sat
    policy, supports = decoded
    assert set(pomdp.states_named(["1", "2", "3", "7", "10"])) <= set(policy.reached_states())
    assert pomdp.action_index("south") in policy.actions[pomdp.observation_index("ns")]
    assert named_support(pomdp, "10") in supports
    assert all(not support.members & spec.avoid_mask for support in supports)
    assert policy.switch == frozenset()


def test_rank_bound_limits_path_length(cheese):
    pomdp, spec = cheese
    # 1 -> 2 -> 3 -> 7 -> 10
    assert oneshot_result(pomdp, spec, named_support(pomdp, "1"), 3)[0].is_unsat
    assert oneshot_result(pomdp, spec, named_support(pomdp, "1"), 4)[0].is_sat


def test_decode_reports_missing_values(cheese):
    pomdp, _ = cheese
    with SolverSession(backend=Z3Backend()) as session:
        book = VariableBook(session, pomdp, [])
        with pytest.raises(EncodingException):
            decode({}, book)


def test_progress_requires_an_uncovered_support(cheese):
    pomdp, _ = cheese
    store = WinningRegionStore(pomdp.num_observations)
    store.insert(named_support(pomdp, "6", "8"))

    def check(reached):
        with SolverSession(backend=Z3Backend()) as session:
            book = VariableBook(session, pomdp, [Family.PROGRESS])
            session.add(*encode_progress(pomdp, book, store))
            session.add(*[book.C(state) == (pomdp.state_names[state] in reached) for state in pomdp.states()])
            result = session.check()
            return result, book

    covered, _ = check({"6"})
    assert covered.is_unsat

    uncovered, book = check({"6", "7"})
    assert uncovered.is_sat
    assert uncovered.model[book.name("U", pomdp.observation_index("ns"))]

    assert check({"1"})[0].is_sat


def test_progress_restricted_to_observations(cheese):
    pomdp, _ = cheese
    store = WinningRegionStore(pomdp.num_observations)
    with SolverSession(backend=Z3Backend()) as session:
        book = VariableBook(session, pomdp, [Family.PROGRESS])
        session.add(*encode_progress(pomdp, book, store, observations=[pomdp.observation_index("ns")]))
        session.add(book.C(pomdp.state_index("1")))
        session.add(*[z3.Not(book.C(state)) for state in pomdp.states_named(["6", "7", "8"])])
        assert session.check().is_unsat


def test_region_constraints_restrict_shortcut_indices(cheese):
    pomdp, _ = cheese
    ns = pomdp.observation_index("ns")
    store = WinningRegionStore(pomdp.num_observations)
    store.insert(named_support(pomdp, "6", "8"))

    def check(state, index):
        with SolverSession(backend=Z3Backend()) as session:
            book = VariableBook(session, pomdp, [Family.SHORTCUT])
            session.add(*encode_region(pomdp, book, store))
            session.add(*encode_bounds(pomdp, book, store))
            session.add(book.D(pomdp.state_index(state)), book.P(ns) == index)
            return session.check()

    assert check("6", 1).is_sat
    assert check("7", 1).is_unsat
    assert check("6", 2).is_unsat


def test_region_constraints_skip_encoded_entries(cheese):
    pomdp, _ = cheese
    store = WinningRegionStore(pomdp.num_observations)
    store.insert(named_support(pomdp, "6", "8"))
    with SolverSession(backend=Z3Backend()) as session:
        book = VariableBook(session, pomdp, [Family.SHORTCUT])
        assert len(encode_region(pomdp, book, store)) == 1
        assert encode_region(pomdp, book, store, encoded={pomdp.observation_index("ns"): 1}) == []


@pytest.mark.parametrize("seed", SMALL_SEEDS)
def test_oneshot_and_shortcut_encodings_agree_without_shortcuts(seed):
    pomdp, spec = small_instance(seed)
    initial = BeliefSupport.initial(pomdp)
    oneshot, _ = oneshot_result(pomdp, spec, initial, pomdp.num_states)

    with SolverSession(backend=Z3Backend()) as session:
        book = VariableBook(session, pomdp, [Family.REAL_RANK, Family.SHORTCUT])
        store = WinningRegionStore(pomdp.num_observations)
        session.add(*encode_fixed(pomdp, spec, book))
        session.add(*encode_bounds(pomdp, book, store))
        session.add(*[book.C(state) for state in initial.states()])
        fixed = session.check()

    assert oneshot.status is fixed.status


def test_unfold_memory(cheese):
    pomdp, spec = cheese
    assert unfold_memory(pomdp, 1) is pomdp

    unfolded = unfold_memory(pomdp, 2)
    lifted = lift_specification(spec, 2)
    assert (unfolded.num_states, unfolded.num_observations, unfolded.num_actions) == (22, 14, 8)
    assert unfolded.transition_count == 4 * pomdp.transition_count
    assert unfolded.initial_support == frozenset({10, 14})
    assert lifted.reach == frozenset({18, 19})
    assert unfolded.state_names[11] == "6|m1"


def test_unfold_memory_limits(cheese):
    pomdp, _ = cheese
    with pytest.raises(EncodingException):
        unfold_memory(pomdp, 0)
    with pytest.raises(EncodingException):
        unfold_memory(pomdp, 2, limit=20)


def test_add_shortcut(cheese):
    pomdp, spec = cheese
    region = pomdp.states_named(["1", "3"])
    extended, extended_spec = add_shortcut(pomdp, spec, region)
    top, bottom = extended.state_index(TOP), extended.state_index(BOTTOM)
    shortcut = extended.action_index("shortcut0")

    assert extended.num_states == pomdp.num_states + 2
    assert extended.post(pomdp.state_index("1"), shortcut) == 1 << top
    assert extended.post(pomdp.state_index("2"), shortcut) == 1 << bottom
    goal = pomdp.state_index("10")
    assert extended.post(goal, shortcut) == 1 << goal
    assert top in extended_spec.reach and bottom in extended_spec.avoid
    assert validate(extended, extended_spec) == []

    again, _ = add_shortcut(extended, extended_spec, [])
    assert again.num_states == extended.num_states
    assert again.action_names[-1] == "shortcut1"
    assert again.post(pomdp.state_index("1"), again.action_index("shortcut1")) == 1 << bottom


def test_original_part():
    assert original_part(mask_of([0, 3, 11, 12]), 11) == mask_of([0, 3])
