"""
Constraints of the shortcut-based encoding.

Reached states follow a memoryless policy until they switch to a previously
found policy, identified by the index of its region entry. The fixed part
depends on the model only, the region part grows with the store, and bounds
and progress are rebuilt whenever the store changes.
"""
from typing import Iterable, List, Mapping, Optional

import z3

from src.encoding.oneshot import _any, encode_real_rank, reach_condition
from src.encoding.variable_book import VariableBook
from src.pomdp.bits import iter_bits
from src.pomdp.pomdp import Pomdp
from src.pomdp.specification import Specification
from src.winning.region_store import WinningRegionStore


def encode_fixed(
    pomdp: Pomdp,
    spec: Specification,
    book: VariableBook,
    immediate: bool = False,
    unsafe: int = 0,
) -> List[z3.BoolRef]:
    """
    Args:
        pomdp (Pomdp): The model, REACH and AVOID absorbing.
        spec (Specification): The reach-avoid objective.
        book (VariableBook): Declared with the REAL_RANK and SHORTCUT families.
        immediate (bool): Allow shortcuts in the reached states themselves, not only after the next action.
        unsafe (int): Bit mask of states that are never reached nor shortcut from.
    """
    constraints = []
    for observation in range(pomdp.num_observations):
        constraints.append(book.P(observation) >= 0)
        if not immediate:
            constraints.append(z3.Not(book.Im(observation)))

    for state in pomdp.states():
        observation = pomdp.observation(state)
        reached = book.C(state)
        constraints.append(z3.Implies(book.D(state), book.P(observation) > 0))
        if state in spec.avoid or unsafe >> state & 1:
            constraints.append(z3.Not(reached))
            constraints.append(z3.Not(book.D(state)))
            continue
        actions = pomdp.enabled_actions(state)
        constraints.append(z3.Implies(reached, _any([book.A(observation, action) for action in actions])))
        constraints.append(z3.Implies(z3.And(reached, book.Im(observation)), book.D(state)))
        guard = reached
        if state in spec.reach:
            condition = reach_condition(pomdp, spec, book, state)
            if condition is None:
                continue
            guard = z3.And(reached, z3.Not(condition))
        stays = z3.And(z3.Not(book.Sw(observation)), z3.Not(book.Im(observation)))
        for action in actions:
            chosen = z3.And(guard, book.A(observation, action))
            for successor in iter_bits(pomdp.post(state, action)):
                constraints.append(z3.Implies(z3.And(chosen, stays), book.C(successor)))
                constraints.append(z3.Implies(z3.And(chosen, book.Sw(observation)), book.D(successor)))

    constraints += encode_real_rank(
        pomdp, spec, book, escape=lambda observation: z3.Or(book.Sw(observation), book.Im(observation))
    )
    return constraints


def encode_region(
    pomdp: Pomdp,
    book: VariableBook,
    store: WinningRegionStore,
    encoded: Optional[Mapping[int, int]] = None,
) -> List[z3.BoolRef]:
    """
    Shortcut index i at observation z is only usable by states inside entry i of z.

    encoded gives, per observation, how many entries already have their
    constraints asserted; only later entries are encoded. Tombstoned entries
    are encoded like live ones.
    """
    encoded = encoded or {}
    constraints = []
    for observation in range(pomdp.num_observations):
        states = pomdp.observation_states(observation)
        for entry in store.entries(observation)[encoded.get(observation, 0):]:
            for state in iter_bits(states & ~entry.support.members):
                constraints.append(z3.Implies(book.D(state), book.P(observation) != entry.index))
    return constraints


def encode_bounds(pomdp: Pomdp, book: VariableBook, store: WinningRegionStore) -> List[z3.BoolRef]:
    return [book.P(observation) <= store.entry_count(observation) for observation in range(pomdp.num_observations)]


def encode_progress(
    pomdp: Pomdp,
    book: VariableBook,
    store: WinningRegionStore,
    observations: Optional[Iterable[int]] = None,
) -> List[z3.BoolRef]:
    """
    Some observation has reached states not contained in any live entry.

    Args:
        observations (Optional[Iterable[int]]): Observations that may witness progress; all by default.
    """
    if observations is None:
        observations = range(store.num_observations)
    constraints = []
    witnesses = []
    for observation in observations:
        states = pomdp.observation_states(observation)
        if not states:
            continue
        entries = list(store.live_entries(observation))
        if entries:
            uncovered = z3.And(
                [_any([book.C(state) for state in iter_bits(states & ~entry.support.members)]) for entry in entries]
            )
        else:
            uncovered = _any([book.C(state) for state in iter_bits(states)])
        constraints.append(book.U(observation) == uncovered)
        witnesses.append(book.U(observation))
    constraints.append(_any(witnesses))
    return constraints
