"""Memoryless policy constraints: reachability closure plus bounded or real-valued ranking."""
from typing import List, Optional

import z3

from src.encoding.variable_book import VariableBook
from src.pomdp.belief_support import BeliefSupport
from src.pomdp.bits import iter_bits
from src.pomdp.pomdp import Pomdp
from src.pomdp.specification import Specification


def _any(terms: List[z3.BoolRef]) -> z3.BoolRef:
    if not terms:
        return z3.BoolVal(False)
    return terms[0] if len(terms) == 1 else z3.Or(terms)


def _all(terms: List[z3.BoolRef]) -> z3.BoolRef:
    if not terms:
        return z3.BoolVal(True)
    return terms[0] if len(terms) == 1 else z3.And(terms)


def reach_condition(pomdp: Pomdp, spec: Specification, book: VariableBook, state: int) -> Optional[z3.BoolRef]:
    """
    When a reached REACH state counts as a target.

    The reached states of an observation form a belief support, which is only
    inside REACH if no non-REACH state of that observation is reached. Returns
    None when the observation has no such state and the state is always a target.
    """
    others = pomdp.observation_states(pomdp.observation(state)) & ~spec.reach_mask
    if not others:
        return None
    return _all([z3.Not(book.C(other)) for other in iter_bits(others)])


def encode_policy(pomdp: Pomdp, spec: Specification, book: VariableBook) -> List[z3.BoolRef]:
    """Reached states take an action, chosen actions keep successors reached, AVOID is never reached."""
    constraints = []
    for state in pomdp.states():
        reached = book.C(state)
        if state in spec.avoid:
            constraints.append(z3.Not(reached))
            continue
        observation = pomdp.observation(state)
        actions = pomdp.enabled_actions(state)
        constraints.append(z3.Implies(reached, _any([book.A(observation, action) for action in actions])))
        guard = reached
        if state in spec.reach:
            condition = reach_condition(pomdp, spec, book, state)
            if condition is None:
                continue
            guard = z3.And(reached, z3.Not(condition))
        for action in actions:
            for successor in iter_bits(pomdp.post(state, action)):
                constraints.append(z3.Implies(z3.And(guard, book.A(observation, action)), book.C(successor)))
    return constraints


def encode_bounded_rank(pomdp: Pomdp, spec: Specification, book: VariableBook) -> List[z3.BoolRef]:
    """
    Every reached state gets a rank at most k; rank j > 0 needs a chosen action with a successor of rank j - 1.

    Rank 0 is reserved for REACH states while they count as targets.
    """
    bound = book.rank_bound
    constraints = []
    for state in pomdp.states():
        if state in spec.reach:
            condition = reach_condition(pomdp, spec, book, state)
            if condition is None:
                continue
            constraints.append(z3.Implies(book.C(state), z3.Or(condition, book.R(state, bound))))
            constraints.append(z3.Implies(book.R(state, 0), condition))
        else:
            constraints.append(z3.Implies(book.C(state), book.R(state, bound)))
            constraints.append(z3.Not(book.R(state, 0)))
        observation = pomdp.observation(state)
        for rank in range(1, bound + 1):
            steps = [
                z3.And(book.A(observation, action), _any([book.R(successor, rank - 1) for successor in iter_bits(pomdp.post(state, action))]))
                for action in pomdp.enabled_actions(state)
            ]
            constraints.append(z3.Implies(book.R(state, rank), _any(steps)))
    return constraints


def encode_real_rank(pomdp: Pomdp, spec: Specification, book: VariableBook, escape=None) -> List[z3.BoolRef]:
    """
    Ranking over real variables: a reached state that is not a target has a
    chosen action with a successor of strictly smaller rank. escape(observation),
    when given, returns an extra disjunct that releases the state from this obligation.
    """
    constraints = []
    for state in pomdp.states():
        if state in spec.avoid:
            continue
        condition = None
        if state in spec.reach:
            condition = reach_condition(pomdp, spec, book, state)
            if condition is None:
                continue
        observation = pomdp.observation(state)
        options = [
            z3.And(
                book.A(observation, action),
                _any([book.r(state) > book.r(successor) for successor in iter_bits(pomdp.post(state, action))]),
            )
            for action in pomdp.enabled_actions(state)
        ]
        if escape is not None:
            options.append(escape(observation))
        if condition is not None:
            options.append(condition)
        constraints.append(z3.Implies(book.C(state), _any(options)))
    return constraints


def encode_oneshot(pomdp: Pomdp, spec: Specification, initial: BeliefSupport, book: VariableBook) -> List[z3.BoolRef]:
    """
    The one-shot system for a memoryless winning policy from initial.

    Args:
        pomdp (Pomdp): The model, REACH and AVOID absorbing.
        spec (Specification): The reach-avoid objective.
        initial (BeliefSupport): The support the policy has to win from.
        book (VariableBook): Declared with the BOUNDED_RANK family and rank bound k.

    Returns:
        List[z3.BoolRef]: Satisfiable iff a memoryless policy reaches REACH within k steps
        along some path from every reached state while never visiting AVOID.
    """
    constraints = [book.C(state) for state in initial.states()]
    constraints += encode_policy(pomdp, spec, book)
    constraints += encode_bounded_rank(pomdp, spec, book)
    return constraints
