"""Qualitative (support-based) model checking on MDP views."""
from collections import deque
from enum import Enum
from typing import FrozenSet, Iterable, Set

from src.graph.mdp_view import MdpView


class Quantifier(Enum):
    EXISTS_POLICY = "exists_policy"
    FOR_ALL_POLICIES = "for_all_policies"


def mdp_safe_states(view: MdpView, avoid: Iterable[int]) -> FrozenSet[int]:
    """
    Greatest set of non-avoid states in which some action keeps all successors inside the set.

    Args:
        view (MdpView): The model.
        avoid (Iterable[int]): States to stay away from.

    Returns:
        FrozenSet[int]: The states from which some policy never visits avoid.
    """
    safe: Set[int] = set(view.states()) - set(avoid)
    queue = deque(sorted(safe))
    while queue:
        state = queue.popleft()
        if state not in safe:
            continue
        if not any(view.post(state, action) <= safe for action in view.actions(state)):
            safe.discard(state)
            queue.extend(predecessor for predecessor in view.predecessors(state) if predecessor in safe)
    return frozenset(safe)


def mdp_almost_sure_reach(
    view: MdpView,
    target: Iterable[int],
    quantifier: Quantifier = Quantifier.EXISTS_POLICY,
    avoid: Iterable[int] = (),
) -> FrozenSet[int]:
    """
    States reaching target with probability one while never visiting avoid.

    EXISTS_POLICY is the classical double fixpoint: shrink a candidate set to
    the states that can reach target with positive probability using only
    actions whose successors stay in the candidate set, until stable.
    FOR_ALL_POLICIES keeps the states from which no policy can avoid target
    forever or enter avoid before target.
    """
    target = frozenset(target)
    avoid = frozenset(avoid) - target
    if quantifier is Quantifier.FOR_ALL_POLICIES:
        return _for_all_reach(view, target, avoid)

    candidate = set(view.states()) - avoid
    while True:
        reached = {state for state in target if state in candidate}
        queue = deque(sorted(reached))
        while queue:
            state = queue.popleft()
            for predecessor in sorted(view.predecessors(state)):
                if predecessor in reached or predecessor not in candidate:
                    continue
                if any(
                    state in view.post(predecessor, action) and view.post(predecessor, action) <= candidate
                    for action in view.actions(predecessor)
                ):
                    reached.add(predecessor)
                    queue.append(predecessor)
        if reached == candidate:
            return frozenset(reached)
        candidate = reached


def _for_all_reach(view: MdpView, target: FrozenSet[int], avoid: FrozenSet[int]) -> FrozenSet[int]:
    # states that some policy keeps outside target forever, or that may enter avoid
    losing = set(mdp_safe_states(view, target)) | set(avoid)
    queue = deque(sorted(losing))
    while queue:
        state = queue.popleft()
        for predecessor in view.predecessors(state):
            if predecessor not in losing and predecessor not in target:
                losing.add(predecessor)
                queue.append(predecessor)
    return frozenset(set(view.states()) - losing)
