from collections import deque
from typing import Dict, List, Tuple

from src.pomdp.belief_support import BeliefSupport, support_update
from src.pomdp.pomdp import Pomdp
from src.pomdp.specification import Specification
from src.winning.region_store import WinningRegionStore


def safe_actions(store: WinningRegionStore, pomdp: Pomdp, support: BeliefSupport) -> List[Tuple[int, Tuple[BeliefSupport, ...]]]:
    """Actions of support whose successor supports are all winning, with those successors."""
    result = []
    for action in pomdp.observation_actions(support.observation):
        successors = support_update(pomdp, support, action)
        if all(store.is_winning(successor) for successor in successors):
            result.append((action, successors))
    return result


def is_deadlock_free(store: WinningRegionStore, pomdp: Pomdp) -> bool:
    """Every live entry has an action keeping all successor supports winning."""
    return all(safe_actions(store, pomdp, entry.support) for entry in store.live_entries())


def is_productive(store: WinningRegionStore, pomdp: Pomdp, spec: Specification) -> bool:
    """
    Checks that every live entry, and every support met from one under region-preserving
    actions, has such a path to a support inside REACH.

    Args:
        store (WinningRegionStore): The region to check.
        pomdp (Pomdp): The model the region belongs to.
        spec (Specification): Supplies REACH.

    Returns:
        bool: True iff no explored support is stuck in the region without a way out to REACH.
    """
    lifted = spec.lifted()
    index: Dict[BeliefSupport, int] = {}
    nodes: List[BeliefSupport] = []
    predecessors: List[List[int]] = []

    def visit(support: BeliefSupport) -> int:
        if support not in index:
            index[support] = len(nodes)
            nodes.append(support)
            predecessors.append([])
            queue.append(support)
        return index[support]

    queue = deque()
    for entry in store.live_entries():
        visit(entry.support)
    while queue:
        support = queue.popleft()
        source = index[support]
        for _, successors in safe_actions(store, pomdp, support):
            for successor in successors:
                predecessors[visit(successor)].append(source)

    productive = [lifted.reach_lifted(support) for support in nodes]
    frontier = deque(node for node, good in enumerate(productive) if good)
    while frontier:
        node = frontier.popleft()
        for predecessor in predecessors[node]:
            if not productive[predecessor]:
                productive[predecessor] = True
                frontier.append(predecessor)
    return all(productive)
