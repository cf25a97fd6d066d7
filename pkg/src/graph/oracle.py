from typing import Dict, FrozenSet, List, Set, Tuple

from src.config.defaults import ORACLE_NODE_CAP
from src.graph.belief_support_mdp import ExplicitBeliefSupportMdp, build_belief_support_mdp
from src.graph.mdp_view import MdpView
from src.graph.qualitative import mdp_almost_sure_reach
from src.logger.logger import Logger
from src.pomdp.belief_support import BeliefSupport
from src.pomdp.bits import iter_bits
from src.pomdp.pomdp import Pomdp
from src.pomdp.specification import Specification
from src.winning.region_store import WinningRegionStore

logger = Logger(__name__)


def winning_nodes(mdp: ExplicitBeliefSupportMdp) -> FrozenSet[int]:
    """
    Nodes of the belief-support MDP from which some policy reaches lifted REACH
    almost surely without visiting AVOID.

    The policy randomizes over every action whose successor supports stay
    among the candidates. A candidate survives while every state of its
    support reaches lifted REACH almost surely in the product of states and
    supports under these actions; a node whose support holds a state that
    never leaves is dropped even if the node itself keeps a way out.
    """
    supports = mdp.as_view()
    candidate = {node for node in supports.states() if not mdp.avoid_flags[node]}
    while True:
        allowed = {
            node: [action for action in supports.actions(node) if supports.post(node, action) <= candidate]
            for node in candidate
        }
        chain, pairs = _product_chain(mdp, candidate, allowed)
        targets = [index for index, (_, node) in enumerate(pairs) if mdp.reach_flags[node]]
        winning_pairs = mdp_almost_sure_reach(chain, targets)
        losing = {node for index, (_, node) in enumerate(pairs) if index not in winning_pairs}
        if not losing:
            return frozenset(candidate)
        candidate -= losing


def _product_chain(
    mdp: ExplicitBeliefSupportMdp, candidate: Set[int], allowed: Dict[int, List[int]]
) -> Tuple[MdpView, List[Tuple[int, int]]]:
    """Markov chain on (state, node) pairs under uniform randomization over the allowed actions."""
    pomdp = mdp.pomdp
    pairs = [(state, node) for node in sorted(candidate) for state in mdp.nodes[node].states()]
    index = {pair: position for position, pair in enumerate(pairs)}
    successors = []
    for state, node in pairs:
        if mdp.reach_flags[node]:
            successors.append({0: frozenset({index[(state, node)]})})
            continue
        targets = set()
        for action in allowed[node]:
            by_observation = {mdp.nodes[target].observation: target for target in mdp.edges[node][action]}
            for successor in iter_bits(pomdp.post(state, action)):
                targets.add(index[(successor, by_observation[pomdp.observation(successor)])])
        successors.append({0: frozenset(targets)} if targets else {})
    return MdpView(successors), pairs


def maximal_winning_region(
    pomdp: Pomdp,
    spec: Specification,
    cap: int = ORACLE_NODE_CAP,
    from_initial: bool = False,
) -> WinningRegionStore:
    """
    Computes the winning supports on the explicit belief-support MDP.

    With from_initial=False every observation-uniform support is enumerated and
    the store holds the maximal winning region. With from_initial=True only the
    supports reachable from the initial support are explored, which is enough
    to decide whether the initial support is winning.

    Raises:
        BudgetExceededException: If the enumeration needs more than cap nodes.
    """
    seeds = [BeliefSupport.initial(pomdp)] if from_initial else None
    mdp = build_belief_support_mdp(pomdp, spec, seeds=seeds, cap=cap)
    winning = winning_nodes(mdp)

    store = WinningRegionStore(pomdp.num_observations)
    for node in sorted(winning, key=lambda node: (-len(mdp.nodes[node]), mdp.nodes[node])):
        store.insert(mdp.nodes[node])
    logger.info(
        f"Oracle: {len(winning)} of {mdp.num_nodes} belief supports winning, "
        f"{store.live_count} maximal entries"
    )
    return store
