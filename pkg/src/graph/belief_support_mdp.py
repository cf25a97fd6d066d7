from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from src.config.defaults import ORACLE_NODE_CAP
from src.graph.graph_exception import BudgetExceededException
from src.graph.mdp_view import MdpView
from src.logger.logger import Logger
from src.pomdp.belief_support import BeliefSupport, support_update
from src.pomdp.bits import popcount
from src.pomdp.pomdp import Pomdp
from src.pomdp.specification import Specification

logger = Logger(__name__)


@dataclass
class ExplicitBeliefSupportMdp:
    """
    The belief-support MDP, explicitly enumerated.

    Node i is the support nodes[i]; edges[i] maps each action enabled at the
    support's observation to the sorted indices of its successor supports.
    """

    pomdp: Pomdp
    nodes: List[BeliefSupport]
    edges: List[Dict[int, Tuple[int, ...]]]
    avoid_flags: List[bool]
    reach_flags: List[bool]
    index: Dict[BeliefSupport, int] = field(repr=False)

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    def node_index(self, support: BeliefSupport) -> Optional[int]:
        return self.index.get(support)

    def avoid_nodes(self) -> List[int]:
        return [node for node, flag in enumerate(self.avoid_flags) if flag]

    def reach_nodes(self) -> List[int]:
        return [node for node, flag in enumerate(self.reach_flags) if flag]

    def as_view(self) -> MdpView:
        return MdpView([{action: frozenset(targets) for action, targets in by_action.items()} for by_action in self.edges])


def count_supports(pomdp: Pomdp) -> int:
    """Number of nonempty observation-uniform supports."""
    return sum(2 ** popcount(pomdp.observation_states(observation)) - 1 for observation in range(pomdp.num_observations))


def build_belief_support_mdp(
    pomdp: Pomdp,
    spec: Specification,
    seeds: Optional[Iterable[BeliefSupport]] = None,
    cap: int = ORACLE_NODE_CAP,
) -> ExplicitBeliefSupportMdp:
    """
    Enumerates the belief-support MDP.

    Args:
        pomdp (Pomdp): The model.
        spec (Specification): Used for the lifted REACH and AVOID flags.
        seeds (Optional[Iterable[BeliefSupport]]): Start supports for breadth-first exploration;
            None enumerates every observation-uniform support.
        cap (int): Maximal number of nodes.

    Raises:
        BudgetExceededException: If more than cap nodes would be created.
    """
    nodes: List[BeliefSupport] = []
    index: Dict[BeliefSupport, int] = {}

    def add(support: BeliefSupport) -> int:
        if support not in index:
            if len(nodes) >= cap:
                raise BudgetExceededException(f"Belief-support MDP exceeds the node cap of {cap}.")
            index[support] = len(nodes)
            nodes.append(support)
            queue.append(support)
        return index[support]

    queue = deque()
    if seeds is None:
        total = count_supports(pomdp)
        if total > cap:
            raise BudgetExceededException(
                f"Full enumeration needs {total} belief supports, the node cap is {cap}."
            )
        for observation in range(pomdp.num_observations):
            for members in sorted(_submasks(pomdp.observation_states(observation))):
                add(BeliefSupport(observation, members))
    else:
        for support in seeds:
            add(support)

    edges: Dict[int, Dict[int, Tuple[int, ...]]] = {}
    while queue:
        support = queue.popleft()
        source = index[support]
        by_action: Dict[int, Tuple[int, ...]] = {}
        for action in pomdp.observation_actions(support.observation):
            by_action[action] = tuple(sorted(add(successor) for successor in support_update(pomdp, support, action)))
        edges[source] = by_action

    lifted = spec.lifted()
    logger.debug(f"Belief-support MDP with {len(nodes)} nodes")
    return ExplicitBeliefSupportMdp(
        pomdp=pomdp,
        nodes=nodes,
        edges=[edges[node] for node in range(len(nodes))],
        avoid_flags=[lifted.avoid_lifted(support) for support in nodes],
        reach_flags=[lifted.reach_lifted(support) for support in nodes],
        index=index,
    )


def _submasks(mask: int) -> Iterable[int]:
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask
