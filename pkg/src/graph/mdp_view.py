from typing import FrozenSet, Iterable, List, Mapping, Sequence

from src.pomdp.bits import iter_bits
from src.pomdp.pomdp import Pomdp


class MdpView:
    """
    Support-level view of an MDP: for every state, the successor set of each enabled action.

    Both a Pomdp (observations ignored) and an ExplicitBeliefSupportMdp can be
    viewed this way, so the qualitative algorithms run on either.
    """

    def __init__(self, successors: Sequence[Mapping[int, FrozenSet[int]]]):
        self.successors = successors
        self._predecessors = None

    @classmethod
    def from_pomdp(cls, pomdp: Pomdp) -> "MdpView":
        return cls(
            [
                {action: frozenset(iter_bits(pomdp.post(state, action))) for action in pomdp.enabled_actions(state)}
                for state in pomdp.states()
            ]
        )

    @property
    def num_states(self) -> int:
        return len(self.successors)

    def states(self) -> range:
        return range(len(self.successors))

    def actions(self, state: int) -> Iterable[int]:
        return self.successors[state].keys()

    def post(self, state: int, action: int) -> FrozenSet[int]:
        return self.successors[state][action]

    def predecessors(self, state: int) -> FrozenSet[int]:
        if self._predecessors is None:
            table: List[set] = [set() for _ in self.states()]
            for source, by_action in enumerate(self.successors):
                for targets in by_action.values():
                    for target in targets:
                        table[target].add(source)
            self._predecessors = [frozenset(entry) for entry in table]
        return self._predecessors[state]

