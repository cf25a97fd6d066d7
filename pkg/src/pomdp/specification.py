from dataclasses import dataclass, field
from typing import FrozenSet, Iterable

from src.pomdp.belief_support import BeliefSupport
from src.pomdp.bits import iter_bits, mask_of
from src.pomdp.pomdp import Pomdp


@dataclass(frozen=True)
class Specification:
    """Reach-avoid objective: reach a REACH state almost surely, never visit AVOID."""

    reach: FrozenSet[int]
    avoid: FrozenSet[int]

    reach_mask: int = field(init=False, repr=False, compare=False)
    avoid_mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "reach", frozenset(self.reach))
        object.__setattr__(self, "avoid", frozenset(self.avoid))
        object.__setattr__(self, "reach_mask", mask_of(self.reach))
        object.__setattr__(self, "avoid_mask", mask_of(self.avoid))

    @classmethod
    def of(cls, reach: Iterable[int], avoid: Iterable[int]) -> "Specification":
        return cls(frozenset(reach), frozenset(avoid))

    @property
    def spec_states(self) -> FrozenSet[int]:
        return self.reach | self.avoid

    def lifted(self) -> "LiftedSpecification":
        return LiftedSpecification(self)


class LiftedSpecification:
    """REACH and AVOID lifted to belief supports."""

    def __init__(self, spec: Specification):
        self.spec = spec

    def avoid_lifted(self, support: BeliefSupport) -> bool:
        return support.members & self.spec.avoid_mask != 0

    def reach_lifted(self, support: BeliefSupport) -> bool:
        return support.members & ~self.spec.reach_mask == 0


def observable_reach(pomdp: Pomdp, spec: Specification) -> Specification:
    """
    spec with REACH cut down to the observations whose states all lie in REACH.

    Entering such a state puts the belief support inside REACH whatever the
    other reached states are. Graph preprocessing aims at this restriction.
    """
    reach = set()
    for observation in range(pomdp.num_observations):
        states = pomdp.observation_states(observation)
        if states and states & ~spec.reach_mask == 0:
            reach.update(iter_bits(states))
    return Specification.of(reach, spec.avoid)
