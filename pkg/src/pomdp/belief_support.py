from dataclasses import dataclass
from typing import Dict, Iterable, Tuple

from src.pomdp.bits import is_subset, iter_bits, mask_of, popcount
from src.pomdp.pomdp import Pomdp
from src.pomdp.pomdp_exception import PomdpException


@dataclass(frozen=True, order=True)
class BeliefSupport:
    """
    A nonempty set of states sharing one observation.

    Members are stored as a bit vector indexed by state. Ordering is by
    observation first, then by the bit vector value.
    """

    observation: int
    members: int

    def __post_init__(self):
        if self.members <= 0:
            raise PomdpException("A belief support needs at least one state.")

    @classmethod
    def of(cls, pomdp: Pomdp, states: Iterable[int]) -> "BeliefSupport":
        """
        Builds a support from a state collection.

        Raises:
            PomdpException: If states is empty or mixes observations.
        """
        mask = mask_of(states)
        if not mask:
            raise PomdpException("A belief support needs at least one state.")
        observations = {pomdp.observation(state) for state in iter_bits(mask)}
        if len(observations) != 1:
            raise PomdpException(f"States {sorted(iter_bits(mask))} do not share an observation.")
        return cls(observations.pop(), mask)

    @classmethod
    def initial(cls, pomdp: Pomdp) -> "BeliefSupport":
        return cls.of(pomdp, pomdp.initial_support)

    @classmethod
    def full(cls, pomdp: Pomdp, observation: int) -> "BeliefSupport":
        """All states labelled with observation."""
        return cls(observation, pomdp.observation_states(observation))

    def states(self) -> Tuple[int, ...]:
        return tuple(iter_bits(self.members))

    def issubset(self, other: "BeliefSupport") -> bool:
        return self.observation == other.observation and is_subset(self.members, other.members)

    def __contains__(self, state: int) -> bool:
        return bool(self.members >> state & 1)

    def __len__(self) -> int:
        return popcount(self.members)

    def describe(self, pomdp: Pomdp) -> str:
        names = ",".join(pomdp.state_names[state] for state in self.states())
        return f"{pomdp.observation_names[self.observation]}:{{{names}}}"


def successor_mask(pomdp: Pomdp, support: BeliefSupport, action: int) -> int:
    """Union of post(s, action) over the members of support."""
    successors = 0
    for state in iter_bits(support.members):
        if not pomdp.is_enabled(state, action):
            raise PomdpException(
                f"Action {pomdp.action_names[action]} is not enabled in support {support.describe(pomdp)}."
            )
        successors |= pomdp.post(state, action)
    return successors


def split_by_observation(pomdp: Pomdp, mask: int) -> Tuple[BeliefSupport, ...]:
    """Partitions a state set into observation-uniform supports, ordered by observation."""
    parts: Dict[int, int] = {}
    for state in iter_bits(mask):
        observation = pomdp.observation(state)
        parts[observation] = parts.get(observation, 0) | 1 << state
    return tuple(BeliefSupport(observation, parts[observation]) for observation in sorted(parts))


def support_update(pomdp: Pomdp, support: BeliefSupport, action: int) -> Tuple[BeliefSupport, ...]:
    """
    Successor supports of support under action, one per observation that can be received.

    Raises:
        PomdpException: If action is not enabled in the support.
    """
    return split_by_observation(pomdp, successor_mask(pomdp, support, action))


def observed_update(pomdp: Pomdp, support: BeliefSupport, action: int, observation: int) -> BeliefSupport:
    """The successor support after taking action and then receiving observation."""
    mask = successor_mask(pomdp, support, action) & pomdp.observation_states(observation)
    if not mask:
        raise PomdpException(
            f"Observation {pomdp.observation_names[observation]} cannot follow "
            f"{pomdp.action_names[action]} from {support.describe(pomdp)}."
        )
    return BeliefSupport(observation, mask)
