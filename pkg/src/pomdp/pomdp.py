from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple, Union

from src.pomdp.bits import iter_bits, mask_of
from src.pomdp.pomdp_exception import PomdpException

Distribution = Tuple[Tuple[int, Fraction], ...]
Probability = Union[Fraction, int, str]


@dataclass(frozen=True)
class Pomdp:
    """
    A finite POMDP with dense integer states, actions and observations.

    Names live in side tables; transitions map (state, action) to a
    distribution over successor states given as (successor, probability)
    pairs sorted by successor. Synthesis only looks at the supports of
    these distributions, simulation also uses the probabilities.
    """

    state_names: Tuple[str, ...]
    action_names: Tuple[str, ...]
    observation_names: Tuple[str, ...]
    observation_of: Tuple[int, ...]
    transitions: Mapping[Tuple[int, int], Distribution]
    initial_support: FrozenSet[int]

    _enabled: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _post: Dict[Tuple[int, int], int] = field(init=False, repr=False, compare=False)
    _observation_masks: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    _state_index: Dict[str, int] = field(init=False, repr=False, compare=False)
    _action_index: Dict[str, int] = field(init=False, repr=False, compare=False)
    _observation_index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        num_states = len(self.state_names)
        if len(self.observation_of) != num_states:
            raise PomdpException(
                f"Observation labeling covers {len(self.observation_of)} states, expected {num_states}."
            )
        for state, observation in enumerate(self.observation_of):
            if not 0 <= observation < len(self.observation_names):
                raise PomdpException(f"State {state} has unknown observation {observation}.")

        enabled: List[List[int]] = [[] for _ in range(num_states)]
        post: Dict[Tuple[int, int], int] = {}
        for (state, action), distribution in self.transitions.items():
            if not 0 <= state < num_states:
                raise PomdpException(f"Transition from unknown state {state}.")
            if not 0 <= action < len(self.action_names):
                raise PomdpException(f"Transition with unknown action {action}.")
            successors = [successor for successor, _ in distribution]
            if not successors:
                raise PomdpException(f"Empty distribution for state {state}, action {action}.")
            for successor in successors:
                if not 0 <= successor < num_states:
                    raise PomdpException(f"Transition to unknown state {successor}.")
            enabled[state].append(action)
            post[(state, action)] = mask_of(successors)

        for state in self.initial_support:
            if not 0 <= state < num_states:
                raise PomdpException(f"Initial support contains unknown state {state}.")

        observation_masks = [0] * len(self.observation_names)
        for state, observation in enumerate(self.observation_of):
            observation_masks[observation] |= 1 << state

        object.__setattr__(self, "_enabled", tuple(tuple(sorted(actions)) for actions in enabled))
        object.__setattr__(self, "_post", post)
        object.__setattr__(self, "_observation_masks", tuple(observation_masks))
        object.__setattr__(self, "_state_index", _index(self.state_names, "state"))
        object.__setattr__(self, "_action_index", _index(self.action_names, "action"))
        object.__setattr__(self, "_observation_index", _index(self.observation_names, "observation"))

    @property
    def num_states(self) -> int:
        return len(self.state_names)

    @property
    def num_actions(self) -> int:
        return len(self.action_names)

    @property
    def num_observations(self) -> int:
        return len(self.observation_names)

    @property
    def transition_count(self) -> int:
        """Number of (state, action, successor) triples."""
        return sum(len(distribution) for distribution in self.transitions.values())

    def states(self) -> range:
        return range(self.num_states)

    def observation(self, state: int) -> int:
        return self.observation_of[state]

    def enabled_actions(self, state: int) -> Tuple[int, ...]:
        return self._enabled[state]

    def observation_actions(self, observation: int) -> Tuple[int, ...]:
        """Enabled actions shared by the states carrying observation (empty if none do)."""
        mask = self._observation_masks[observation]
        if not mask:
            return ()
        return self._enabled[next(iter_bits(mask))]

    def observation_states(self, observation: int) -> int:
        """Bit mask of the states labelled with observation."""
        return self._observation_masks[observation]

    def is_enabled(self, state: int, action: int) -> bool:
        return (state, action) in self._post

    def post(self, state: int, action: int) -> int:
        """Bit mask of the successors of state under action."""
        try:
            return self._post[(state, action)]
        except KeyError:
            raise PomdpException(
                f"Action {self.action_names[action]} is not enabled in state {self.state_names[state]}."
            )

    def distribution(self, state: int, action: int) -> Distribution:
        try:
            return self.transitions[(state, action)]
        except KeyError:
            raise PomdpException(
                f"Action {self.action_names[action]} is not enabled in state {self.state_names[state]}."
            )

    def state_index(self, name: str) -> int:
        return self._lookup(self._state_index, name, "state")

    def action_index(self, name: str) -> int:
        return self._lookup(self._action_index, name, "action")

    def observation_index(self, name: str) -> int:
        return self._lookup(self._observation_index, name, "observation")

    def states_named(self, names: Iterable[str]) -> FrozenSet[int]:
        return frozenset(self.state_index(name) for name in names)

    def with_initial(self, states: Iterable[int]) -> "Pomdp":
        """Returns a copy with a different initial support."""
        return replace(self, initial_support=frozenset(states))

    @staticmethod
    def _lookup(table: Dict[str, int], name: str, kind: str) -> int:
        try:
            return table[name]
        except KeyError:
            raise PomdpException(f"Unknown {kind} name: {name}")


def _index(names: Tuple[str, ...], kind: str) -> Dict[str, int]:
    table: Dict[str, int] = {}
    for position, name in enumerate(names):
        if name in table:
            raise PomdpException(f"Duplicate {kind} name: {name}")
        table[name] = position
    return table


class PomdpBuilder:
    """
    Incrementally assembles a Pomdp.

    Actions and observations are registered by name on first use. Weights
    given to add_outcome for the same (state, action, successor) are summed,
    which lets generators clamp moves at grid borders without bookkeeping.
    """

    def __init__(self):
        self.state_names: List[str] = []
        self.action_names: List[str] = []
        self.observation_names: List[str] = []
        self.observation_of: List[int] = []
        self.outcomes: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        self.initial_support: List[int] = []
        self._state_lookup: Dict[str, int] = {}
        self._action_lookup: Dict[str, int] = {}
        self._observation_lookup: Dict[str, int] = {}

    def add_action(self, name: str) -> int:
        if name not in self._action_lookup:
            self._action_lookup[name] = len(self.action_names)
            self.action_names.append(name)
        return self._action_lookup[name]

    def add_observation(self, name: str) -> int:
        if name not in self._observation_lookup:
            self._observation_lookup[name] = len(self.observation_names)
            self.observation_names.append(name)
        return self._observation_lookup[name]

    def add_state(self, name: str, observation: str) -> int:
        if name in self._state_lookup:
            raise PomdpException(f"Duplicate state name: {name}")
        index = len(self.state_names)
        self._state_lookup[name] = index
        self.state_names.append(name)
        self.observation_of.append(self.add_observation(observation))
        return index

    def state(self, name: str) -> int:
        try:
            return self._state_lookup[name]
        except KeyError:
            raise PomdpException(f"Unknown state name: {name}")

    def add_outcome(self, state: int, action: str, successor: int, probability: Probability):
        weights = self.outcomes.setdefault((state, self.add_action(action)), {})
        weights[successor] = weights.get(successor, Fraction(0)) + Fraction(probability)

    def set_transition(self, state: int, action: str, successors: Mapping[int, Probability]):
        """Defines the whole distribution of (state, action); a second definition is an error."""
        key = (state, self.add_action(action))
        if key in self.outcomes:
            raise PomdpException(
                f"Duplicate transition for state {state}, action {action}."
            )
        weights: Dict[int, Fraction] = {}
        for successor, probability in successors.items():
            weights[successor] = weights.get(successor, Fraction(0)) + Fraction(probability)
        self.outcomes[key] = weights

    def set_initial(self, states: Iterable[int]):
        self.initial_support = list(states)

    def build(self) -> Pomdp:
        transitions = {
            key: tuple(sorted(weights.items()))
            for key, weights in sorted(self.outcomes.items())
        }
        return Pomdp(
            state_names=tuple(self.state_names),
            action_names=tuple(self.action_names),
            observation_names=tuple(self.observation_names),
            observation_of=tuple(self.observation_of),
            transitions=transitions,
            initial_support=frozenset(self.initial_support),
        )


def rebuild(
    pomdp: Pomdp,
    transitions: Optional[Mapping[Tuple[int, int], Distribution]] = None,
    **changes,
) -> Pomdp:
    """Returns a copy of pomdp with some fields replaced; transitions are re-sorted."""
    if transitions is not None:
        changes["transitions"] = {key: transitions[key] for key in sorted(transitions)}
    return replace(pomdp, **changes)
