from dataclasses import dataclass
from typing import Dict, FrozenSet, Mapping, Tuple

from src.encoding.encoding_exception import EncodingException
from src.encoding.variable_book import Family, VariableBook
from src.pomdp.belief_support import BeliefSupport, split_by_observation
from src.pomdp.bits import iter_bits


@dataclass(frozen=True)
class PolicyCandidate:
    """
    A policy read off a satisfying assignment.

    actions maps every observation with a reached state to its chosen
    actions. Shortcut fields are empty for encodings without shortcuts.
    """

    actions: Mapping[int, FrozenSet[int]]
    switch: FrozenSet[int]
    immediate: FrozenSet[int]
    shortcut_index: Mapping[int, int]
    reached: int
    shortcut_states: int

    def reached_states(self) -> Tuple[int, ...]:
        return tuple(iter_bits(self.reached))

    def describe(self, pomdp) -> str:
        parts = []
        for observation in sorted(self.actions):
            names = ",".join(pomdp.action_names[action] for action in sorted(self.actions[observation]))
            mark = ""
            if observation in self.switch:
                mark = f" then shortcut {self.shortcut_index.get(observation, 0)}"
            parts.append(f"{pomdp.observation_names[observation]}->{{{names}}}{mark}")
        return "; ".join(parts)


def decode(model: Mapping[str, object], book: VariableBook) -> Tuple[PolicyCandidate, Tuple[BeliefSupport, ...]]:
    """
    Reads the policy and the reached supports, one per observation with reached states.

    Raises:
        EncodingException: If the model lacks a variable of the book.
    """
    pomdp = book.pomdp

    def value(*key):
        name = book.name(*key)
        if name not in model:
            raise EncodingException(f"Model has no value for {name}.")
        return model[name]

    reached = 0
    shortcut_states = 0
    for state in pomdp.states():
        if value("C", state):
            reached |= 1 << state
        if book.has(Family.SHORTCUT) and value("D", state):
            shortcut_states |= 1 << state

    observed = {pomdp.observation(state) for state in iter_bits(reached)}
    actions: Dict[int, FrozenSet[int]] = {}
    for observation in sorted(observed):
        actions[observation] = frozenset(
            action for action in pomdp.observation_actions(observation) if value("A", observation, action)
        )

    switch, immediate, shortcut_index = frozenset(), frozenset(), {}
    if book.has(Family.SHORTCUT):
        switch = frozenset(observation for observation in observed if value("Sw", observation))
        immediate = frozenset(observation for observation in observed if value("Im", observation))
        for observation in range(pomdp.num_observations):
            index = int(value("P", observation))
            if index > 0:
                shortcut_index[observation] = index

    policy = PolicyCandidate(actions, switch, immediate, shortcut_index, reached, shortcut_states)
    return policy, split_by_observation(pomdp, reached)
