from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from src.pomdp.pomdp import Distribution, Pomdp, rebuild
from src.pomdp.specification import Specification

NO_ENABLED_ACTION = "no enabled action"
ACTION_MISMATCH = "action mismatch"
EMPTY_INITIAL = "empty initial support"
MIXED_INITIAL = "mixed initial observation"
INVALID_DISTRIBUTION = "invalid distribution"
OVERLAPPING_SPEC = "overlapping spec"
UNKNOWN_SPEC_STATE = "unknown spec state"
NOT_ABSORBING = "not absorbing"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


def validate(pomdp: Pomdp, spec: Specification) -> List[Diagnostic]:
    """
    Lists the violated model and specification invariants.

    Args:
        pomdp (Pomdp): The model to check.
        spec (Specification): The reach-avoid objective on the model.

    Returns:
        List[Diagnostic]: One entry per violation; empty when the pair is well-formed.
    """
    diagnostics: List[Diagnostic] = []
    names = pomdp.state_names

    shared: Dict[int, Tuple[int, Tuple[int, ...]]] = {}
    for state in pomdp.states():
        enabled = pomdp.enabled_actions(state)
        if not enabled:
            diagnostics.append(Diagnostic(NO_ENABLED_ACTION, f"state {names[state]}"))
        observation = pomdp.observation(state)
        if observation not in shared:
            shared[observation] = (state, enabled)
        elif shared[observation][1] != enabled:
            other = shared[observation][0]
            diagnostics.append(
                Diagnostic(
                    ACTION_MISMATCH,
                    f"states {names[other]} and {names[state]} share observation "
                    f"{pomdp.observation_names[observation]} but not their enabled actions",
                )
            )

    if not pomdp.initial_support:
        diagnostics.append(Diagnostic(EMPTY_INITIAL, "no initial state"))
    elif len({pomdp.observation(state) for state in pomdp.initial_support}) > 1:
        diagnostics.append(Diagnostic(MIXED_INITIAL, "initial states carry different observations"))

    for (state, action), distribution in sorted(pomdp.transitions.items()):
        weights = [probability for _, probability in distribution]
        if any(weight <= 0 for weight in weights) or sum(weights) != 1:
            diagnostics.append(
                Diagnostic(
                    INVALID_DISTRIBUTION,
                    f"state {names[state]}, action {pomdp.action_names[action]}",
                )
            )

    for state in sorted(spec.spec_states):
        if not 0 <= state < pomdp.num_states:
            diagnostics.append(Diagnostic(UNKNOWN_SPEC_STATE, f"state index {state}"))
    for state in sorted(spec.reach & spec.avoid):
        diagnostics.append(Diagnostic(OVERLAPPING_SPEC, f"state {_name(pomdp, state)} in reach and avoid"))

    for state in sorted(spec.spec_states):
        if 0 <= state < pomdp.num_states and not _is_absorbing(pomdp, state):
            diagnostics.append(Diagnostic(NOT_ABSORBING, f"state {names[state]}"))

    return diagnostics


def make_absorbing(pomdp: Pomdp, spec: Specification) -> Pomdp:
    """Redirects every enabled action of every REACH or AVOID state to a self-loop."""
    if all(_is_absorbing(pomdp, state) for state in spec.spec_states):
        return pomdp
    transitions: Dict[Tuple[int, int], Distribution] = dict(pomdp.transitions)
    for state in spec.spec_states:
        for action in pomdp.enabled_actions(state):
            transitions[(state, action)] = ((state, Fraction(1)),)
    return rebuild(pomdp, transitions=transitions)


def _is_absorbing(pomdp: Pomdp, state: int) -> bool:
    return all(
        pomdp.distribution(state, action) == ((state, Fraction(1)),)
        for action in pomdp.enabled_actions(state)
    )


def _name(pomdp: Pomdp, state: int) -> str:
    if 0 <= state < pomdp.num_states:
        return pomdp.state_names[state]
    return str(state)
