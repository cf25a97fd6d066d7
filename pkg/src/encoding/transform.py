"""Model transformations used before encoding: memory unfolding and explicit shortcuts."""
from fractions import Fraction
from typing import Dict, Iterable, Tuple

from src.config.defaults import MEMORY_STATE_LIMIT
from src.encoding.encoding_exception import EncodingException
from src.pomdp.bits import mask_of
from src.pomdp.pomdp import Distribution, Pomdp
from src.pomdp.specification import Specification

TOP = "__top__"
BOTTOM = "__bottom__"
SHORTCUT_PREFIX = "shortcut"


def memory_state(state: int, cell: int, memory: int) -> int:
    return state * memory + cell


def unfold_memory(pomdp: Pomdp, memory: int, limit: int = MEMORY_STATE_LIMIT) -> Pomdp:
    """
    Product with memory cells 0..memory-1.

    State (s, n) has index s * memory + n and sees observation (obs(s), n).
    Action (a, n') takes a and moves the memory to n'. The initial support
    sits in cell 0. With memory 1 the model is returned as is.

    Raises:
        EncodingException: If memory < 1 or the product exceeds limit states.
    """
    if memory < 1:
        raise EncodingException(f"Memory must be positive, got {memory}.")
    if memory == 1:
        return pomdp
    if pomdp.num_states * memory > limit:
        raise EncodingException(
            f"Unfolding {pomdp.num_states} states with memory {memory} exceeds the limit of {limit} states."
        )

    transitions: Dict[Tuple[int, int], Distribution] = {}
    for (state, action), distribution in pomdp.transitions.items():
        for cell in range(memory):
            for update in range(memory):
                transitions[(memory_state(state, cell, memory), action * memory + update)] = tuple(
                    (memory_state(successor, update, memory), probability) for successor, probability in distribution
                )
    return Pomdp(
        state_names=tuple(f"{name}|m{cell}" for name in pomdp.state_names for cell in range(memory)),
        action_names=tuple(f"{name}|m{cell}" for name in pomdp.action_names for cell in range(memory)),
        observation_names=tuple(f"{name}|m{cell}" for name in pomdp.observation_names for cell in range(memory)),
        observation_of=tuple(
            pomdp.observation(state) * memory + cell for state in pomdp.states() for cell in range(memory)
        ),
        transitions={key: transitions[key] for key in sorted(transitions)},
        initial_support=frozenset(memory_state(state, 0, memory) for state in pomdp.initial_support),
    )


def lift_specification(spec: Specification, memory: int) -> Specification:
    """REACH and AVOID copied to every memory cell."""
    return Specification.of(
        (memory_state(state, cell, memory) for state in spec.reach for cell in range(memory)),
        (memory_state(state, cell, memory) for state in spec.avoid for cell in range(memory)),
    )


def add_shortcut(pomdp: Pomdp, spec: Specification, region: Iterable[int]) -> Tuple[Pomdp, Specification]:
    """
    Adds one shortcut action leading to the top sink from region and to the bottom sink elsewhere.

    The sinks (top in REACH, bottom in AVOID, each with its own observation)
    are appended on the first call. REACH and AVOID states, the sinks
    included, self-loop under every shortcut.
    """
    region_mask = mask_of(region)
    state_names = list(pomdp.state_names)
    observation_names = list(pomdp.observation_names)
    observation_of = list(pomdp.observation_of)
    if TOP not in pomdp.state_names:
        for name in (TOP, BOTTOM):
            state_names.append(name)
            observation_names.append(name)
            observation_of.append(len(observation_names) - 1)
    top = state_names.index(TOP)
    bottom = state_names.index(BOTTOM)
    reach = spec.reach | {top}
    avoid = spec.avoid | {bottom}

    count = sum(1 for name in pomdp.action_names if name.startswith(SHORTCUT_PREFIX))
    action_names = pomdp.action_names + (f"{SHORTCUT_PREFIX}{count}",)
    shortcut = len(action_names) - 1

    transitions: Dict[Tuple[int, int], Distribution] = dict(pomdp.transitions)
    for state in range(len(state_names)):
        if state in reach or state in avoid:
            target = state
        elif region_mask >> state & 1:
            target = top
        else:
            target = bottom
        transitions[(state, shortcut)] = ((target, Fraction(1)),)

    extended = Pomdp(
        state_names=tuple(state_names),
        action_names=action_names,
        observation_names=tuple(observation_names),
        observation_of=tuple(observation_of),
        transitions={key: transitions[key] for key in sorted(transitions)},
        initial_support=pomdp.initial_support,
    )
    return extended, Specification.of(reach, avoid)


def original_part(mask: int, num_states: int) -> int:
    """Restricts a state mask of an extended model to the first num_states states."""
    return mask & ((1 << num_states) - 1)

