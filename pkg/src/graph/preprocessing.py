from dataclasses import dataclass
from typing import FrozenSet, Set

from src.graph.mdp_view import MdpView
from src.graph.qualitative import Quantifier, mdp_almost_sure_reach, mdp_safe_states
from src.logger.logger import Logger
from src.pomdp.belief_support import BeliefSupport, split_by_observation, support_update
from src.pomdp.bits import iter_bits, mask_of
from src.pomdp.pomdp import Pomdp
from src.pomdp.specification import Specification, observable_reach
from src.winning.region_store import WinningRegionStore

logger = Logger(__name__)


@dataclass(frozen=True)
class PreprocessingResult:
    """
    Outcome of one graph preprocessing run.

    unsafe and sure are state bit masks: unsafe states reach AVOID under every
    full-information policy, sure states reach an observation lying inside
    REACH, or a winning observation, under every policy.
    """

    unsafe: int
    sure: int
    winning_observations: FrozenSet[int]
    added: int


def unsafe_states(pomdp: Pomdp, spec: Specification) -> int:
    """Bit mask of the states from which no policy avoids AVOID forever."""
    view = MdpView.from_pomdp(pomdp)
    safe = mdp_safe_states(view, spec.avoid)
    return mask_of(state for state in pomdp.states() if state not in safe)


def winning_observations_fixpoint(pomdp: Pomdp, spec: Specification, win: WinningRegionStore) -> WinningRegionStore:
    """
    Extends win in place with supports found by graph reasoning alone and returns it.

    Repeats until nothing changes: states that reach REACH or a winning
    observation under every policy are inserted per observation, and an
    observation becomes winning when its full support has an action whose
    successor supports are all winning.
    """
    graph_preprocessing(pomdp, spec, win)
    return win


def graph_preprocessing(pomdp: Pomdp, spec: Specification, win: WinningRegionStore) -> PreprocessingResult:
    view = MdpView.from_pomdp(pomdp)
    safe = mdp_safe_states(view, spec.avoid)
    unsafe = mask_of(state for state in pomdp.states() if state not in safe)

    winning_observations: Set[int] = set()
    target = observable_reach(pomdp, spec).reach_mask
    sure = 0
    added = 0
    changed = True
    while changed:
        changed = False
        sure = mask_of(
            mdp_almost_sure_reach(view, iter_bits(target), Quantifier.FOR_ALL_POLICIES, avoid=spec.avoid)
        )
        for support in split_by_observation(pomdp, sure):
            if win.insert(support).added:
                added += 1
                changed = True

        for observation in range(pomdp.num_observations):
            if observation in winning_observations or not pomdp.observation_states(observation):
                continue
            full = BeliefSupport.full(pomdp, observation)
            if not win.is_winning(full):
                if full.members & spec.avoid_mask or not _has_winning_action(pomdp, win, full):
                    continue
                win.insert(full)
                added += 1
                logger.debug(f"Observation {pomdp.observation_names[observation]} is winning")
            winning_observations.add(observation)
            target |= full.members
            changed = True

    return PreprocessingResult(unsafe, sure, frozenset(winning_observations), added)


def _has_winning_action(pomdp: Pomdp, win: WinningRegionStore, support: BeliefSupport) -> bool:
    return any(
        all(win.is_winning(successor) for successor in support_update(pomdp, support, action))
        for action in pomdp.observation_actions(support.observation)
    )
