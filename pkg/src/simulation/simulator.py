from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import List, Optional

import numpy as np

from src.config.defaults import SIMULATION_STEP_BOUND
from src.logger.logger import Logger
from src.pomdp.belief_support import BeliefSupport, observed_update
from src.pomdp.pomdp import Pomdp
from src.pomdp.specification import Specification
from src.simulation.agents import Agent, UniformRandomAgent
from src.simulation.simulation_exception import SimulationException
from src.simulation.trace import AVOIDED_VIOLATION, REACHED, STEP_LIMIT, Step, Trace
from src.winning.shield import Shield

logger = Logger(__name__)


def simulate(
    pomdp: Pomdp,
    spec: Specification,
    shield: Optional[Shield] = None,
    agent: Optional[Agent] = None,
    seed: int = 0,
    max_steps: int = SIMULATION_STEP_BOUND,
    initial_state: Optional[int] = None,
) -> Trace:
    """
    Runs one episode while tracking the belief support.

    Args:
        pomdp (Pomdp): The environment.
        spec (Specification): Ends the episode on a REACH support or an AVOID state.
        shield (Optional[Shield]): Restricts the offered actions when given.
        agent (Optional[Agent]): Chooses among offered actions; uniform random by default.
        seed (int): Seed of the episode's random generator.
        max_steps (int): Step bound.
        initial_state (Optional[int]): True start state; drawn uniformly from the initial support when None.

    Raises:
        SimulationException: If the shield does not cover the initial support, the initial state
            lies outside the initial support, or the shield offers no action.
    """
    rng = np.random.default_rng(seed)
    agent = agent or UniformRandomAgent()
    support = BeliefSupport.initial(pomdp)
    if shield is not None and not shield.store.is_winning(support):
        raise SimulationException("Initial support is not winning; the shield is undefined there.")

    if initial_state is None:
        candidates = support.states()
        state = candidates[int(rng.integers(len(candidates)))]
    elif initial_state in support:
        state = initial_state
    else:
        raise SimulationException(f"State {pomdp.state_names[initial_state]} is not an initial state.")

    lifted = spec.lifted()
    steps: List[Step] = []
    outcome = AVOIDED_VIOLATION if state in spec.avoid else STEP_LIMIT
    while outcome == STEP_LIMIT:
        if lifted.reach_lifted(support):
            outcome = REACHED
            break
        if len(steps) >= max_steps:
            break
        if shield is not None:
            offered = tuple(sorted(shield.allowed(support)))
        else:
            offered = pomdp.observation_actions(support.observation)
        if not offered:
            raise SimulationException(f"No action offered in {support.describe(pomdp)}.")
        action = agent.choose(rng, support, offered)

        distribution = pomdp.distribution(state, action)
        weights = np.array([float(probability) for _, probability in distribution])
        successor = distribution[int(rng.choice(len(distribution), p=weights / weights.sum()))][0]
        steps.append(Step(state, pomdp.observation(state), support, offered, action))

        state = successor
        support = observed_update(pomdp, support, action, pomdp.observation(state))
        if state in spec.avoid:
            outcome = AVOIDED_VIOLATION
    return Trace(seed, tuple(steps), outcome, state)


def simulate_many(
    pomdp: Pomdp,
    spec: Specification,
    runs: int,
    shield: Optional[Shield] = None,
    agent: Optional[Agent] = None,
    seed: int = 0,
    max_steps: int = SIMULATION_STEP_BOUND,
    initial_state: Optional[int] = None,
    jobs: int = 1,
) -> List[Trace]:
    """Runs episodes with seeds seed, seed + 1, ...; the result does not depend on jobs."""
    episode = partial(
        simulate, pomdp, spec, shield, agent, max_steps=max_steps, initial_state=initial_state
    )
    seeds = [seed + offset for offset in range(runs)]
    if jobs > 1 and runs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            traces = list(executor.map(_run_seed, [episode] * runs, seeds))
    else:
        traces = [episode(seed=current) for current in seeds]
    logger.debug(f"Simulated {runs} episodes")
    return traces


def _run_seed(episode, seed: int) -> Trace:
    return episode(seed=seed)
