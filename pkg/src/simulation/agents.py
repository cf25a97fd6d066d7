from abc import ABC, abstractmethod
from typing import Sequence

import numpy as np

from src.encoding.decode import PolicyCandidate
from src.pomdp.belief_support import BeliefSupport


class Agent(ABC):
    """Chooses one of the offered actions given the tracked belief support."""

    @abstractmethod
    def choose(self, rng: np.random.Generator, support: BeliefSupport, offered: Sequence[int]) -> int:
        pass


class UniformRandomAgent(Agent):
    """Picks uniformly among the offered actions, which makes it fair."""

    def choose(self, rng: np.random.Generator, support: BeliefSupport, offered: Sequence[int]) -> int:
        return offered[int(rng.integers(len(offered)))]


class FixedPolicyAgent(Agent):
    """
    Follows a decoded memoryless policy: uniform among the policy's actions
    that are offered, uniform among all offered actions where the policy has none.
    """

    def __init__(self, policy: PolicyCandidate):
        self.policy = policy

    def choose(self, rng: np.random.Generator, support: BeliefSupport, offered: Sequence[int]) -> int:
        preferred = self.policy.actions.get(support.observation, frozenset())
        pool = [action for action in offered if action in preferred] or list(offered)
        return pool[int(rng.integers(len(pool)))]
