from dataclasses import dataclass
from enum import Enum
from typing import Optional

from src.config.defaults import (
    ONESHOT_MEMORY,
    ONESHOT_RANK_BOUND,
    REFRESH_PERIOD,
    SYNTHESIS_BUDGET_SECONDS,
    TOMBSTONE_RATIO,
)
from src.synthesis.synthesis_exception import SynthesisException


class Mode(Enum):
    NAIVE_EXPLICIT = "naive-explicit"
    NAIVE_INCREMENTAL = "naive-incremental"
    INCREMENTAL = "incremental"
    ONESHOT = "oneshot"


class Goal(Enum):
    FIXPOINT = "fixpoint"
    INITIAL = "initial"


@dataclass
class DriverConfig:
    mode: Mode = Mode.INCREMENTAL
    goal: Goal = Goal.FIXPOINT
    memory: int = ONESHOT_MEMORY
    rank_bound: int = ONESHOT_RANK_BOUND
    refresh_period: int = REFRESH_PERIOD
    tombstone_ratio: float = TOMBSTONE_RATIO
    check_timeout_ms: Optional[int] = None
    budget_seconds: Optional[float] = SYNTHESIS_BUDGET_SECONDS
    max_iterations: Optional[int] = None
    validate_models: bool = False
    check_invariants: bool = True

    def validate(self):
        """
        Raises:
            SynthesisException: On values no driver can run with.
        """
        if self.memory < 1:
            raise SynthesisException(f"Memory must be at least 1, got {self.memory}.")
        if self.rank_bound < 1:
            raise SynthesisException(f"Rank bound must be at least 1, got {self.rank_bound}.")
        if self.refresh_period < 1:
            raise SynthesisException(f"Refresh period must be at least 1, got {self.refresh_period}.")
        if self.tombstone_ratio <= 0:
            raise SynthesisException(f"Tombstone ratio must be positive, got {self.tombstone_ratio}.")
        if self.check_timeout_ms is not None and self.check_timeout_ms <= 0:
            raise SynthesisException("Check timeout must be positive.")
        if self.budget_seconds is not None and self.budget_seconds <= 0:
            raise SynthesisException("Budget must be positive.")
        if self.max_iterations is not None and self.max_iterations < 0:
            raise SynthesisException("Iteration limit cannot be negative.")
