from abc import ABC, abstractmethod
from enum import Enum
from fractions import Fraction
from typing import Dict, Mapping, Tuple, Union

import z3

from src.solver.sort import Sort

Value = Union[bool, int, Fraction]


class CheckStatus(Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


class SolverBackend(ABC):
    """
    Base class for incremental SMT backends.

    Backends see already-validated calls; scoping and bookkeeping live in SolverSession.
    """

    @abstractmethod
    def declare(self, name: str, sort: Sort, variable: z3.ExprRef):
        pass

    @abstractmethod
    def add(self, constraint: z3.BoolRef):
        pass

    @abstractmethod
    def push(self):
        pass

    @abstractmethod
    def pop(self, count: int):
        pass

    @abstractmethod
    def set_timeout(self, timeout_ms: int):
        """Limits every later check to timeout_ms milliseconds."""

    @abstractmethod
    def check(self) -> Tuple[CheckStatus, str]:
        """Returns the status and, for UNKNOWN, the solver's reason."""

    @abstractmethod
    def values(self, variables: Mapping[str, Tuple[Sort, z3.ExprRef]]) -> Dict[str, Value]:
        """Model values of variables after a SAT check."""

    def close(self):
        pass
