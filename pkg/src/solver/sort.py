from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import z3


class SortKind(Enum):
    BOOL = "Bool"
    INT = "Int"
    REAL = "Real"


@dataclass(frozen=True)
class Sort:
    kind: SortKind
    lower: Optional[int] = None
    upper: Optional[int] = None

    @classmethod
    def boolean(cls) -> "Sort":
        return cls(SortKind.BOOL)

    @classmethod
    def bounded_int(cls, lower: Optional[int] = None, upper: Optional[int] = None) -> "Sort":
        return cls(SortKind.INT, lower, upper)

    @classmethod
    def real(cls) -> "Sort":
        return cls(SortKind.REAL)

    @property
    def smtlib_name(self) -> str:
        return self.kind.value

    def make(self, name: str) -> z3.ExprRef:
        if self.kind is SortKind.BOOL:
            return z3.Bool(name)
        if self.kind is SortKind.INT:
            return z3.Int(name)
        return z3.Real(name)

    def bounds(self, variable: z3.ExprRef) -> List[z3.BoolRef]:
        """Range constraints of a bounded integer; empty for the other sorts."""
        constraints = []
        if self.kind is SortKind.INT:
            if self.lower is not None:
                constraints.append(variable >= self.lower)
            if self.upper is not None:
                constraints.append(variable <= self.upper)
        return constraints
