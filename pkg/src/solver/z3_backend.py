from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple

import z3

from src.solver.solver_backend import CheckStatus, SolverBackend, Value
from src.solver.sort import Sort, SortKind


class Z3Backend(SolverBackend):
    """In-process backend on the z3 Python API."""

    def __init__(self, timeout_ms: Optional[int] = None):
        self.solver = z3.Solver()
        if timeout_ms:
            self.set_timeout(timeout_ms)

    def declare(self, name: str, sort: Sort, variable: z3.ExprRef):
        pass

    def add(self, constraint: z3.BoolRef):
        self.solver.add(constraint)

    def push(self):
        self.solver.push()

    def pop(self, count: int):
        self.solver.pop(count)

    def set_timeout(self, timeout_ms: int):
        self.solver.set("timeout", int(timeout_ms))

    def check(self) -> Tuple[CheckStatus, str]:
        result = self.solver.check()
        if result == z3.sat:
            return CheckStatus.SAT, ""
        if result == z3.unsat:
            return CheckStatus.UNSAT, ""
        return CheckStatus.UNKNOWN, self.solver.reason_unknown()

    def values(self, variables: Mapping[str, Tuple[Sort, z3.ExprRef]]) -> Dict[str, Value]:
        model = self.solver.model()
        result: Dict[str, Value] = {}
        for name, (sort, variable) in variables.items():
            value = model.eval(variable, model_completion=True)
            if sort.kind is SortKind.BOOL:
                result[name] = z3.is_true(value)
            elif sort.kind is SortKind.INT:
                result[name] = value.as_long()
            else:
                result[name] = Fraction(value.numerator_as_long(), value.denominator_as_long())
        return result
