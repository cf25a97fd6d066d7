from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import pendulum
import z3

from src.config.environment import smt_command
from src.logger.logger import Logger
from src.solver.smtlib import to_smtlib
from src.solver.smtlib_backend import SmtLibProcessBackend
from src.solver.solver_backend import CheckStatus, SolverBackend, Value
from src.solver.solver_exception import SolverException
from src.solver.sort import Sort, SortKind
from src.solver.z3_backend import Z3Backend


@dataclass(frozen=True)
class CheckResult:
    status: CheckStatus
    model: Dict[str, Value] = field(default_factory=dict)
    reason: str = ""

    @property
    def is_sat(self) -> bool:
        return self.status is CheckStatus.SAT

    @property
    def is_unsat(self) -> bool:
        return self.status is CheckStatus.UNSAT


@dataclass
class SessionStats:
    checks: int = 0
    solve_seconds: float = 0.0


def create_backend(timeout_ms: Optional[int] = None) -> SolverBackend:
    """SMT-LIB2 process backend when POMDP_SHIELD_SMT_CMD is set, in-memory z3 otherwise."""
    command = smt_command()
    if command:
        return SmtLibProcessBackend(command, timeout_ms)
    return Z3Backend(timeout_ms)


class SolverSession:
    """
    Incremental solver session with scoped declarations and assertions.

    The session keeps its own copy of every active assertion, so returned
    models can be re-checked independently of the backend and the current
    system can be dumped as an SMT-LIB2 script.
    """

    def __init__(
        self,
        backend: Optional[SolverBackend] = None,
        timeout_ms: Optional[int] = None,
        validate_models: bool = True,
    ):
        self.logger = Logger(__name__)
        self.backend = backend if backend is not None else create_backend(timeout_ms)
        self.validate_models = validate_models
        self.stats = SessionStats()
        self.dead = False
        self._declarations: List[Dict[str, Tuple[Sort, z3.ExprRef]]] = [{}]
        self._assertions: List[List[z3.BoolRef]] = [[]]

    def __enter__(self) -> "SolverSession":
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        self.close()

    @property
    def depth(self) -> int:
        return len(self._declarations) - 1

    def declare(self, name: str, sort: Sort) -> z3.ExprRef:
        """
        Declares a variable in the current scope; bounded integers get their range asserted.

        Raises:
            SolverException: If name is already declared in an active scope.
        """
        self._ensure_alive()
        if self._lookup(name) is not None:
            raise SolverException(f"Variable {name} is already declared.")
        variable = sort.make(name)
        self._guarded(self.backend.declare, name, sort, variable)
        self._declarations[-1][name] = (sort, variable)
        self.add(*sort.bounds(variable))
        return variable

    def variable(self, name: str) -> z3.ExprRef:
        entry = self._lookup(name)
        if entry is None:
            raise SolverException(f"Variable {name} is not declared.")
        return entry[1]

    def is_declared(self, name: str) -> bool:
        return self._lookup(name) is not None

    def add(self, *constraints: z3.BoolRef):
        self._ensure_alive()
        for constraint in constraints:
            self._guarded(self.backend.add, constraint)
            self._assertions[-1].append(constraint)

    def push(self):
        self._ensure_alive()
        self._guarded(self.backend.push)
        self._declarations.append({})
        self._assertions.append([])

    def pop(self, count: int = 1):
        """
        Raises:
            SolverException: If count exceeds the push depth.
        """
        self._ensure_alive()
        if count < 1 or count > self.depth:
            raise SolverException(f"Cannot pop {count} scopes at depth {self.depth}.")
        self._guarded(self.backend.pop, count)
        del self._declarations[-count:]
        del self._assertions[-count:]

    def check(self, timeout_ms: Optional[int] = None) -> CheckResult:
        """
        Args:
            timeout_ms (Optional[int]): Limit for this and later checks; the previous limit stays when omitted.
        """
        self._ensure_alive()
        if timeout_ms is not None:
            self._guarded(self.backend.set_timeout, timeout_ms)
        start = pendulum.now()
        status, reason = self._guarded(self.backend.check)
        self.stats.checks += 1
        self.stats.solve_seconds += (pendulum.now() - start).total_seconds()
        self.logger.debug(f"check #{self.stats.checks} at depth {self.depth}: {status.value}")
        if status is not CheckStatus.SAT:
            return CheckResult(status, reason=reason)

        model = self._guarded(self.backend.values, self.active_variables())
        if self.validate_models:
            self._validate(model)
        return CheckResult(status, model)

    def active_variables(self) -> Dict[str, Tuple[Sort, z3.ExprRef]]:
        variables: Dict[str, Tuple[Sort, z3.ExprRef]] = {}
        for scope in self._declarations:
            variables.update(scope)
        return variables

    def active_assertions(self) -> List[z3.BoolRef]:
        return [assertion for scope in self._assertions for assertion in scope]

    def smtlib_script(self) -> str:
        """The active declarations and assertions as a standalone SMT-LIB2 script."""
        return to_smtlib(
            {name: sort for name, (sort, _) in self.active_variables().items()},
            self.active_assertions(),
        )

    def close(self):
        if not self.dead:
            self.backend.close()
        self.dead = True

    def _validate(self, model: Dict[str, Value]):
        substitution = []
        for name, (sort, variable) in self.active_variables().items():
            if name not in model:
                self.dead = True
                raise SolverException(f"Model lacks a value for {name}.")
            substitution.append((variable, _constant(sort, model[name])))
        assertions = self.active_assertions()
        if not assertions:
            return
        conjunction = z3.And(assertions)
        if substitution:
            conjunction = z3.substitute(conjunction, *substitution)
        evaluated = z3.simplify(conjunction)
        if not z3.is_true(evaluated):
            self.dead = True
            raise SolverException("Solver returned a model that violates the asserted constraints.")

    def _lookup(self, name: str) -> Optional[Tuple[Sort, z3.ExprRef]]:
        for scope in reversed(self._declarations):
            if name in scope:
                return scope[name]
        return None

    def _ensure_alive(self):
        if self.dead:
            raise SolverException("Solver session is no longer usable.")

    def _guarded(self, call, *args):
        try:
            return call(*args)
        except SolverException as e:
            self.dead = True
            self.logger.error(f"Solver session failed: {e}")
            raise


def _constant(sort: Sort, value: Value) -> z3.ExprRef:
    if sort.kind is SortKind.BOOL:
        return z3.BoolVal(bool(value))
    if sort.kind is SortKind.INT:
        return z3.IntVal(int(value))
    return z3.RealVal(str(Fraction(value)))
