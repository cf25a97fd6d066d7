import subprocess
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

import z3

from src.logger.logger import Logger
from src.solver.smtlib import declaration, is_balanced, parse_sexpr, render_term, value_of
from src.solver.solver_backend import CheckStatus, SolverBackend, Value
from src.solver.solver_exception import SolverException
from src.solver.sort import Sort, SortKind

_VALUE_BATCH = 200


class SmtLibProcessBackend(SolverBackend):
    """
    Talks SMT-LIB2 v2.6 to an external solver over its stdin and stdout.

    The solver runs with :print-success so every command is acknowledged and
    desynchronisation is noticed at the command that caused it. Every line
    sent and received is kept in transcript.
    """

    def __init__(self, command: List[str], timeout_ms: Optional[int] = None):
        self.logger = Logger(__name__)
        self.command = command
        self.transcript: List[str] = []
        try:
            self.process = subprocess.Popen(
                command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                text=True,
                bufsize=1,
            )
        except OSError as e:
            raise SolverException(f"Cannot start solver {command[0]}: {e}")
        self._command("(set-option :print-success true)")
        self._command("(set-option :produce-models true)")
        if timeout_ms:
            self.set_timeout(timeout_ms)
        self._command("(set-logic QF_LIRA)")

    def declare(self, name: str, sort: Sort, variable: z3.ExprRef):
        self._command(declaration(name, sort))

    def add(self, constraint: z3.BoolRef):
        self._command(f"(assert {render_term(constraint)})")

    def push(self):
        self._command("(push 1)")

    def pop(self, count: int):
        self._command(f"(pop {count})")

    def set_timeout(self, timeout_ms: int):
        response = self._send(f"(set-option :timeout {int(timeout_ms)})")
        if response != "success":
            self.logger.warning(f"Solver ignored the timeout option: {response}")

    def check(self) -> Tuple[CheckStatus, str]:
        response = self._send("(check-sat)")
        if response == "sat":
            return CheckStatus.SAT, ""
        if response == "unsat":
            return CheckStatus.UNSAT, ""
        if response == "unknown":
            reason = self._send("(get-info :reason-unknown)")
            return CheckStatus.UNKNOWN, reason
        raise SolverException(f"Unexpected check-sat response: {response}")

    def values(self, variables: Mapping[str, Tuple[Sort, z3.ExprRef]]) -> Dict[str, Value]:
        names = list(variables)
        result: Dict[str, Value] = {}
        for start in range(0, len(names), _VALUE_BATCH):
            batch = names[start:start + _VALUE_BATCH]
            response = parse_sexpr(self._send(f"(get-value ({' '.join(batch)}))"))
            if not isinstance(response, list) or len(response) != len(batch):
                raise SolverException(f"Malformed get-value response for {len(batch)} variables.")
            for pair in response:
                if not isinstance(pair, list) or len(pair) != 2 or pair[0] not in variables:
                    raise SolverException(f"Malformed get-value entry: {pair}")
                sort = variables[pair[0]][0]
                value = value_of(pair[1])
                if sort.kind is SortKind.BOOL:
                    result[pair[0]] = bool(value)
                elif sort.kind is SortKind.INT:
                    result[pair[0]] = int(value)
                else:
                    result[pair[0]] = Fraction(value)
        return result

    def close(self):
        if self.process.poll() is None:
            try:
                self.process.stdin.write("(exit)\n")
                self.process.stdin.flush()
                self.process.wait(timeout=5)
            except (OSError, subprocess.TimeoutExpired):
                self.process.kill()

    def _command(self, text: str):
        response = self._send(text)
        if response != "success":
            raise SolverException(f"Solver rejected {text[:80]!r}: {response}")

    def _send(self, text: str) -> str:
        self.transcript.append(text)
        try:
            self.process.stdin.write(text + "\n")
            self.process.stdin.flush()
        except OSError as e:
            raise SolverException(f"Solver channel closed: {e}")
        response = ""
        while True:
            line = self.process.stdout.readline()
            if not line:
                raise SolverException("Solver terminated unexpectedly.")
            response += line
            if response.strip() and is_balanced(response):
                break
        response = " ".join(response.split())
        self.transcript.append(response)
        if response.startswith("(error"):
            raise SolverException(f"Solver error: {response}")
        return response
