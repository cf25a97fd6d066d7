"""SMT-LIB2 text helpers: script rendering and an s-expression reader for model values."""
import re
from fractions import Fraction
from typing import Iterable, List, Mapping, Tuple, Union

import z3

from src.solver.solver_exception import SolverException
from src.solver.sort import Sort

SExpr = Union[str, List["SExpr"]]

_TOKEN = re.compile(r'\(|\)|\|[^|]*\||"(?:[^"]|"")*"|[^\s()]+')


def render_term(constraint: z3.ExprRef) -> str:
    return " ".join(constraint.sexpr().split())


def declaration(name: str, sort: Sort) -> str:
    return f"(declare-const {name} {sort.smtlib_name})"


def to_smtlib(declarations: Mapping[str, Sort], assertions: Iterable[z3.BoolRef], check: bool = True) -> str:
    """Renders a standalone QF_LIRA script."""
    lines = ["(set-option :produce-models true)", "(set-logic QF_LIRA)"]
    lines.extend(declaration(name, sort) for name, sort in declarations.items())
    lines.extend(f"(assert {render_term(assertion)})" for assertion in assertions)
    if check:
        lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def is_balanced(text: str) -> bool:
    depth = 0
    for token in _TOKEN.findall(text):
        if token == "(":
            depth += 1
        elif token == ")":
            depth -= 1
    return depth <= 0


def parse_sexpr(text: str) -> SExpr:
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise SolverException("Empty solver response.")
    expression, position = _read(tokens, 0)
    if position != len(tokens):
        raise SolverException(f"Trailing tokens in solver response: {text!r}")
    return expression


def _read(tokens: List[str], position: int) -> Tuple[SExpr, int]:
    token = tokens[position]
    if token == ")":
        raise SolverException("Unbalanced solver response.")
    if token != "(":
        return token, position + 1
    items = []
    position += 1
    while position < len(tokens) and tokens[position] != ")":
        item, position = _read(tokens, position)
        items.append(item)
    if position >= len(tokens):
        raise SolverException("Unbalanced solver response.")
    return items, position + 1


def value_of(term: SExpr) -> Union[bool, int, Fraction]:
    """Converts a model value term (true, 3, (- 2), (/ 1 2), 0.5, ...) to a Python value."""
    if isinstance(term, str):
        if term == "true":
            return True
        if term == "false":
            return False
        try:
            if "." in term:
                return Fraction(term)
            return int(term)
        except ValueError:
            raise SolverException(f"Unexpected model value: {term}")
    if len(term) == 2 and term[0] == "-":
        return -value_of(term[1])
    if len(term) == 3 and term[0] == "/":
        return Fraction(value_of(term[1])) / Fraction(value_of(term[2]))
    raise SolverException(f"Unexpected model value: {term}")
