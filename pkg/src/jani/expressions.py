"""Builders for the JANI expression subset used by the exporter."""
from typing import Any, Dict, List

Expression = Any


def conjunction(terms: List[Expression]) -> Expression:
    if not terms:
        return True
    result = terms[0]
    for term in terms[1:]:
        result = {"op": "∧", "left": result, "right": term}
    return result


def disjunction(terms: List[Expression]) -> Expression:
    if not terms:
        return False
    result = terms[0]
    for term in terms[1:]:
        result = {"op": "∨", "left": result, "right": term}
    return result


def negation(term: Expression) -> Dict:
    return {"op": "¬", "exp": term}


def equals(left: Expression, right: Expression) -> Dict:
    return {"op": "=", "left": left, "right": right}


def unequal(left: Expression, right: Expression) -> Dict:
    return {"op": "≠", "left": left, "right": right}


def ite(condition: Expression, then: Expression, otherwise: Expression) -> Dict:
    return {"op": "ite", "if": condition, "then": then, "else": otherwise}
