"""Explicit exploration of exported documents, with the dummy steps contracted."""
from collections import deque
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from src.jani.exporter import DUMMY_ACTION, JaniDocument
from src.jani.jani_exception import JaniException

Valuation = Dict[str, object]
SupportGraph = Dict[FrozenSet[int], Dict[str, FrozenSet[FrozenSet[int]]]]

_PARAMETER_SAMPLE = Fraction(1, 2)


class JaniInterpreter:
    """
    Evaluates the expression and edge subset written by export_jani.

    An unvalued constant is read as a positive sample value, which is all
    qualitative exploration needs.
    """

    def __init__(self, document: JaniDocument):
        self.document = document
        model = document.model
        try:
            self.variables = {variable["name"]: variable for variable in model["variables"]}
            self.constants = {
                constant["name"]: self.evaluate(constant["value"], {}) if "value" in constant else _PARAMETER_SAMPLE
                for constant in model["constants"]
            }
            self.edges = model["automata"][0]["edges"]
        except (KeyError, IndexError, TypeError) as e:
            raise JaniException(f"Malformed JANI document: {e}")

    def initial_valuation(self) -> Valuation:
        return {name: variable["initial-value"] for name, variable in self.variables.items()}

    def valuation_of(self, support: Iterable[int]) -> Valuation:
        """A settled state whose belsup bits are exactly support."""
        members = set(support)
        valuation = self.initial_valuation()
        for state, name in enumerate(self.document.belsup_names):
            valuation[name] = state in members
        valuation[self.document.newobs] = 0
        valuation[self.document.lact] = 0
        return valuation

    def support_of(self, valuation: Mapping[str, object]) -> FrozenSet[int]:
        return frozenset(state for state, name in enumerate(self.document.belsup_names) if valuation[name])

    def evaluate(self, expression, valuation: Mapping[str, object]):
        if isinstance(expression, bool) or isinstance(expression, int):
            return expression
        if isinstance(expression, float):
            return Fraction(expression)
        if isinstance(expression, str):
            if expression in valuation:
                return valuation[expression]
            if expression in self.constants:
                return self.constants[expression]
            raise JaniException(f"Unknown identifier {expression}")
        if not isinstance(expression, dict) or "op" not in expression:
            raise JaniException(f"Unsupported expression {expression!r}")

        op = expression["op"]
        if op == "∧":
            return bool(self.evaluate(expression["left"], valuation)) and bool(self.evaluate(expression["right"], valuation))
        if op == "∨":
            return bool(self.evaluate(expression["left"], valuation)) or bool(self.evaluate(expression["right"], valuation))
        if op == "¬":
            return not self.evaluate(expression["exp"], valuation)
        if op == "=":
            return self.evaluate(expression["left"], valuation) == self.evaluate(expression["right"], valuation)
        if op == "≠":
            return self.evaluate(expression["left"], valuation) != self.evaluate(expression["right"], valuation)
        if op == "ite":
            branch = "then" if self.evaluate(expression["if"], valuation) else "else"
            return self.evaluate(expression[branch], valuation)
        if op == "/":
            return Fraction(self.evaluate(expression["left"], valuation)) / Fraction(
                self.evaluate(expression["right"], valuation)
            )
        raise JaniException(f"Unsupported operator {op}")

    def successors(self, valuation: Valuation) -> List[Tuple[str, List[Valuation]]]:
        """Per enabled edge, its action and the valuations reached with positive probability."""
        result = []
        for edge in self.edges:
            if not self.evaluate(edge["guard"]["exp"], valuation):
                continue
            targets = []
            for destination in edge["destinations"]:
                if self.evaluate(destination["probability"]["exp"], valuation) == 0:
                    continue
                updated = dict(valuation)
                for assignment in destination["assignments"]:
                    updated[assignment["ref"]] = self.evaluate(assignment["value"], valuation)
                targets.append(updated)
            result.append((edge["action"], targets))
        return result

    def contracted_graph(self, starts: Optional[Iterable[Iterable[int]]] = None) -> SupportGraph:
        """
        Explores settled states from starts (the initial state by default) and
        returns, per belief support, the successor supports of each action
        after following the dummy step.
        """
        if starts is None:
            frontier = [self.initial_valuation()]
        else:
            frontier = [self.valuation_of(support) for support in starts]
        graph: SupportGraph = {}
        queue = deque(frontier)
        while queue:
            valuation = queue.popleft()
            support = self.support_of(valuation)
            if support in graph:
                continue
            by_action: Dict[str, FrozenSet[FrozenSet[int]]] = {}
            for action, intermediates in self.successors(valuation):
                if action == DUMMY_ACTION:
                    raise JaniException("Dummy edge enabled in a settled state.")
                reached = set()
                for intermediate in intermediates:
                    for dummy, settled in self.successors(intermediate):
                        if dummy != DUMMY_ACTION:
                            raise JaniException(f"Action {dummy} enabled in an intermediate state.")
                        for target in settled:
                            reached.add(self.support_of(target))
                            queue.append(target)
                by_action[action] = frozenset(reached)
            graph[support] = by_action
        return graph
