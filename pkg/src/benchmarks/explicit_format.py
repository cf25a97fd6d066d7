"""
Line-oriented text format for POMDPs with a reach-avoid specification.

    states 3
    names start middle goal          # optional, default names are the indices
    actions go stay
    observations o0 o1
    obs 0 o0
    tr 0 go 1:1/2 2:1/2
    init 0
    reach 2
    avoid

States are referenced by index, actions and observations by name.
"""
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from src.benchmarks.benchmark_exception import (
    BenchmarkException,
    ExplicitSemanticError,
    ExplicitSyntaxError,
)
from src.logger.logger import Logger
from src.pomdp.pomdp import Distribution, Pomdp
from src.pomdp.pomdp_exception import PomdpException
from src.pomdp.specification import Specification
from src.pomdp.validation import NOT_ABSORBING, make_absorbing, validate

logger = Logger(__name__)

_HEADERS = ("states", "names", "actions", "observations")


class _ExplicitReader:
    def __init__(self):
        self.num_states: Optional[int] = None
        self.state_names: Optional[List[str]] = None
        self.action_names: Optional[List[str]] = None
        self.observation_names: Optional[List[str]] = None
        self.observation_of: Dict[int, int] = {}
        self.transitions: Dict[Tuple[int, int], Distribution] = {}
        self.initial: Optional[List[int]] = None
        self.reach: Optional[List[int]] = None
        self.avoid: Optional[List[int]] = None
        self.seen_headers = set()

    def read(self, text: str) -> Tuple[Pomdp, Specification]:
        for line_number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            keyword, *args = line.split()
            handler = getattr(self, f"_read_{keyword}", None)
            if handler is None:
                raise ExplicitSyntaxError(f"unknown keyword '{keyword}'", line_number)
            if keyword in _HEADERS:
                if keyword in self.seen_headers:
                    raise ExplicitSyntaxError(f"repeated '{keyword}' line", line_number)
                self.seen_headers.add(keyword)
            handler(args, line_number)
        return self._finish()

    def _read_states(self, args: List[str], line_number: int):
        if len(args) != 1:
            raise ExplicitSyntaxError("'states' takes one count", line_number)
        self.num_states = self._integer(args[0], line_number)
        if self.num_states < 1:
            raise ExplicitSemanticError("a model needs at least one state", line_number)

    def _read_names(self, args: List[str], line_number: int):
        count = self._require_states(line_number)
        if len(args) != count:
            raise ExplicitSemanticError(f"expected {count} state names, got {len(args)}", line_number)
        if len(set(args)) != len(args):
            raise ExplicitSemanticError("duplicate state name", line_number)
        self.state_names = list(args)

    def _read_actions(self, args: List[str], line_number: int):
        self.action_names = self._unique_names(args, "action", line_number)

    def _read_observations(self, args: List[str], line_number: int):
        self.observation_names = self._unique_names(args, "observation", line_number)

    def _read_obs(self, args: List[str], line_number: int):
        if len(args) != 2:
            raise ExplicitSyntaxError("'obs' takes a state and an observation", line_number)
        state = self._state(args[0], line_number)
        if self.observation_names is None:
            raise ExplicitSemanticError("'obs' before 'observations'", line_number)
        if args[1] not in self.observation_names:
            raise ExplicitSemanticError(f"unknown observation '{args[1]}'", line_number)
        if state in self.observation_of:
            raise ExplicitSemanticError(f"observation of state {state} given twice", line_number)
        self.observation_of[state] = self.observation_names.index(args[1])

    def _read_tr(self, args: List[str], line_number: int):
        if len(args) < 3:
            raise ExplicitSyntaxError("'tr' takes a state, an action and successors", line_number)
        state = self._state(args[0], line_number)
        if self.action_names is None:
            raise ExplicitSemanticError("'tr' before 'actions'", line_number)
        if args[1] not in self.action_names:
            raise ExplicitSemanticError(f"unknown action '{args[1]}'", line_number)
        action = self.action_names.index(args[1])
        if (state, action) in self.transitions:
            raise ExplicitSemanticError(
                f"duplicate transition for state {state} and action {args[1]}", line_number
            )
        weights: Dict[int, Fraction] = {}
        for token in args[2:]:
            target, separator, probability = token.partition(":")
            if not separator:
                raise ExplicitSyntaxError(f"expected <succ>:<p>, got '{token}'", line_number)
            successor = self._state(target, line_number)
            if successor in weights:
                raise ExplicitSemanticError(f"successor {successor} listed twice", line_number)
            try:
                weights[successor] = Fraction(probability)
            except (ValueError, ZeroDivisionError):
                raise ExplicitSyntaxError(f"malformed probability '{probability}'", line_number)
        self.transitions[(state, action)] = tuple(sorted(weights.items()))

    def _read_init(self, args: List[str], line_number: int):
        self.initial = self._state_list(self.initial, "init", args, line_number)

    def _read_reach(self, args: List[str], line_number: int):
        self.reach = self._state_list(self.reach, "reach", args, line_number)

    def _read_avoid(self, args: List[str], line_number: int):
        self.avoid = self._state_list(self.avoid, "avoid", args, line_number)

    def _finish(self) -> Tuple[Pomdp, Specification]:
        if self.num_states is None:
            raise ExplicitSemanticError("missing 'states' line")
        if self.action_names is None or self.observation_names is None:
            raise ExplicitSemanticError("missing 'actions' or 'observations' line")
        missing = [state for state in range(self.num_states) if state not in self.observation_of]
        if missing:
            raise ExplicitSemanticError(f"states without observation: {missing}")
        names = self.state_names or [str(state) for state in range(self.num_states)]
        try:
            pomdp = Pomdp(
                state_names=tuple(names),
                action_names=tuple(self.action_names),
                observation_names=tuple(self.observation_names),
                observation_of=tuple(self.observation_of[state] for state in range(self.num_states)),
                transitions={key: self.transitions[key] for key in sorted(self.transitions)},
                initial_support=frozenset(self.initial or ()),
            )
        except PomdpException as e:
            raise ExplicitSemanticError(str(e))
        spec = Specification.of(self.reach or (), self.avoid or ())
        problems = [
            diagnostic for diagnostic in validate(pomdp, spec) if diagnostic.code != NOT_ABSORBING
        ]
        if problems:
            raise ExplicitSemanticError("; ".join(str(problem) for problem in problems))
        return make_absorbing(pomdp, spec), spec

    def _require_states(self, line_number: int) -> int:
        if self.num_states is None:
            raise ExplicitSemanticError("state reference before 'states'", line_number)
        return self.num_states

    def _state(self, token: str, line_number: int) -> int:
        count = self._require_states(line_number)
        state = self._integer(token, line_number)
        if not 0 <= state < count:
            raise ExplicitSemanticError(f"state {state} out of range", line_number)
        return state

    def _state_list(self, current, keyword: str, args: List[str], line_number: int) -> List[int]:
        if current is not None:
            raise ExplicitSyntaxError(f"repeated '{keyword}' line", line_number)
        states = [self._state(token, line_number) for token in args]
        if len(set(states)) != len(states):
            raise ExplicitSemanticError(f"duplicate state in '{keyword}'", line_number)
        return states

    @staticmethod
    def _unique_names(args: List[str], kind: str, line_number: int) -> List[str]:
        if not args:
            raise ExplicitSyntaxError(f"at least one {kind} name expected", line_number)
        if len(set(args)) != len(args):
            raise ExplicitSemanticError(f"duplicate {kind} name", line_number)
        return list(args)

    @staticmethod
    def _integer(token: str, line_number: int) -> int:
        try:
            return int(token)
        except ValueError:
            raise ExplicitSyntaxError(f"expected an integer, got '{token}'", line_number)


def parse_explicit(text: str) -> Tuple[Pomdp, Specification]:
    """
    Parses the explicit format into a validated model with absorbing REACH and AVOID states.

    Raises:
        ExplicitSyntaxError: On malformed lines, with the line number.
        ExplicitSemanticError: When the described model violates a model invariant.
    """
    return _ExplicitReader().read(text)


def emit_explicit(pomdp: Pomdp, spec: Specification) -> str:
    """Writes pomdp and spec in the explicit format; the output is canonical for equal models."""
    for name in pomdp.state_names + pomdp.action_names + pomdp.observation_names:
        if not name or any(character.isspace() for character in name) or "#" in name:
            raise BenchmarkException(f"Name '{name}' cannot be written in the explicit format.")

    lines = [f"states {pomdp.num_states}"]
    if list(pomdp.state_names) != [str(state) for state in pomdp.states()]:
        lines.append("names " + " ".join(pomdp.state_names))
    lines.append("actions " + " ".join(pomdp.action_names))
    lines.append("observations " + " ".join(pomdp.observation_names))
    for state in pomdp.states():
        lines.append(f"obs {state} {pomdp.observation_names[pomdp.observation(state)]}")
    for (state, action), distribution in sorted(pomdp.transitions.items()):
        outcomes = " ".join(
            f"{successor}:{probability.numerator}/{probability.denominator}"
            for successor, probability in distribution
        )
        lines.append(f"tr {state} {pomdp.action_names[action]} {outcomes}")
    lines.append(_state_line("init", pomdp.initial_support))
    lines.append(_state_line("reach", spec.reach))
    lines.append(_state_line("avoid", spec.avoid))
    return "\n".join(lines) + "\n"


def _state_line(keyword: str, states) -> str:
    return " ".join([keyword] + [str(state) for state in sorted(states)])


def load_explicit(path: Union[str, Path]) -> Tuple[Pomdp, Specification]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise BenchmarkException(f"Cannot read model file {path}: {e}")
    pomdp, spec = parse_explicit(text)
    logger.debug(f"Loaded {path}: {pomdp.num_states} states, {pomdp.transition_count} transitions")
    return pomdp, spec


def save_explicit(path: Union[str, Path], pomdp: Pomdp, spec: Specification):
    Path(path).write_text(emit_explicit(pomdp, spec), encoding="utf-8")
