"""
Symbolic belief-support MDP in JANI.

The state is a bit belsup_<s> per model state plus newobs (0 for none,
z + 1 for observation z) and lact (0 for none, a + 1 for action a). A step
of the belief-support MDP takes two JANI steps: an action edge guessing the
next observation, then the dummy edge computing the new support and
clearing newobs and lact.
"""
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Tuple, Union

from src.jani.expressions import conjunction, disjunction, equals, ite, negation, unequal
from src.logger.logger import Logger
from src.pomdp.bits import iter_bits
from src.pomdp.pomdp import Pomdp
from src.pomdp.specification import Specification

logger = Logger(__name__)

DUMMY_ACTION = "dummy"
LOCATION = "l"
AUTOMATON = "belief_support"
PARAMETER = "p"
NEWOBS = "newobs"
LACT = "lact"


def belsup(state: int) -> str:
    return f"belsup_{state}"


@dataclass
class JaniDocument:
    model: Dict
    belsup_names: Tuple[str, ...]
    newobs: str = NEWOBS
    lact: str = LACT
    dummy_action: str = DUMMY_ACTION
    parameter: str = PARAMETER
    edge_counts: Dict[str, int] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.model, sort_keys=True, indent=1, ensure_ascii=False) + "\n"

    def save(self, path: Union[str, Path]):
        Path(path).write_text(self.to_json(), encoding="utf-8")


def export_jani(pomdp: Pomdp, spec: Specification, pin_p: bool = False) -> JaniDocument:
    """
    Args:
        pomdp (Pomdp): A validated model with absorbing REACH and AVOID states.
        spec (Specification): Turned into the properties reach, avoid and reach_avoid.
        pin_p (bool): Give the probability constant p the value 1/|observations|
            instead of leaving it parametric.
    """
    names = tuple(belsup(state) for state in pomdp.states())
    first_steps = _first_step_edges(pomdp)
    edges = first_steps + [_dummy_edge(pomdp)]

    constant = {"name": PARAMETER, "type": "real"}
    if pin_p:
        constant["value"] = _number(Fraction(1, pomdp.num_observations))

    variables = [
        {"name": name, "type": "bool", "initial-value": state in pomdp.initial_support}
        for state, name in enumerate(names)
    ]
    variables.append(_bounded(NEWOBS, pomdp.num_observations))
    variables.append(_bounded(LACT, pomdp.num_actions))

    action_names = list(pomdp.action_names) + [DUMMY_ACTION]
    model = {
        "jani-version": 1,
        "name": "belief_support_mdp",
        "type": "mdp",
        "features": [],
        "actions": [{"name": name} for name in action_names],
        "constants": [constant],
        "variables": variables,
        "properties": _properties(pomdp, spec),
        "automata": [
            {
                "name": AUTOMATON,
                "locations": [{"name": LOCATION}],
                "initial-locations": [LOCATION],
                "variables": [],
                "edges": edges,
            }
        ],
        "system": {
            "elements": [{"automaton": AUTOMATON}],
            "syncs": [{"synchronise": [name], "result": name} for name in action_names],
        },
    }
    logger.debug(f"JANI export: {len(first_steps)} action edges, {len(names)} support bits")
    return JaniDocument(
        model=model,
        belsup_names=names,
        edge_counts={"first_step": len(first_steps), "dummy": 1},
    )


def _bounded(name: str, upper: int) -> Dict:
    return {
        "name": name,
        "type": {"kind": "bounded", "base": "int", "lower-bound": 0, "upper-bound": upper},
        "initial-value": 0,
    }


def _number(value: Fraction) -> Union[int, Dict]:
    if value.denominator == 1:
        return value.numerator
    return {"op": "/", "left": value.numerator, "right": value.denominator}


def _first_step_edges(pomdp: Pomdp) -> List[Dict]:
    edges = []
    for observation in range(pomdp.num_observations):
        members = list(iter_bits(pomdp.observation_states(observation)))
        if not members:
            continue
        guard = conjunction([equals(NEWOBS, 0), disjunction([belsup(state) for state in members])])
        for action in pomdp.observation_actions(observation):
            destinations = []
            for next_observation in range(pomdp.num_observations):
                targets = pomdp.observation_states(next_observation)
                sources = [state for state in members if pomdp.post(state, action) & targets]
                if not sources:
                    continue
                destinations.append(
                    {
                        "location": LOCATION,
                        "probability": {"exp": ite(disjunction([belsup(state) for state in sources]), PARAMETER, 0)},
                        "assignments": [
                            {"ref": NEWOBS, "value": next_observation + 1},
                            {"ref": LACT, "value": action + 1},
                        ],
                    }
                )
            edges.append(
                {
                    "location": LOCATION,
                    "action": pomdp.action_names[action],
                    "guard": {"exp": guard},
                    "destinations": destinations,
                }
            )
    return edges


def _dummy_edge(pomdp: Pomdp) -> Dict:
    predecessors: Dict[int, List[Tuple[int, int]]] = {state: [] for state in pomdp.states()}
    for (state, action) in sorted(pomdp.transitions):
        for successor in iter_bits(pomdp.post(state, action)):
            predecessors[successor].append((state, action))

    assignments = []
    for successor in pomdp.states():
        came_from = disjunction(
            [conjunction([belsup(state), equals(LACT, action + 1)]) for state, action in predecessors[successor]]
        )
        value = conjunction([equals(NEWOBS, pomdp.observation(successor) + 1), came_from])
        assignments.append({"ref": belsup(successor), "value": value})
    assignments.append({"ref": NEWOBS, "value": 0})
    assignments.append({"ref": LACT, "value": 0})
    return {
        "location": LOCATION,
        "action": DUMMY_ACTION,
        "guard": {"exp": unequal(NEWOBS, 0)},
        "destinations": [{"location": LOCATION, "probability": {"exp": 1}, "assignments": assignments}],
    }


def _properties(pomdp: Pomdp, spec: Specification) -> List[Dict]:
    settled = equals(NEWOBS, 0)
    reach = conjunction(
        [settled] + [negation(belsup(state)) for state in pomdp.states() if state not in spec.reach]
    )
    avoid = conjunction([settled, disjunction([belsup(state) for state in sorted(spec.avoid)])])

    def maximum(name: str, left, right) -> Dict:
        return {
            "name": name,
            "expression": {
                "op": "filter",
                "fun": "max",
                "values": {"op": "Pmax", "exp": {"op": "U", "left": left, "right": right}},
                "states": {"op": "initial"},
            },
        }

    return [
        maximum("reach", True, reach),
        maximum("avoid", True, avoid),
        maximum("reach_avoid", negation(avoid), reach),
    ]
