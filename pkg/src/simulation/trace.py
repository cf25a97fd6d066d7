import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Tuple, Union

from src.pomdp.belief_support import BeliefSupport
from src.pomdp.pomdp import Pomdp

REACHED = "reached"
AVOIDED_VIOLATION = "avoided-violation"
STEP_LIMIT = "step-limit"


@dataclass(frozen=True)
class Step:
    state: int
    observation: int
    support: BeliefSupport
    offered: Tuple[int, ...]
    chosen: int


@dataclass(frozen=True)
class Trace:
    seed: int
    steps: Tuple[Step, ...]
    outcome: str
    final_state: int

    @property
    def step_count(self) -> int:
        return len(self.steps)


def trace_to_json(trace: Trace, pomdp: Pomdp) -> str:
    steps = [
        {
            "state": pomdp.state_names[step.state],
            "observation": pomdp.observation_names[step.observation],
            "support": [pomdp.state_names[state] for state in step.support.states()],
            "offered": [pomdp.action_names[action] for action in step.offered],
            "chosen": pomdp.action_names[step.chosen],
        }
        for step in trace.steps
    ]
    return json.dumps(
        {"seed": trace.seed, "outcome": trace.outcome, "step_count": trace.step_count, "steps": steps},
        sort_keys=True,
    )


def export_traces(path: Union[str, Path], traces: Iterable[Trace], pomdp: Pomdp):
    with Path(path).open("w", encoding="utf-8") as stream:
        for trace in traces:
            stream.write(trace_to_json(trace, pomdp) + "\n")
