from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence, Union

import pandas as pd

from src.logger.logger import Logger
from src.simulation.trace import AVOIDED_VIOLATION, REACHED, STEP_LIMIT, Trace

logger = Logger(__name__)


@dataclass(frozen=True)
class SimulationStatistics:
    runs: int = 0
    reached: int = 0
    violations: int = 0
    step_limits: int = 0
    reach_rate: float = 0.0
    violation_rate: float = 0.0
    step_limit_rate: float = 0.0
    mean_steps_to_reach: float = 0.0
    max_steps_to_reach: int = 0


def traces_frame(traces: Sequence[Trace]) -> pd.DataFrame:
    return pd.DataFrame(
        [(trace.seed, trace.outcome, trace.step_count) for trace in traces],
        columns=["seed", "outcome", "step_count"],
    )


def evaluate(traces: Sequence[Trace]) -> SimulationStatistics:
    """Aggregates outcomes; statistics of zero traces are all zero."""
    frame = traces_frame(traces)
    runs = len(frame)
    if runs == 0:
        return SimulationStatistics()
    counts = frame["outcome"].value_counts()
    reached = int(counts.get(REACHED, 0))
    violations = int(counts.get(AVOIDED_VIOLATION, 0))
    step_limits = int(counts.get(STEP_LIMIT, 0))
    to_reach = frame.loc[frame["outcome"] == REACHED, "step_count"]
    return SimulationStatistics(
        runs=runs,
        reached=reached,
        violations=violations,
        step_limits=step_limits,
        reach_rate=reached / runs,
        violation_rate=violations / runs,
        step_limit_rate=step_limits / runs,
        mean_steps_to_reach=float(to_reach.mean()) if reached else 0.0,
        max_steps_to_reach=int(to_reach.max()) if reached else 0,
    )


def summary_table(statistics: SimulationStatistics) -> str:
    rows = asdict(statistics)
    width = max(len(key) for key in rows)
    lines = []
    for key, value in rows.items():
        text = f"{value:.4f}" if isinstance(value, float) else str(value)
        lines.append(f"{key.ljust(width)}  {text}")
    return "\n".join(lines)


def save_simulation_report(path: Union[str, Path], traces: Sequence[Trace], statistics: SimulationStatistics):
    """Writes an Excel workbook with the sheets Traces and Summary."""
    try:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        summary = pd.DataFrame(list(asdict(statistics).items()), columns=["field", "value"])
        with pd.ExcelWriter(path) as writer:
            traces_frame(traces).to_excel(writer, sheet_name="Traces", index=False)
            summary.to_excel(writer, sheet_name="Summary", index=False)
        logger.info(f"Simulation report saved to {path}")
    except Exception as e:
        logger.error(f"Error saving simulation report: {e}")
        raise
