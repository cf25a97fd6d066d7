from pathlib import Path
from typing import Union

import pandas as pd

from src.logger.logger import Logger
from src.synthesis.driver import DriverResult
from src.synthesis.progress_log import ProgressLog

logger = Logger(__name__)


def iterations_frame(log: ProgressLog) -> pd.DataFrame:
    columns = ["iteration", "solver_calls", "live_entries", "size_estimate", "elapsed_ms"]
    return pd.DataFrame([[getattr(record, column) for column in columns] for record in log.records], columns=columns)


def summary_frame(result: DriverResult, mode: str, instance: str) -> pd.DataFrame:
    size = result.store.region_size()
    rows = [
        ("instance", instance),
        ("mode", mode),
        ("winning", result.winning),
        ("partial", result.partial),
        ("reason", result.reason),
        ("iterations", result.stats.iterations),
        ("solver_calls", result.stats.solver_calls),
        ("solve_seconds", round(result.stats.solve_seconds, 3)),
        ("elapsed_seconds", round(result.stats.elapsed_seconds, 3)),
        ("refreshes", result.stats.refreshes),
        ("live_entries", size.live_entries),
        ("size_estimate", str(size.estimate)),
    ]
    return pd.DataFrame(rows, columns=["field", "value"])


def save_synthesis_report(
    path: Union[str, Path], result: DriverResult, log: ProgressLog, mode: str, instance: str
):
    """Writes an Excel workbook with the sheets Iterations and Summary."""
    try:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with pd.ExcelWriter(path) as writer:
            iterations_frame(log).to_excel(writer, sheet_name="Iterations", index=False)
            summary_frame(result, mode, instance).to_excel(writer, sheet_name="Summary", index=False)
        logger.info(f"Synthesis report saved to {path}")
    except Exception as e:
        logger.error(f"Error saving synthesis report: {e}")
        raise
