import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional, TextIO, Union


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    solver_calls: int
    live_entries: int
    size_estimate: int
    elapsed_ms: int


class ProgressLog:
    """Collects one record per outer iteration and optionally streams them as JSON lines."""

    def __init__(self, path: Optional[Union[str, Path]] = None):
        self.records: List[IterationRecord] = []
        self._stream: Optional[TextIO] = None
        if path is not None:
            self._stream = Path(path).open("w", encoding="utf-8")

    def append(self, record: IterationRecord):
        self.records.append(record)
        if self._stream is not None:
            self._stream.write(to_json_line(record) + "\n")
            self._stream.flush()

    def close(self):
        if self._stream is not None:
            self._stream.close()
            self._stream = None


def to_json_line(record: IterationRecord) -> str:
    return json.dumps(asdict(record), sort_keys=True)
