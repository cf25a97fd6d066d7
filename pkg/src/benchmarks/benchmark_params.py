from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from src.benchmarks.benchmark_exception import BenchmarkException

REQUIRED_PARAMS: Dict[str, Tuple[str, ...]] = {
    "rocks": ("N",),
    "refuel": ("N", "E"),
    "evade": ("N", "R"),
    "intercept": ("N", "R"),
    "avoid": ("N", "R"),
    "obstacle": ("N",),
    "cheese": (),
}

FAMILIES = tuple(REQUIRED_PARAMS)


@dataclass(frozen=True)
class BenchmarkParams:
    """
    Selects a benchmark family and its size parameters.

    Attributes:
        family (str): One of FAMILIES.
        N (Optional[int]): Grid size.
        E (Optional[int]): Battery capacity, refuel only.
        R (Optional[int]): View radius, evade, intercept and avoid only.
    """

    family: str
    N: Optional[int] = None
    E: Optional[int] = None
    R: Optional[int] = None

    def validate(self):
        """
        Raises:
            BenchmarkException: If the family is unknown, a required parameter is missing or
                not positive, or a parameter is given that the family does not use.
        """
        if self.family not in REQUIRED_PARAMS:
            raise BenchmarkException(
                f"Unsupported benchmark family: {self.family} (expected one of {', '.join(FAMILIES)})"
            )
        required = REQUIRED_PARAMS[self.family]
        for name in ("N", "E", "R"):
            value = getattr(self, name)
            if name in required:
                if value is None:
                    raise BenchmarkException(f"Family {self.family} requires parameter {name}.")
                if value <= 0:
                    raise BenchmarkException(f"Parameter {name} must be positive, got {value}.")
            elif value is not None:
                raise BenchmarkException(f"Family {self.family} does not take parameter {name}.")

    def label(self) -> str:
        values = [str(getattr(self, name)) for name in REQUIRED_PARAMS.get(self.family, ())]
        return f"{self.family}({','.join(values)})" if values else self.family
