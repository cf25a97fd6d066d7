from abc import ABC, abstractmethod
from typing import Iterable, Iterator, Tuple

from src.benchmarks.benchmark_exception import BenchmarkException
from src.pomdp.pomdp import Pomdp, PomdpBuilder
from src.pomdp.specification import Specification
from src.pomdp.validation import make_absorbing, validate

Cell = Tuple[int, int]

# name, dx, dy; y grows downwards
MOVES: Tuple[Tuple[str, int, int], ...] = (
    ("north", 0, -1),
    ("east", 1, 0),
    ("south", 0, 1),
    ("west", -1, 0),
)


class BenchmarkGenerator(ABC):
    @abstractmethod
    def generate(self) -> Tuple[Pomdp, Specification]:
        pass


def cells(size: int) -> Iterator[Cell]:
    """Grid cells in row-major order."""
    for y in range(size):
        for x in range(size):
            yield x, y


def inside(size: int, cell: Cell) -> bool:
    return 0 <= cell[0] < size and 0 <= cell[1] < size


def step(cell: Cell, dx: int, dy: int, distance: int = 1) -> Cell:
    return cell[0] + dx * distance, cell[1] + dy * distance


def clamped_step(size: int, cell: Cell, dx: int, dy: int, distance: int = 1) -> Cell:
    x = min(max(cell[0] + dx * distance, 0), size - 1)
    y = min(max(cell[1] + dy * distance, 0), size - 1)
    return x, y


def manhattan(a: Cell, b: Cell) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def chebyshev(a: Cell, b: Cell) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def cell_name(cell: Cell) -> str:
    return f"x{cell[0]}y{cell[1]}"


def finish(builder: PomdpBuilder, reach: Iterable[int], avoid: Iterable[int]) -> Tuple[Pomdp, Specification]:
    """
    Builds the model, makes the spec states absorbing and checks every invariant.

    Raises:
        BenchmarkException: If the generated model is malformed.
    """
    spec = Specification.of(reach, avoid)
    pomdp = make_absorbing(builder.build(), spec)
    problems = validate(pomdp, spec)
    if problems:
        raise BenchmarkException("Generated model is malformed: " + "; ".join(map(str, problems)))
    return pomdp, spec
