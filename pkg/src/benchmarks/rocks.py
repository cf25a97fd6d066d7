"""
Rocks(N): a rock-sample variant on an N x N grid.

Reconstruction:
  - Two rocks lie at (1, 1) and (N-2, N-2); each is either valuable (v)
    or dangerous (d). At least one is valuable; which ones is hidden.
  - The robot starts in the bottom-left corner and moves deterministically.
  - sample1 / sample2 read a sensor about the respective rock. From the
    rock's cell or an adjacent one the reading is correct; from anywhere
    else it is a fair coin. The reading (good / bad) is observed until
    the next move or wait.
  - collect on a rock cell picks the rock up: a valuable rock is carried,
    a dangerous one destroys the robot. Elsewhere collect does nothing.
  - drop while carrying on the drop-off cell (top-right corner) delivers
    the rock. The robot observes its position, the last reading and
    whether it is carrying.
  - All nine actions are enabled everywhere; inapplicable ones are
    self-loops.

rocks(4) has 338 states, 3482 transitions and 66 observations.
"""
from fractions import Fraction
from itertools import product
from typing import Tuple

from src.benchmarks.benchmark_exception import BenchmarkException
from src.benchmarks.gridworld import MOVES, BenchmarkGenerator, Cell, cell_name, cells, clamped_step, finish, manhattan
from src.pomdp.pomdp import Pomdp, PomdpBuilder
from src.pomdp.specification import Specification

ACTIONS = tuple(action for action, _, _ in MOVES) + ("sample1", "sample2", "collect", "drop", "wait")
KINDS = ("v", "d")
READINGS = ("none", "r1v", "r1d", "r2v", "r2d")
SIGNAL = {"none": "none", "r1v": "good", "r1d": "bad", "r2v": "good", "r2d": "bad"}


class RocksGenerator(BenchmarkGenerator):
    def __init__(self, size: int):
        if size < 4:
            raise BenchmarkException("Rocks needs N >= 4.")
        self.size = size
        self.rocks = ((1, 1), (size - 2, size - 2))
        self.start = (0, size - 1)
        self.drop_off = (size - 1, 0)

    def generate(self) -> Tuple[Pomdp, Specification]:
        builder = PomdpBuilder()
        for action in ACTIONS:
            builder.add_action(action)

        kinds = list(product(KINDS, KINDS))
        for cell in cells(self.size):
            for kind in kinds:
                for reading in READINGS:
                    builder.add_state(
                        self._exploring(cell, kind, reading), f"{cell_name(cell)}-{SIGNAL[reading]}"
                    )
        for cell in cells(self.size):
            builder.add_state(self._carrying(cell), f"{cell_name(cell)}-carry")
        delivered = builder.add_state("delivered", "delivered")
        crashed = builder.add_state("crashed", "crashed")

        for cell in cells(self.size):
            for kind in kinds:
                for reading in READINGS:
                    self._explore_transitions(builder, cell, kind, reading, crashed)
            self._carry_transitions(builder, cell, delivered)

        for sink in (delivered, crashed):
            for action in ACTIONS:
                builder.add_outcome(sink, action, sink, 1)

        builder.set_initial(
            builder.state(self._exploring(self.start, kind, "none")) for kind in kinds if "v" in kind
        )
        return finish(builder, reach=[delivered], avoid=[crashed])

    def _explore_transitions(self, builder: PomdpBuilder, cell: Cell, kind, reading: str, crashed: int):
        state = builder.state(self._exploring(cell, kind, reading))
        for action, dx, dy in MOVES:
            target = clamped_step(self.size, cell, dx, dy)
            builder.add_outcome(state, action, builder.state(self._exploring(target, kind, "none")), 1)
        for index, rock in enumerate(self.rocks):
            action = f"sample{index + 1}"
            prefix = f"r{index + 1}"
            if manhattan(cell, rock) <= 1:
                successor = self._exploring(cell, kind, prefix + kind[index])
                builder.add_outcome(state, action, builder.state(successor), 1)
            else:
                for outcome in KINDS:
                    successor = self._exploring(cell, kind, prefix + outcome)
                    builder.add_outcome(state, action, builder.state(successor), Fraction(1, 2))
        if cell in self.rocks:
            rock_kind = kind[self.rocks.index(cell)]
            successor = builder.state(self._carrying(cell)) if rock_kind == "v" else crashed
            builder.add_outcome(state, "collect", successor, 1)
        else:
            builder.add_outcome(state, "collect", state, 1)
        builder.add_outcome(state, "drop", state, 1)
        builder.add_outcome(state, "wait", builder.state(self._exploring(cell, kind, "none")), 1)

    def _carry_transitions(self, builder: PomdpBuilder, cell: Cell, delivered: int):
        state = builder.state(self._carrying(cell))
        for action, dx, dy in MOVES:
            target = clamped_step(self.size, cell, dx, dy)
            builder.add_outcome(state, action, builder.state(self._carrying(target)), 1)
        for action in ("sample1", "sample2", "collect", "wait"):
            builder.add_outcome(state, action, state, 1)
        builder.add_outcome(state, "drop", delivered if cell == self.drop_off else state, 1)

    @staticmethod
    def _exploring(cell: Cell, kind, reading: str) -> str:
        return f"{cell_name(cell)}-{''.join(kind)}-{reading}"

    @staticmethod
    def _carrying(cell: Cell) -> str:
        return f"{cell_name(cell)}-carry"
