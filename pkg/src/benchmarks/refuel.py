"""
Refuel(N, E): drive from the top-left to the bottom-right corner of an
N x N grid without running out of energy or hitting the obstacle.

Reconstruction:
  - The obstacle occupies the inner diagonal cells (i, i), 0 < i < N-1;
    entering it leads to the crashed sink.
  - Every successful move costs one unit of energy; with no energy left
    moves do nothing. Moves north, south and west are deterministic, a
    move east succeeds with probability 4/5 and otherwise leaves the rover
    where it is without spending energy. Moves into the border do nothing.
  - Recharging stations at the top-right and bottom-left corners offer a
    fifth action, refuel, which restores the battery to E.
  - The rover observes its exact energy level but only a coarse position:
    whether it is at a station, otherwise which of three horizontal bands
    it is in.
  - Reaching the goal corner leads to the arrived sink.

refuel(6, 8) has 281 states, 1350 transitions and 38 observations.
"""
from fractions import Fraction
from typing import Tuple

from src.benchmarks.benchmark_exception import BenchmarkException
from src.benchmarks.gridworld import MOVES, BenchmarkGenerator, Cell, cell_name, cells, finish, inside, step
from src.pomdp.pomdp import Pomdp, PomdpBuilder
from src.pomdp.specification import Specification

EAST_SUCCESS = Fraction(4, 5)
BANDS = 3


class RefuelGenerator(BenchmarkGenerator):
    def __init__(self, size: int, capacity: int):
        if size < 3:
            raise BenchmarkException("Refuel needs N >= 3.")
        self.size = size
        self.capacity = capacity
        self.obstacle = {(i, i) for i in range(1, size - 1)}
        self.goal = (size - 1, size - 1)
        self.stations = {(size - 1, 0), (0, size - 1)}

    def generate(self) -> Tuple[Pomdp, Specification]:
        builder = PomdpBuilder()
        for action, _, _ in MOVES:
            builder.add_action(action)
        builder.add_action("refuel")
        for energy in range(self.capacity + 1):
            builder.add_observation(f"e{energy}-station")
            for band in range(BANDS):
                builder.add_observation(f"e{energy}-band{band}")

        regular = [cell for cell in cells(self.size) if cell not in self.obstacle and cell != self.goal]
        for cell in regular:
            for energy in range(self.capacity + 1):
                builder.add_state(self._name(cell, energy), self._observation(cell, energy))
        crashed = builder.add_state("crashed", "crashed")
        arrived = builder.add_state("arrived", "arrived")

        for cell in regular:
            for energy in range(self.capacity + 1):
                state = builder.state(self._name(cell, energy))
                for action, dx, dy in MOVES:
                    target = step(cell, dx, dy)
                    if energy == 0 or not inside(self.size, target):
                        builder.add_outcome(state, action, state, 1)
                        continue
                    if target in self.obstacle:
                        successor = crashed
                    elif target == self.goal:
                        successor = arrived
                    else:
                        successor = builder.state(self._name(target, energy - 1))
                    if action == "east":
                        builder.add_outcome(state, action, successor, EAST_SUCCESS)
                        builder.add_outcome(state, action, state, 1 - EAST_SUCCESS)
                    else:
                        builder.add_outcome(state, action, successor, 1)
                if cell in self.stations:
                    builder.add_outcome(state, "refuel", builder.state(self._name(cell, self.capacity)), 1)

        for sink in (crashed, arrived):
            for action, _, _ in MOVES:
                builder.add_outcome(sink, action, sink, 1)

        builder.set_initial([builder.state(self._name((0, 0), self.capacity))])
        return finish(builder, reach=[arrived], avoid=[crashed])

    @staticmethod
    def _name(cell: Cell, energy: int) -> str:
        return f"{cell_name(cell)}e{energy}"

    def _observation(self, cell: Cell, energy: int) -> str:
        if cell in self.stations:
            return f"e{energy}-station"
        return f"e{energy}-band{min(BANDS - 1, cell[1] * BANDS // self.size)}"
