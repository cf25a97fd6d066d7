"""
Obstacle(N): reach the exit of an N x N grid past static traps.

Reconstruction:
  - A dedicated start state whose only action, place, puts the robot
    uniformly on one of the four cells of the top-left 2 x 2 block.
  - Moves go one cell with probability 9/10 and slip a second cell with
    probability 1/10, clamped at the borders (both outcomes merge there).
  - Traps: the 2 x 2 block at the grid centre plus cell (1, N-2). The exit
    is the bottom-right corner.
  - The robot only observes whether it is on a trap, on the exit, or on
    an ordinary cell (plus the start observation).
  - Trap and exit cells keep the four moves as self-loops.

obstacle(6) has 37 states, 224 transitions and 4 observations.
"""
from fractions import Fraction
from typing import Tuple

from src.benchmarks.benchmark_exception import BenchmarkException
from src.benchmarks.gridworld import MOVES, BenchmarkGenerator, cell_name, cells, clamped_step, finish
from src.pomdp.pomdp import Pomdp, PomdpBuilder
from src.pomdp.specification import Specification

SLIP = Fraction(1, 10)


class ObstacleGenerator(BenchmarkGenerator):
    def __init__(self, size: int):
        if size < 6:
            raise BenchmarkException("Obstacle needs N >= 6.")
        self.size = size
        centre = size // 2
        self.traps = {
            (centre - 1, centre - 1),
            (centre - 1, centre),
            (centre, centre - 1),
            (centre, centre),
            (1, size - 2),
        }
        self.exit = (size - 1, size - 1)

    def generate(self) -> Tuple[Pomdp, Specification]:
        builder = PomdpBuilder()
        for action, _, _ in MOVES:
            builder.add_action(action)
        builder.add_action("place")
        for observation in ("start", "free", "trap", "exit"):
            builder.add_observation(observation)

        start = builder.add_state("start", "start")
        for cell in cells(self.size):
            builder.add_state(cell_name(cell), self._observation(cell))

        for cell in ((0, 0), (1, 0), (0, 1), (1, 1)):
            builder.add_outcome(start, "place", builder.state(cell_name(cell)), Fraction(1, 4))

        for cell in cells(self.size):
            state = builder.state(cell_name(cell))
            for action, dx, dy in MOVES:
                if cell in self.traps or cell == self.exit:
                    builder.add_outcome(state, action, state, 1)
                    continue
                near = clamped_step(self.size, cell, dx, dy, 1)
                far = clamped_step(self.size, cell, dx, dy, 2)
                builder.add_outcome(state, action, builder.state(cell_name(near)), 1 - SLIP)
                builder.add_outcome(state, action, builder.state(cell_name(far)), SLIP)

        builder.set_initial([start])
        return finish(
            builder,
            reach=[builder.state(cell_name(self.exit))],
            avoid=[builder.state(cell_name(cell)) for cell in sorted(self.traps)],
        )

    def _observation(self, cell) -> str:
        if cell in self.traps:
            return "trap"
        if cell == self.exit:
            return "exit"
        return "free"
