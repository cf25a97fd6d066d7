"""
The eleven-cell cheese maze.

    1  2  3  4  5
    6     7     8
    9    10    11

Moves are deterministic and only enabled towards an adjacent cell. A cell
observes the set of directions it can move in, so 2 and 4 look alike, as
do 6, 7 and 8, and the traps 9 and 11. The cheese at 10 has its own
observation. REACH = {10}, AVOID = {9, 11}; the initial support is {6, 8}.
"""
from typing import Dict, Tuple

from src.benchmarks.gridworld import MOVES, BenchmarkGenerator, Cell, finish, step
from src.pomdp.pomdp import Pomdp, PomdpBuilder
from src.pomdp.specification import Specification

LAYOUT: Dict[str, Cell] = {
    "1": (0, 0),
    "2": (1, 0),
    "3": (2, 0),
    "4": (3, 0),
    "5": (4, 0),
    "6": (0, 1),
    "7": (2, 1),
    "8": (4, 1),
    "9": (0, 2),
    "10": (2, 2),
    "11": (4, 2),
}

GOAL = "10"
TRAPS = ("9", "11")
INITIAL = ("6", "8")


class CheeseGenerator(BenchmarkGenerator):
    def generate(self) -> Tuple[Pomdp, Specification]:
        by_cell = {cell: name for name, cell in LAYOUT.items()}
        builder = PomdpBuilder()
        for action, _, _ in MOVES:
            builder.add_action(action)

        for name, cell in LAYOUT.items():
            open_moves = "".join(
                action[0] for action, dx, dy in MOVES if step(cell, dx, dy) in by_cell
            )
            builder.add_state(name, "cheese" if name == GOAL else open_moves)

        for name, cell in LAYOUT.items():
            for action, dx, dy in MOVES:
                target = step(cell, dx, dy)
                if target in by_cell:
                    builder.add_outcome(builder.state(name), action, builder.state(by_cell[target]), 1)

        builder.set_initial(builder.state(name) for name in INITIAL)
        return finish(
            builder,
            reach=[builder.state(GOAL)],
            avoid=[builder.state(name) for name in TRAPS],
        )
