"""
Avoid(N, R): reach the far corner while keeping clear of two patrolling agents.

Reconstruction:
  - Agent A patrols back and forth along row N // 3, agent B along column
    2N // 3, each across the full grid. Routes are cyclic position lists
    and both agents start at position 0.
  - Speeds are uncertain: each step every agent independently advances one
    or two route positions with probability 1/2 each.
  - The robot starts top-left and must reach the bottom-right corner. It
    moves (or stays) first, then the agents advance. Sharing a cell with an
    agent after either half-step is a collision.
  - The robot sees an agent's position only within Chebyshev distance R.
"""
from fractions import Fraction
from itertools import product
from typing import Dict, List, Tuple

from src.benchmarks.benchmark_exception import BenchmarkException
from src.benchmarks.gridworld import (
    MOVES,
    BenchmarkGenerator,
    Cell,
    cell_name,
    cells,
    chebyshev,
    clamped_step,
    finish,
)
from src.pomdp.pomdp import Pomdp, PomdpBuilder
from src.pomdp.specification import Specification

SPEEDS = ((1, Fraction(1, 2)), (2, Fraction(1, 2)))


def patrol_route(line: List[Cell]) -> List[Cell]:
    """Back-and-forth cycle over line: a b c d c b."""
    return line + line[-2:0:-1]


class AvoidGenerator(BenchmarkGenerator):
    def __init__(self, size: int, radius: int):
        if size < 5:
            raise BenchmarkException("Avoid needs N >= 5.")
        self.size = size
        self.radius = radius
        self.routes = (
            patrol_route([(x, size // 3) for x in range(size)]),
            patrol_route([(2 * size // 3, y) for y in range(size)]),
        )
        self.start = (0, 0)
        self.goal = (size - 1, size - 1)

    def generate(self) -> Tuple[Pomdp, Specification]:
        builder = PomdpBuilder()
        for action, _, _ in MOVES:
            builder.add_action(action)
        builder.add_action("stay")

        positions = list(product(range(len(self.routes[0])), range(len(self.routes[1]))))
        configurations = [
            (robot, position)
            for robot in cells(self.size)
            if robot != self.goal
            for position in positions
            if robot not in self._agents(position)
        ]
        for robot, position in configurations:
            builder.add_state(self._name(robot, position), self._observation(robot, position))
        arrived = builder.add_state("arrived", "arrived")
        collided = builder.add_state("collided", "collided")

        advances = {position: self._advance(position) for position in positions}
        robot_moves = MOVES + (("stay", 0, 0),)
        for robot, position in configurations:
            state = builder.state(self._name(robot, position))
            for action, dx, dy in robot_moves:
                target = clamped_step(self.size, robot, dx, dy)
                if target == self.goal:
                    builder.add_outcome(state, action, arrived, 1)
                    continue
                if target in self._agents(position):
                    builder.add_outcome(state, action, collided, 1)
                    continue
                for successor, probability in advances[position].items():
                    if target in self._agents(successor):
                        outcome = collided
                    else:
                        outcome = builder.state(self._name(target, successor))
                    builder.add_outcome(state, action, outcome, probability)

        for sink in (arrived, collided):
            for action, _, _ in robot_moves:
                builder.add_outcome(sink, action, sink, 1)

        builder.set_initial([builder.state(self._name(self.start, (0, 0)))])
        return finish(builder, reach=[arrived], avoid=[collided])

    def _agents(self, position: Tuple[int, int]) -> Tuple[Cell, Cell]:
        return self.routes[0][position[0]], self.routes[1][position[1]]

    def _advance(self, position: Tuple[int, int]) -> Dict[Tuple[int, int], Fraction]:
        distribution: Dict[Tuple[int, int], Fraction] = {}
        for (first, p), (second, q) in product(SPEEDS, SPEEDS):
            successor = (
                (position[0] + first) % len(self.routes[0]),
                (position[1] + second) % len(self.routes[1]),
            )
            distribution[successor] = distribution.get(successor, Fraction(0)) + p * q
        return distribution

    def _observation(self, robot: Cell, position: Tuple[int, int]) -> str:
        seen = []
        for label, agent, index in zip("ab", self._agents(position), position):
            seen.append(f"{label}{index}" if chebyshev(robot, agent) <= self.radius else f"{label}-")
        return f"{cell_name(robot)}-{''.join(seen)}"

    @staticmethod
    def _name(robot: Cell, position: Tuple[int, int]) -> str:
        return f"{cell_name(robot)}-a{position[0]}-b{position[1]}"
