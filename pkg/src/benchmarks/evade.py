"""
Evade(N, R): cross a patrolled band to reach the far corner without being caught.

Reconstruction:
  - The robot starts at the top-left corner and must reach the
    bottom-right corner. The agent lives in the two middle rows of the
    grid; the rows above and below are only accessible to the robot.
  - The agent is faster: each step it moves one or two cells in a uniformly
    chosen direction (eight options), staying put when the move would
    leave its band.
  - Each step the robot moves (or scans instead of moving), then the agent
    moves. Sharing a cell with the agent after either half-step means the
    robot is caught.
  - The robot sees the agent when it is within Chebyshev distance R, and
    anywhere right after a scan.
"""
from fractions import Fraction
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


class EvadeGenerator(BenchmarkGenerator):
    def __init__(self, size: int, radius: int):
        if size < 4:
            raise BenchmarkException("Evade needs N >= 4.")
        self.size = size
        self.radius = radius
        self.band_rows = (size // 2 - 1, size // 2)
        self.band = [cell for cell in cells(size) if cell[1] in self.band_rows]
        self.start = (0, 0)
        self.goal = (size - 1, size - 1)

    def generate(self) -> Tuple[Pomdp, Specification]:
        builder = PomdpBuilder()
        for action, _, _ in MOVES:
            builder.add_action(action)
        builder.add_action("scan")

        robot_cells = [cell for cell in cells(self.size) if cell != self.goal]
        for robot in robot_cells:
            for agent in self.band:
                if agent == robot:
                    continue
                for scanned in (False, True):
                    builder.add_state(self._name(robot, agent, scanned), self._observation(robot, agent, scanned))
        home = builder.add_state("home", "home")
        caught = builder.add_state("caught", "caught")

        agent_moves = {agent: self._agent_distribution(agent) for agent in self.band}
        for robot in robot_cells:
            for agent in self.band:
                if agent == robot:
                    continue
                for scanned in (False, True):
                    state = builder.state(self._name(robot, agent, scanned))
                    for action, dx, dy in MOVES:
                        target = clamped_step(self.size, robot, dx, dy)
                        self._step(builder, state, action, target, agent, False, agent_moves, home, caught)
                    self._step(builder, state, "scan", robot, agent, True, agent_moves, home, caught)

        for sink in (home, caught):
            for action in builder.action_names:
                builder.add_outcome(sink, action, sink, 1)

        initial = [
            builder.state(self._name(self.start, agent, False))
            for agent in self.band
            if chebyshev(self.start, agent) > self.radius
        ]
        if not initial:
            raise BenchmarkException("Evade: the agent is always visible from the start; use a larger N.")
        builder.set_initial(initial)
        return finish(builder, reach=[home], avoid=[caught])

    def _step(self, builder, state, action, robot, agent, scanned, agent_moves, home, caught):
        if robot == self.goal:
            builder.add_outcome(state, action, home, 1)
            return
        if robot == agent:
            builder.add_outcome(state, action, caught, 1)
            return
        for successor, probability in agent_moves[agent].items():
            if successor == robot:
                builder.add_outcome(state, action, caught, probability)
            else:
                builder.add_outcome(state, action, builder.state(self._name(robot, successor, scanned)), probability)

    def _agent_distribution(self, agent: Cell) -> Dict[Cell, Fraction]:
        distribution: Dict[Cell, Fraction] = {}
        options: List[Cell] = []
        for _, dx, dy in MOVES:
            for distance in (1, 2):
                target = clamped_step(self.size, agent, dx, dy, distance)
                options.append(target if target[1] in self.band_rows else agent)
        for target in options:
            distribution[target] = distribution.get(target, Fraction(0)) + Fraction(1, len(options))
        return distribution

    def _observation(self, robot: Cell, agent: Cell, scanned: bool) -> str:
        if scanned or chebyshev(robot, agent) <= self.radius:
            return f"{cell_name(robot)}-a{agent[0]}_{agent[1]}"
        return f"{cell_name(robot)}-hidden"

    @staticmethod
    def _name(robot: Cell, agent: Cell, scanned: bool) -> str:
        return f"{cell_name(robot)}-a{agent[0]}_{agent[1]}-{'s' if scanned else 'm'}"
