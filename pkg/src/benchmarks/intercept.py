"""
Intercept(N, R): meet an agent before it leaves the grid through one of two exits.

Reconstruction:
  - The agent starts somewhere in the two leftmost columns. It can only
    move inside its territory: those two columns, a one-cell-high corridor
    along the middle row, and the rightmost column, whose corner cells are
    the exits.
  - Each step the agent moves east with probability 1/2 and north or south
    with probability 1/4 each, staying put when the target is outside its
    territory.
  - The robot starts at the middle of the top row and moves freely (or
    stays). Robot and agent sharing a cell after either half-step is an
    interception; the agent reaching an exit first is an escape.
  - The robot sees the agent within Chebyshev distance R and whenever the
    agent is in the corridor.
"""
from fractions import Fraction
from typing import Dict, Tuple

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
    step,
)
from src.pomdp.pomdp import Pomdp, PomdpBuilder
from src.pomdp.specification import Specification

AGENT_MOVES = (((1, 0), Fraction(1, 2)), ((0, -1), Fraction(1, 4)), ((0, 1), Fraction(1, 4)))


class InterceptGenerator(BenchmarkGenerator):
    def __init__(self, size: int, radius: int):
        if size < 5:
            raise BenchmarkException("Intercept needs N >= 5.")
        self.size = size
        self.radius = radius
        self.corridor_row = size // 2
        self.exits = {(size - 1, 0), (size - 1, size - 1)}
        self.territory = {
            cell
            for cell in cells(size)
            if cell[0] <= 1 or cell[0] == size - 1 or cell[1] == self.corridor_row
        }
        self.start = (size // 2, 0)

    def generate(self) -> Tuple[Pomdp, Specification]:
        builder = PomdpBuilder()
        for action, _, _ in MOVES:
            builder.add_action(action)
        builder.add_action("stay")

        agents = [cell for cell in cells(self.size) if cell in self.territory and cell not in self.exits]
        pairs = [(robot, agent) for robot in cells(self.size) for agent in agents if robot != agent]
        for robot, agent in pairs:
            builder.add_state(self._name(robot, agent), self._observation(robot, agent))
        intercepted = builder.add_state("intercepted", "intercepted")
        escaped = builder.add_state("escaped", "escaped")

        agent_moves = {agent: self._agent_distribution(agent) for agent in agents}
        robot_moves = MOVES + (("stay", 0, 0),)
        for robot, agent in pairs:
            state = builder.state(self._name(robot, agent))
            for action, dx, dy in robot_moves:
                target = clamped_step(self.size, robot, dx, dy)
                if target == agent:
                    builder.add_outcome(state, action, intercepted, 1)
                    continue
                for successor, probability in agent_moves[agent].items():
                    if successor == target:
                        outcome = intercepted
                    elif successor in self.exits:
                        outcome = escaped
                    else:
                        outcome = builder.state(self._name(target, successor))
                    builder.add_outcome(state, action, outcome, probability)

        for sink in (intercepted, escaped):
            for action, _, _ in robot_moves:
                builder.add_outcome(sink, action, sink, 1)

        initial = [
            builder.state(self._name(self.start, agent))
            for agent in agents
            if agent[0] == 0 and not self._visible(self.start, agent)
        ]
        if not initial:
            raise BenchmarkException("Intercept: the agent is always visible from the start; use a smaller R.")
        builder.set_initial(initial)
        return finish(builder, reach=[intercepted], avoid=[escaped])

    def _agent_distribution(self, agent: Cell) -> Dict[Cell, Fraction]:
        distribution: Dict[Cell, Fraction] = {}
        for (dx, dy), probability in AGENT_MOVES:
            target = step(agent, dx, dy)
            if target not in self.territory:
                target = agent
            distribution[target] = distribution.get(target, Fraction(0)) + probability
        return distribution

    def _visible(self, robot: Cell, agent: Cell) -> bool:
        in_corridor = agent[1] == self.corridor_row and 1 < agent[0] < self.size - 1
        return in_corridor or chebyshev(robot, agent) <= self.radius

    def _observation(self, robot: Cell, agent: Cell) -> str:
        if self._visible(robot, agent):
            return f"{cell_name(robot)}-a{agent[0]}_{agent[1]}"
        return f"{cell_name(robot)}-hidden"

    @staticmethod
    def _name(robot: Cell, agent: Cell) -> str:
        return f"{cell_name(robot)}-a{agent[0]}_{agent[1]}"
