from enum import Enum
from typing import Dict, Iterable, Optional, Tuple

import z3

from src.encoding.encoding_exception import EncodingException
from src.pomdp.pomdp import Pomdp
from src.solver.solver_session import SolverSession
from src.solver.sort import Sort


class Family(Enum):
    POLICY = "policy"
    BOUNDED_RANK = "bounded_rank"
    REAL_RANK = "real_rank"
    PROGRESS = "progress"
    SHORTCUT = "shortcut"


class VariableBook:
    """
    Solver variables of one encoding, declared in the session scope active at construction.

    POLICY:       A_{z}_{a} action a chosen at observation z, C_{s} state s reached
    BOUNDED_RANK: R_{s}_{j} state s has rank at most j, for j in 0..k
    REAL_RANK:    r_{s} real-valued rank
    PROGRESS:     U_{z} the reached states of z are not covered yet
    SHORTCUT:     Sw_{z} shortcut after the next action, Im_{z} shortcut right away,
                  D_{s} shortcut taken in s, P_{z} index of the region entry used at z
    """

    def __init__(
        self,
        session: SolverSession,
        pomdp: Pomdp,
        families: Iterable[Family],
        rank_bound: Optional[int] = None,
    ):
        self.session = session
        self.pomdp = pomdp
        self.families = frozenset(families) | {Family.POLICY}
        self.rank_bound = rank_bound
        self.names: Dict[Tuple, str] = {}
        self._variables: Dict[Tuple, z3.ExprRef] = {}

        for observation in range(pomdp.num_observations):
            for action in pomdp.observation_actions(observation):
                self._declare(("A", observation, action), Sort.boolean())
        for state in pomdp.states():
            self._declare(("C", state), Sort.boolean())

        if Family.BOUNDED_RANK in self.families:
            if rank_bound is None or rank_bound < 1:
                raise EncodingException("Bounded ranking needs a rank bound of at least 1.")
            for state in pomdp.states():
                for rank in range(rank_bound + 1):
                    self._declare(("R", state, rank), Sort.boolean())
        if Family.REAL_RANK in self.families:
            for state in pomdp.states():
                self._declare(("r", state), Sort.real())
        if Family.PROGRESS in self.families:
            for observation in range(pomdp.num_observations):
                self._declare(("U", observation), Sort.boolean())
        if Family.SHORTCUT in self.families:
            for observation in range(pomdp.num_observations):
                self._declare(("Sw", observation), Sort.boolean())
                self._declare(("Im", observation), Sort.boolean())
                self._declare(("P", observation), Sort.bounded_int(0, None))
            for state in pomdp.states():
                self._declare(("D", state), Sort.boolean())

    def _declare(self, key: Tuple, sort: Sort):
        name = "_".join(str(part) for part in key)
        self.names[key] = name
        self._variables[key] = self.session.declare(name, sort)

    def has(self, family: Family) -> bool:
        return family in self.families

    def A(self, observation: int, action: int) -> z3.BoolRef:
        return self._variables[("A", observation, action)]

    def C(self, state: int) -> z3.BoolRef:
        return self._variables[("C", state)]

    def R(self, state: int, rank: int) -> z3.BoolRef:
        return self._variables[("R", state, rank)]

    def r(self, state: int) -> z3.ArithRef:
        return self._variables[("r", state)]

    def U(self, observation: int) -> z3.BoolRef:
        return self._variables[("U", observation)]

    def Sw(self, observation: int) -> z3.BoolRef:
        return self._variables[("Sw", observation)]

    def Im(self, observation: int) -> z3.BoolRef:
        return self._variables[("Im", observation)]

    def D(self, state: int) -> z3.BoolRef:
        return self._variables[("D", state)]

    def P(self, observation: int) -> z3.ArithRef:
        return self._variables[("P", observation)]

    def name(self, *key) -> str:
        return self.names[tuple(key)]
