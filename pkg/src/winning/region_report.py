from dataclasses import dataclass
from typing import Optional

from src.config.defaults import ORACLE_NODE_CAP
from src.graph.graph_exception import BudgetExceededException
from src.graph.oracle import maximal_winning_region
from src.logger.logger import Logger
from src.pomdp.pomdp import Pomdp
from src.pomdp.specification import Specification
from src.winning.predicates import is_deadlock_free, is_productive
from src.winning.region_store import WinningRegionStore

logger = Logger(__name__)


@dataclass(frozen=True)
class RegionReport:
    """
    Audit of a region. sound and maximal compare against the oracle and are
    None when the oracle ran out of its node budget.
    """

    deadlock_free: bool
    productive: bool
    sound: Optional[bool]
    maximal: Optional[bool]
    live_entries: int
    size_estimate: int

    @property
    def ok(self) -> bool:
        return self.deadlock_free and self.productive and self.sound is not False

    def lines(self):
        def word(value):
            return "unknown (oracle budget exceeded)" if value is None else ("yes" if value else "no")

        return [
            f"deadlock-free: {word(self.deadlock_free)}",
            f"productive: {word(self.productive)}",
            f"sound: {word(self.sound)}",
            f"maximal: {word(self.maximal)}",
            f"live entries: {self.live_entries}",
            f"size estimate: {self.size_estimate}",
        ]


def region_report(
    store: WinningRegionStore, pomdp: Pomdp, spec: Specification, cap: int = ORACLE_NODE_CAP
) -> RegionReport:
    sound = maximal = None
    try:
        oracle = maximal_winning_region(pomdp, spec, cap=cap)
        sound = oracle.covers(store)
        maximal = store.covers(oracle)
    except BudgetExceededException as e:
        logger.warning(f"Skipping oracle comparison: {e}")
    size = store.region_size()
    return RegionReport(
        deadlock_free=is_deadlock_free(store, pomdp),
        productive=is_productive(store, pomdp, spec),
        sound=sound,
        maximal=maximal,
        live_entries=size.live_entries,
        size_estimate=size.estimate,
    )
