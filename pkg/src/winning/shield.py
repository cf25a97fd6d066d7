from typing import Dict, FrozenSet

from src.pomdp.belief_support import BeliefSupport
from src.pomdp.pomdp import Pomdp
from src.winning.predicates import safe_actions
from src.winning.region_exception import RegionException
from src.winning.region_store import WinningRegionStore


class Shield:
    """
    Permissive shield derived from a winning region.

    For a winning support it allows exactly the enabled actions whose
    successor supports are all winning.
    """

    def __init__(self, store: WinningRegionStore, pomdp: Pomdp):
        self.store = store
        self.pomdp = pomdp
        self._cache: Dict[BeliefSupport, FrozenSet[int]] = {}

    def allowed(self, support: BeliefSupport) -> FrozenSet[int]:
        """
        Raises:
            RegionException: If support is not winning.
        """
        if support not in self._cache:
            if not self.store.is_winning(support):
                raise RegionException(
                    f"Shield undefined outside the winning region: {support.describe(self.pomdp)}"
                )
            self._cache[support] = frozenset(
                action for action, _ in safe_actions(self.store, self.pomdp, support)
            )
        return self._cache[support]


def shield_allowed(shield: Shield, support: BeliefSupport) -> FrozenSet[int]:
    return shield.allowed(support)
