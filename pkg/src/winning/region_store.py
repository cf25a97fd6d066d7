from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Iterator, List, Optional, Tuple

from src.pomdp.belief_support import BeliefSupport, split_by_observation
from src.pomdp.bits import is_subset, popcount
from src.pomdp.pomdp import Pomdp
from src.pomdp.specification import Specification


class InsertOutcome(Enum):
    ADDED = "added"
    SUBSUMED = "subsumed"


@dataclass(frozen=True)
class InsertResult:
    outcome: InsertOutcome
    index: Optional[int] = None
    replaced: int = 0

    @property
    def added(self) -> bool:
        return self.outcome is InsertOutcome.ADDED


@dataclass
class RegionEntry:
    index: int
    support: BeliefSupport
    live: bool = True


@dataclass(frozen=True)
class RegionSize:
    estimate: int
    live_entries: int


class WinningRegionStore:
    """
    Per-observation antichains of maximal winning belief supports.

    Entries get 1-based indices per observation that are never reused.
    An entry subsumed by a later insert is tombstoned rather than removed,
    so indices referenced by shortcut constraints stay valid. A support is
    winning iff it is contained in a live entry of its observation.
    """

    def __init__(self, num_observations: int):
        self.num_observations = num_observations
        self._entries: List[List[RegionEntry]] = [[] for _ in range(num_observations)]
        self._live_count = 0
        self._tombstone_count = 0

    @classmethod
    def from_reach(cls, pomdp: Pomdp, spec: Specification) -> "WinningRegionStore":
        """Store holding, per observation, the REACH states carrying it."""
        store = cls(pomdp.num_observations)
        for support in split_by_observation(pomdp, spec.reach_mask):
            store.insert(support)
        return store

    def insert(self, support: BeliefSupport) -> InsertResult:
        entries = self._entries[support.observation]
        if any(entry.live and is_subset(support.members, entry.support.members) for entry in entries):
            return InsertResult(InsertOutcome.SUBSUMED)
        replaced = 0
        for entry in entries:
            if entry.live and is_subset(entry.support.members, support.members):
                entry.live = False
                replaced += 1
        index = len(entries) + 1
        entries.append(RegionEntry(index, support))
        self._live_count += 1 - replaced
        self._tombstone_count += replaced
        return InsertResult(InsertOutcome.ADDED, index, replaced)

    def is_winning(self, support: BeliefSupport) -> bool:
        return self.covering_entry(support) is not None

    def covering_entry(self, support: BeliefSupport) -> Optional[RegionEntry]:
        for entry in self._entries[support.observation]:
            if entry.live and is_subset(support.members, entry.support.members):
                return entry
        return None

    def entries(self, observation: int) -> Tuple[RegionEntry, ...]:
        """All entries of observation, tombstoned ones included, in index order."""
        return tuple(self._entries[observation])

    def entry_count(self, observation: int) -> int:
        return len(self._entries[observation])

    def live_entries(self, observation: Optional[int] = None) -> Iterator[RegionEntry]:
        observations = range(self.num_observations) if observation is None else (observation,)
        for current in observations:
            for entry in self._entries[current]:
                if entry.live:
                    yield entry

    def maximal_supports(self) -> FrozenSet[BeliefSupport]:
        return frozenset(entry.support for entry in self.live_entries())

    def covered_states(self) -> int:
        """Bit mask of all states appearing in a live entry."""
        mask = 0
        for entry in self.live_entries():
            mask |= entry.support.members
        return mask

    @property
    def live_count(self) -> int:
        return self._live_count

    @property
    def tombstone_count(self) -> int:
        return self._tombstone_count

    def region_size(self) -> RegionSize:
        """Sum of 2^|X| - 1 over live entries; overlapping entries are counted twice."""
        estimate = sum(2 ** popcount(entry.support.members) - 1 for entry in self.live_entries())
        return RegionSize(estimate, self._live_count)

    def covers(self, other: "WinningRegionStore") -> bool:
        """True iff every support winning in other is winning here."""
        return all(self.is_winning(entry.support) for entry in other.live_entries())

    def same_region(self, other: "WinningRegionStore") -> bool:
        return self.maximal_supports() == other.maximal_supports()

    def copy(self) -> "WinningRegionStore":
        clone = WinningRegionStore(self.num_observations)
        clone._entries = [
            [RegionEntry(entry.index, entry.support, entry.live) for entry in entries]
            for entries in self._entries
        ]
        clone._live_count = self._live_count
        clone._tombstone_count = self._tombstone_count
        return clone

    def compacted(self) -> "WinningRegionStore":
        """A store with the same live entries, re-indexed from 1 and without tombstones."""
        clone = WinningRegionStore(self.num_observations)
        for entry in self.live_entries():
            clone.insert(entry.support)
        return clone
