import pytest

from src.winning.predicates import is_deadlock_free, is_productive, safe_actions
from src.winning.region_exception import RegionException
from src.winning.region_io import dump_region, load_region, read_region, save_region
from src.winning.region_report import region_report
from src.winning.region_store import InsertOutcome, WinningRegionStore
from src.winning.shield import Shield, shield_allowed
from tests.corpus import named_support


def store_of(pomdp, *supports):
    store = WinningRegionStore(pomdp.num_observations)
    for names in supports:
        store.insert(named_support(pomdp, *names))
    return store


def test_insert_keeps_an_antichain(cheese):
    pomdp, _ = cheese
    store = WinningRegionStore(pomdp.num_observations)
    ns = pomdp.observation_index("ns")

    first = store.insert(named_support(pomdp, "6"))
    assert first.added and first.index == 1

    again = store.insert(named_support(pomdp, "6"))
    assert again.outcome is InsertOutcome.SUBSUMED
    assert again.index is None

    larger = store.insert(named_support(pomdp, "6", "8"))
    assert larger.added
    assert (larger.index, larger.replaced) == (2, 1)

    assert store.insert(named_support(pomdp, "7")).index == 3
    assert store.live_count == 2
    assert store.tombstone_count == 1
    assert store.entry_count(ns) == 3
    assert [entry.live for entry in store.entries(ns)] == [False, True, True]
    assert store.covering_entry(named_support(pomdp, "8")).index == 2


def test_is_winning(cheese):
    pomdp, _ = cheese
    store = store_of(pomdp, ("6", "8"), ("2", "4"))
    assert store.is_winning(named_support(pomdp, "6"))
    assert store.is_winning(named_support(pomdp, "2", "4"))
    assert not store.is_winning(named_support(pomdp, "6", "7"))
    assert not store.is_winning(named_support(pomdp, "1"))


def test_region_size(cheese):
    pomdp, _ = cheese
    assert WinningRegionStore(pomdp.num_observations).region_size().estimate == 0
    size = store_of(pomdp, ("6", "8"), ("7",), ("1",)).region_size()
    assert (size.estimate, size.live_entries) == (5, 3)


def test_copy_and_compaction(cheese):
    pomdp, _ = cheese
    store = store_of(pomdp, ("6",), ("6", "8"), ("7",))
    clone = store.copy()
    clone.insert(named_support(pomdp, "1"))
    assert not store.is_winning(named_support(pomdp, "1"))

    compact = store.compacted()
    assert compact.tombstone_count == 0
    assert compact.same_region(store)
    assert [entry.index for entry in compact.live_entries()] == [1, 2]


def test_covers(cheese, cheese_oracle):
    pomdp, _ = cheese
    small = store_of(pomdp, ("6", "8"), ("10",))
    assert cheese_oracle.covers(small)
    assert not small.covers(cheese_oracle)
    assert small.covered_states() == 1 << 5 | 1 << 7 | 1 << 9


def test_from_reach(cheese):
    pomdp, spec = cheese
    store = WinningRegionStore.from_reach(pomdp, spec)
    assert store.maximal_supports() == {named_support(pomdp, "10")}


def test_oracle_region_is_deadlock_free_and_productive(cheese, cheese_oracle):
    pomdp, spec = cheese
    assert is_deadlock_free(cheese_oracle, pomdp)
    assert is_productive(cheese_oracle, pomdp, spec)


def test_deadlock(cheese):
    pomdp, _ = cheese
    store = store_of(pomdp, ("6", "7", "8"), ("10",))
    assert safe_actions(store, pomdp, named_support(pomdp, "6", "7", "8")) == []
    assert not is_deadlock_free(store, pomdp)


def test_cycle_without_progress(cheese):
    pomdp, spec = cheese
    store = store_of(pomdp, ("1",), ("2",), ("10",))
    assert is_deadlock_free(store, pomdp)
    assert not is_productive(store, pomdp, spec)


def test_shield_allows_region_preserving_actions(cheese, cheese_oracle):
    pomdp, _ = cheese
    shield = Shield(cheese_oracle, pomdp)
    north, south = pomdp.action_index("north"), pomdp.action_index("south")
    assert shield.allowed(named_support(pomdp, "7")) == frozenset({north, south})
    assert shield.allowed(named_support(pomdp, "6", "8")) == frozenset({north})
    assert shield_allowed(shield, named_support(pomdp, "6", "7", "8")) == frozenset({north})


def test_shield_outside_region(cheese, cheese_oracle):
    pomdp, _ = cheese
    with pytest.raises(RegionException):
        Shield(cheese_oracle, pomdp).allowed(named_support(pomdp, "9", "11"))


def test_region_text_round_trip(tmp_path, cheese, cheese_oracle):
    pomdp, _ = cheese
    text = dump_region(cheese_oracle, pomdp)
    assert "win ns 5 6 7" in text.splitlines()
    assert load_region(text, pomdp).same_region(cheese_oracle)

    path = tmp_path / "cheese.win"
    save_region(path, cheese_oracle, pomdp)
    assert read_region(path, pomdp).same_region(cheese_oracle)
    assert dump_region(WinningRegionStore(pomdp.num_observations), pomdp) == ""


@pytest.mark.parametrize(
    "text",
    [
        "win es 0\nbogus\n",
        "win es 0\nwin ns 0\n",
        "win es 0\nwin nowhere 0\n",
        "win es 0\nwin es 99\n",
        "win es 0\nwin es x\n",
    ],
)
def test_region_text_errors(text, cheese):
    pomdp, _ = cheese
    with pytest.raises(RegionException) as error:
        load_region(text, pomdp)
    assert str(error.value).startswith("line 2:")


def test_missing_region_file(tmp_path, cheese):
    with pytest.raises(RegionException):
        read_region(tmp_path / "missing.win", cheese[0])


def test_region_report(cheese, cheese_oracle):
    pomdp, spec = cheese
    report = region_report(cheese_oracle, pomdp, spec)
    assert report.ok
    assert (report.sound, report.maximal) == (True, True)
    assert "maximal: yes" in report.lines()

    stuck = region_report(store_of(pomdp, ("1",), ("2",), ("10",)), pomdp, spec)
    assert stuck.sound and not stuck.maximal
    assert not stuck.productive
    assert not stuck.ok


def test_region_report_without_oracle(cheese, cheese_oracle):
    pomdp, spec = cheese
    report = region_report(cheese_oracle, pomdp, spec, cap=3)
    assert report.sound is None and report.maximal is None
    assert report.ok
    assert "sound: unknown (oracle budget exceeded)" in report.lines()
