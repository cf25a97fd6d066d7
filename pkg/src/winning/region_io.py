"""
Text form of a winning region, one live entry per line:

    win <observation-name> <state-index> <state-index> ...
"""
from pathlib import Path
from typing import Union

from src.pomdp.belief_support import BeliefSupport
from src.pomdp.bits import mask_of
from src.pomdp.pomdp import Pomdp
from src.pomdp.pomdp_exception import PomdpException
from src.winning.region_exception import RegionException
from src.winning.region_store import WinningRegionStore


def dump_region(store: WinningRegionStore, pomdp: Pomdp) -> str:
    lines = []
    for entry in store.live_entries():
        states = " ".join(str(state) for state in entry.support.states())
        lines.append(f"win {pomdp.observation_names[entry.support.observation]} {states}")
    return "\n".join(lines) + "\n" if lines else ""


def load_region(text: str, pomdp: Pomdp) -> WinningRegionStore:
    """
    Raises:
        RegionException: On malformed lines or supports that do not fit the model.
    """
    store = WinningRegionStore(pomdp.num_observations)
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, *args = line.split()
        if keyword != "win" or len(args) < 2:
            raise RegionException(f"line {line_number}: expected 'win <observation> <state> ...'")
        try:
            observation = pomdp.observation_index(args[0])
            states = [int(token) for token in args[1:]]
        except (PomdpException, ValueError) as e:
            raise RegionException(f"line {line_number}: {e}")
        if any(not 0 <= state < pomdp.num_states for state in states):
            raise RegionException(f"line {line_number}: state index out of range")
        if any(pomdp.observation(state) != observation for state in states):
            raise RegionException(f"line {line_number}: states do not carry observation {args[0]}")
        store.insert(BeliefSupport(observation, mask_of(states)))
    return store


def save_region(path: Union[str, Path], store: WinningRegionStore, pomdp: Pomdp):
    Path(path).write_text(dump_region(store, pomdp), encoding="utf-8")


def read_region(path: Union[str, Path], pomdp: Pomdp) -> WinningRegionStore:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise RegionException(f"Cannot read region file {path}: {e}")
    return load_region(text, pomdp)
