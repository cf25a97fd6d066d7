"""Helpers for state sets stored as int bit vectors."""
from typing import Iterable, Iterator


def mask_of(states: Iterable[int]) -> int:
    mask = 0
    for state in states:
        mask |= 1 << state
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    """Yields the set bit positions of mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def is_subset(small: int, large: int) -> bool:
    return small & ~large == 0
