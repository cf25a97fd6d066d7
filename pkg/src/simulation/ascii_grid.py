import re
from typing import Dict, Optional, Tuple

from src.pomdp.belief_support import BeliefSupport
from src.pomdp.pomdp import Pomdp

_COORDINATES = re.compile(r"x(\d+)y(\d+)")


def cell_of(name: str) -> Optional[Tuple[int, int]]:
    match = _COORDINATES.search(name)
    if match is None:
        return None
    return int(match.group(1)), int(match.group(2))


def render_grid(pomdp: Pomdp, state: int, support: BeliefSupport) -> Optional[str]:
    """
    Draws the grid of a model whose state names carry x<i>y<j> coordinates.

    'A' marks the true cell, '*' cells of the belief support, '.' other
    cells. Returns None for models without coordinates.
    """
    cells: Dict[int, Tuple[int, int]] = {}
    for index, name in enumerate(pomdp.state_names):
        cell = cell_of(name)
        if cell is not None:
            cells[index] = cell
    if not cells:
        return None
    width = max(x for x, _ in cells.values()) + 1
    height = max(y for _, y in cells.values()) + 1
    rows = [[" "] * width for _ in range(height)]
    for x, y in cells.values():
        rows[y][x] = "."
    for member in support.states():
        if member in cells:
            x, y = cells[member]
            rows[y][x] = "*"
    if state in cells:
        x, y = cells[state]
        rows[y][x] = "A"
    return "\n".join("".join(row) for row in rows)
