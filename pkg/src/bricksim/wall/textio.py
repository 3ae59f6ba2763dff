"""Plain-text grid serialization for wall states and label maps.

One character per cell, rows top to bottom: '.' resting, 'E' excited,
'R' refractory, digits 0-9 for Voronoi labels and '#' for bisector
cells.  'R' does not carry a multi-step countdown; loading one yields a
refractory cell with a single step remaining.
"""
from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from .automaton import EXCITED, RESTING
from .graph import WallGraph
from .voronoi import BOUNDARY


def state_to_text(graph: WallGraph, state: np.ndarray) -> str:
    rows = []
    for y in range(graph.rows):
        chars = []
        for x in range(graph.cols):
            v = int(state[graph.cell_id(x, y)])
            chars.append("." if v == RESTING else "E" if v == EXCITED else "R")
        rows.append("".join(chars))
    return "\n".join(rows) + "\n"


def state_from_text(text: str) -> tuple:
    """Returns (rows, cols, state array); pair with build_brick_wall."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValidationError("empty grid")
    cols = len(lines[0])
    if any(len(ln) != cols for ln in lines):
        raise ValidationError("ragged grid")
    state = np.zeros(len(lines) * cols, dtype=np.int64)
    for y, ln in enumerate(lines):
        for x, ch in enumerate(ln):
            if ch == ".":
                v = RESTING
            elif ch == "E":
                v = EXCITED
            elif ch == "R":
                v = 2
            else:
                raise ValidationError(f"unknown state character {ch!r}")
            state[y * cols + x] = v
    return len(lines), cols, state


def labels_to_text(graph: WallGraph, labels: np.ndarray) -> str:
    if labels.max(initial=0) > 9:
        raise ValidationError("text grids support at most 10 labels (0-9)")
    rows = []
    for y in range(graph.rows):
        chars = []
        for x in range(graph.cols):
            v = int(labels[graph.cell_id(x, y)])
            chars.append("#" if v < 0 else str(v))
        rows.append("".join(chars))
    return "\n".join(rows) + "\n"
