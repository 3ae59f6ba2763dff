"""Voronoi tessellation of the wall by colliding wavefronts.

Each seed launches a labelled wave; a cell reached first by exactly one
label takes it, simultaneous arrival of different labels marks the cell
as bisector (BOUNDARY).  Cells carry the full set of labels that reached
them first and relay that set, which reproduces nearest-seed-by-hops
classification exactly.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import ValidationError
from .graph import WallGraph, bfs_distances

BOUNDARY = -1
UNREACHED = -2


def voronoi_wavefront(graph: WallGraph, seeds: Sequence[int]) -> np.ndarray:
    """Per-cell seed index, BOUNDARY (-1) on ties."""
    seeds = list(seeds)
    if not seeds:
        raise ValidationError("seed set must be non-empty")
    if len(set(seeds)) != len(seeds):
        raise ValidationError("seeds must be distinct")
    label_sets = [None] * graph.cell_count
    frontier = []
    for i, s in enumerate(seeds):
        if not 0 <= s < graph.cell_count:
            raise ValidationError(f"seed {s} out of range")
        label_sets[s] = frozenset([i])
        frontier.append(s)
    while frontier:
        arriving = {}
        for c in frontier:
            for n in graph.adjacency[c]:
                if label_sets[n] is None:
                    arriving.setdefault(n, set()).update(label_sets[c])
        frontier = []
        for n, labels in arriving.items():
            label_sets[n] = frozenset(labels)
            frontier.append(n)

    out = np.full(graph.cell_count, UNREACHED, dtype=int)
    for c, labels in enumerate(label_sets):
        if labels is None:
            continue
        out[c] = next(iter(labels)) if len(labels) == 1 else BOUNDARY
    return out


def voronoi_bfs_oracle(graph: WallGraph, seeds: Sequence[int]) -> np.ndarray:
    """Brute-force nearest-seed classification (ties -> BOUNDARY)."""
    seeds = list(seeds)
    if not seeds:
        raise ValidationError("seed set must be non-empty")
    dists = np.stack([bfs_distances(graph, [s]) for s in seeds])
    out = np.full(graph.cell_count, UNREACHED, dtype=int)
    for c in range(graph.cell_count):
        col = dists[:, c]
        reachable = col >= 0
        if not reachable.any():
            continue
        best = col[reachable].min()
        winners = np.flatnonzero(reachable & (col == best))
        out[c] = winners[0] if len(winners) == 1 else BOUNDARY
    return out
