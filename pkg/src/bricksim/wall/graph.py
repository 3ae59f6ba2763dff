"""Running-bond brick-wall adjacency.

Cell (x, y) with 0-based column x and row y touches (x-1,y), (x+1,y) in
its own row and two bricks in each adjacent row: (x,y±1) and (x+o,y±1)
where the offset o is +1 for even rows and -1 for odd rows.  Interior
bricks therefore have exactly six neighbours; edge bricks keep whatever
subset exists.  Any consistent running-bond offset convention yields an
isomorphic graph; this one is fixed for reproducibility.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..errors import ValidationError


@dataclass
class WallGraph:
    rows: int
    cols: int
    coords: List[Tuple[int, int]]     # cell id -> (x, y)
    adjacency: List[List[int]]        # cell id -> neighbour ids

    @property
    def cell_count(self) -> int:
        return self.rows * self.cols

    def cell_id(self, x: int, y: int) -> int:
        return y * self.cols + x

    def neighbor_array(self) -> np.ndarray:
        """(cells, 6) neighbour ids padded with -1, for vectorized updates."""
        out = np.full((self.cell_count, 6), -1, dtype=np.intp)
        for c, nbrs in enumerate(self.adjacency):
            out[c, : len(nbrs)] = nbrs
        return out


def build_brick_wall(rows: int, cols: int) -> WallGraph:
    if rows < 1 or cols < 1:
        raise ValidationError(f"wall dimensions must be positive, got {rows}x{cols}")
    coords = [(x, y) for y in range(rows) for x in range(cols)]
    adjacency: List[List[int]] = []
    for x, y in coords:
        o = 1 if y % 2 == 0 else -1
        candidates = [(x - 1, y), (x + 1, y),
                      (x, y - 1), (x + o, y - 1),
                      (x, y + 1), (x + o, y + 1)]
        nbrs = [cy * cols + cx for cx, cy in candidates
                if 0 <= cx < cols and 0 <= cy < rows]
        adjacency.append(nbrs)
    return WallGraph(rows=rows, cols=cols, coords=coords, adjacency=adjacency)


def bfs_distances(graph: WallGraph, sources, blocked=frozenset()) -> np.ndarray:
    """Hop distances from the source set over non-blocked cells; -1 where
    unreachable.  The plain BFS used as oracle throughout."""
    dist = np.full(graph.cell_count, -1, dtype=int)
    frontier = [s for s in sources if s not in blocked]
    for s in frontier:
        dist[s] = 0
    d = 0
    while frontier:
        d += 1
        nxt = []
        for c in frontier:
            for n in graph.adjacency[c]:
                if dist[n] < 0 and n not in blocked:
                    dist[n] = d
                    nxt.append(n)
        frontier = nxt
    return dist
