"""Delay-embedded phase portraits and a coverage metric for them."""
from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from .transient import TraceRecord


def delay_embed(trace: TraceRecord, channel: int, lag: int) -> np.ndarray:
    """Return (N-lag) points (v(t), v(t-lag)) for the given node channel."""
    v = trace.channel(channel)
    if not 1 <= lag < len(v):
        raise ValidationError(f"lag must be in [1, {len(v) - 1}], got {lag}")
    return np.column_stack([v[lag:], v[:-lag]])


def portrait_coverage(points: np.ndarray, grid_resolution: int) -> int:
    """Count occupied cells when the points' bounding box is split into a
    grid_resolution^2 grid.  Degenerate boxes collapse to one row/column."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] != 2:
        raise ValidationError("points must be a non-empty (N, 2) array")
    if grid_resolution < 2:
        raise ValidationError("grid_resolution must be >= 2")
    lo = pts.min(axis=0)
    span = pts.max(axis=0) - lo
    cells = np.zeros((pts.shape[0], 2), dtype=int)
    for d in range(2):
        if span[d] > 0:
            idx = np.floor((pts[:, d] - lo[d]) / span[d] * grid_resolution)
            cells[:, d] = np.clip(idx, 0, grid_resolution - 1).astype(int)
    return len({(int(a), int(b)) for a, b in cells})
