"""Deterministic rasterization of wall states to P6 portable pixmaps."""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..errors import ValidationError
from .automaton import EXCITED, RESTING
from .graph import WallGraph
from .voronoi import BOUNDARY

COLOR_RESTING = (150, 90, 40)    # brown
COLOR_EXCITED = (220, 40, 40)    # red
COLOR_REFRACTORY = (50, 60, 210)  # blue
COLOR_BOUNDARY = (20, 20, 20)

LABEL_PALETTE = (
    (230, 90, 40), (60, 170, 70), (60, 110, 220), (220, 190, 40),
    (160, 60, 200), (70, 200, 200), (220, 120, 180), (130, 130, 60),
    (240, 150, 60), (90, 90, 240),
)


def render_frame(graph: WallGraph, state: Optional[np.ndarray] = None,
                 labels: Optional[np.ndarray] = None,
                 brick_w: int = 12, brick_h: int = 6) -> np.ndarray:
    """RGB uint8 raster; one w*h block per brick, odd rows offset by half
    a brick (running bond).  Pass either a CA state or a label array."""
    if (state is None) == (labels is None):
        raise ValidationError("pass exactly one of state or labels")
    values = state if state is not None else labels
    values = np.asarray(values)
    if values.shape != (graph.cell_count,):
        raise ValidationError("state length does not match the wall")

    width = graph.cols * brick_w + brick_w // 2
    height = graph.rows * brick_h
    img = np.zeros((height, width, 3), dtype=np.uint8)
    for c, (x, y) in enumerate(graph.coords):
        if state is not None:
            v = int(values[c])
            if v == RESTING:
                color = COLOR_RESTING
            elif v == EXCITED:
                color = COLOR_EXCITED
            else:
                color = COLOR_REFRACTORY
        else:
            v = int(values[c])
            color = COLOR_BOUNDARY if v < 0 else LABEL_PALETTE[v % len(LABEL_PALETTE)]
        x0 = x * brick_w + (brick_w // 2 if y % 2 else 0)
        y0 = y * brick_h
        img[y0: y0 + brick_h, x0: x0 + brick_w] = color
    return img


def write_ppm(img: np.ndarray, path) -> None:
    """Binary P6 pixmap."""
    h, w, _ = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode())
        fh.write(img.astype(np.uint8).tobytes())


def ppm_bytes(img: np.ndarray) -> bytes:
    h, w, _ = img.shape
    return f"P6\n{w} {h}\n255\n".encode() + img.astype(np.uint8).tobytes()
