"""Binary image morphology with the wall adjacency as structuring element."""
from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from .graph import WallGraph

MORPH_OPS = ("dilate", "erode", "contour")


def morph_op(graph: WallGraph, image: np.ndarray, op: str) -> np.ndarray:
    """Single synchronous morphology step over the per-cell binary image."""
    img = np.asarray(image).astype(bool)
    if img.shape != (graph.cell_count,):
        raise ValidationError("image length does not match the wall")
    if op not in MORPH_OPS:
        raise ValidationError(f"unknown op {op!r}; choose from {MORPH_OPS}")
    nbr = graph.neighbor_array()
    on_padded = np.concatenate([img, [False]])
    any_on = (nbr >= 0) & on_padded[nbr]
    any_off = (nbr >= 0) & ~on_padded[nbr]
    if op == "dilate":
        return img | any_on.any(axis=1)
    if op == "erode":
        return img & ~any_off.any(axis=1)
    return img & any_off.any(axis=1)  # contour
