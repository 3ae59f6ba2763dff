"""Wall-scale cellular automaton engine on the running-bond brick graph."""

from .automaton import (
    EXCITED,
    RESTING,
    RuleSpec,
    broadcast_time,
    first_excitation_steps,
    make_state,
    run,
    step_sync,
)
from .graph import WallGraph, bfs_distances, build_brick_wall
from .morphology import MORPH_OPS, morph_op
from .render import ppm_bytes, render_frame, write_ppm
from .textio import labels_to_text, state_from_text, state_to_text
from .voronoi import BOUNDARY, voronoi_bfs_oracle, voronoi_wavefront

__all__ = [
    "EXCITED", "RESTING", "RuleSpec", "broadcast_time",
    "first_excitation_steps", "make_state", "run", "step_sync",
    "WallGraph", "bfs_distances", "build_brick_wall",
    "MORPH_OPS", "morph_op",
    "ppm_bytes", "render_frame", "write_ppm",
    "labels_to_text", "state_from_text", "state_to_text",
    "BOUNDARY", "voronoi_bfs_oracle", "voronoi_wavefront",
]
