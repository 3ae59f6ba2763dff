"""Excitable-medium dynamics on the wall graph.

States are encoded in integer arrays: 0 = resting, 1 = excited, and
1 + k = refractory with k steps remaining (so refractory_len 1 gives
state value 2).  With a generic rule table only the three plain values
{0, 1, 2} are used.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..errors import ValidationError
from .graph import WallGraph, bfs_distances

RESTING = 0
EXCITED = 1
REFRACTORY = 2  # plain refractory value used by rule tables and text io


@dataclass(frozen=True)
class RuleSpec:
    """Totalistic 3-state rule.

    A resting cell fires when its excited-neighbour count falls in
    [excite_lo, excite_hi]; excited cells turn refractory for
    refractory_len steps, then rest.  An optional table overrides the
    interval form: it must map every (state in {0,1,2}, count in 0..6)
    pair to a next state.
    """

    excite_lo: int = 1
    excite_hi: int = 6
    refractory_len: int = 1
    table: Optional[Dict[Tuple[int, int], int]] = None

    def __post_init__(self):
        if not (1 <= self.excite_lo <= self.excite_hi <= 6):
            raise ValidationError("need 1 <= excite_lo <= excite_hi <= 6")
        if self.refractory_len < 1:
            raise ValidationError("refractory_len must be >= 1")
        if self.table is not None:
            for s in (RESTING, EXCITED, REFRACTORY):
                for c in range(7):
                    if (s, c) not in self.table:
                        raise ValidationError(f"rule table missing entry ({s}, {c})")
                    if self.table[(s, c)] not in (RESTING, EXCITED, REFRACTORY):
                        raise ValidationError("rule table values must be 0, 1 or 2")

    @classmethod
    def classic(cls) -> "RuleSpec":
        """The one-of-six excitation rule with a single refractory step."""
        return cls(excite_lo=1, excite_hi=6, refractory_len=1)


def make_state(graph: WallGraph, excited=()) -> np.ndarray:
    state = np.zeros(graph.cell_count, dtype=np.int64)
    state[list(excited)] = EXCITED
    return state


def step_sync(graph: WallGraph, state: np.ndarray, rule: RuleSpec) -> np.ndarray:
    """One synchronous update; the input state is left untouched."""
    state = np.asarray(state)
    if state.shape != (graph.cell_count,):
        raise ValidationError("state length does not match the wall")
    nbr = graph.neighbor_array()
    excited = state == EXCITED
    padded = np.concatenate([excited, [False]])  # index -1 hits the pad
    counts = padded[nbr].sum(axis=1)

    if rule.table is not None:
        lut = np.empty((3, 7), dtype=np.int64)
        for (s, c), nxt in rule.table.items():
            lut[s, c] = nxt
        return lut[state, counts]

    out = state.copy()
    fire = (state == RESTING) & (counts >= rule.excite_lo) & (counts <= rule.excite_hi)
    out[fire] = EXCITED
    out[state == EXCITED] = 1 + rule.refractory_len
    cooling = state >= 2
    out[cooling] = state[cooling] - 1
    out[state == 2] = RESTING
    return out


def run(graph: WallGraph, initial: np.ndarray, rule: RuleSpec,
        max_steps: int) -> List[np.ndarray]:
    """Trajectory [initial, ...]; stops early on a fixed point."""
    if max_steps < 0:
        raise ValidationError("max_steps must be >= 0")
    traj = [np.asarray(initial).copy()]
    for _ in range(max_steps):
        nxt = step_sync(graph, traj[-1], rule)
        if np.array_equal(nxt, traj[-1]):
            break
        traj.append(nxt)
    return traj


def first_excitation_steps(graph: WallGraph, sources,
                           rule: Optional[RuleSpec] = None,
                           max_steps: Optional[int] = None) -> np.ndarray:
    """Step at which each cell first becomes excited (-1 if never)."""
    rule = rule or RuleSpec.classic()
    state = make_state(graph, sources)
    first = np.full(graph.cell_count, -1, dtype=int)
    first[state == EXCITED] = 0
    limit = max_steps if max_steps is not None else 4 * (graph.rows + graph.cols)
    step = 0
    while step < limit:
        nxt = step_sync(graph, state, rule)
        step += 1
        newly = (nxt == EXCITED) & (first < 0)
        first[newly] = step
        if np.array_equal(nxt, state):
            break
        state = nxt
    return first


def broadcast_time(graph: WallGraph, source: int) -> int:
    """Steps until a single-source excitation wave has visited every cell;
    equals the BFS eccentricity of the source."""
    if not 0 <= source < graph.cell_count:
        raise ValidationError(f"source {source} out of range")
    first = first_excitation_steps(graph, [source])
    if (first < 0).any():
        raise ValidationError("wall graph is disconnected")  # cannot happen
    return int(first.max())
