"""Brick-to-brick communication on the wall graph.

Synchronous-round model in lock step with the CA clock: each round, every
cell that learned a message last round forwards it once to all of its
alive neighbours.  Fault scenarios remove cells entirely (no forwarding,
no reception).
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .errors import ValidationError
from .wall.graph import WallGraph, bfs_distances


@dataclass(frozen=True)
class FaultScenario:
    failed: FrozenSet[int]
    seed: Optional[int] = None

    @property
    def failure_count(self) -> int:
        return len(self.failed)

    @classmethod
    def random(cls, graph: WallGraph, failure_count: int, seed: int,
               protect: Iterable[int] = ()) -> "FaultScenario":
        """Draw failure_count distinct failed cells, never touching the
        protected cells (e.g. the src/dst pair under test)."""
        pool = [c for c in range(graph.cell_count) if c not in set(protect)]
        if failure_count > len(pool):
            raise ValidationError("more failures requested than available cells")
        rng = np.random.default_rng(seed)
        picks = rng.choice(len(pool), size=failure_count, replace=False)
        return cls(failed=frozenset(pool[i] for i in picks), seed=seed)


NO_FAULTS = FaultScenario(failed=frozenset())


@dataclass(frozen=True)
class Message:
    msg_id: int
    src: int
    dst: int
    payload: bytes = b""
    ttl: int = 1

    def __post_init__(self):
        if self.ttl < 1:
            raise ValidationError("ttl must be >= 1")


@dataclass
class FloodResult:
    delivered: bool
    hops: int                 # first round dst was informed; -1 if never
    messages_sent: int
    per_round: List[int]


@dataclass
class GossipState:
    values: np.ndarray        # per-cell aggregate; failed cells hold nan
    rounds: int
    aggregation: str


def _check_alive(graph: WallGraph, faults: FaultScenario, *cells: int) -> None:
    for c in cells:
        if not 0 <= c < graph.cell_count:
            raise ValidationError(f"cell {c} out of range")
        if c in faults.failed:
            raise ValidationError(f"cell {c} has failed")


def flood_route(graph: WallGraph, faults: FaultScenario, src: int, dst: int,
                ttl: int) -> FloodResult:
    """Flood a message from src; each informed cell forwards exactly once
    (informed-set suppression).  hops equals the BFS distance of dst in
    the fault-reduced graph when delivered within ttl rounds."""
    if ttl < 1:
        raise ValidationError("ttl must be >= 1")
    _check_alive(graph, faults, src, dst)
    if src == dst:
        return FloodResult(delivered=True, hops=0, messages_sent=0, per_round=[])

    informed = {src}
    frontier = [src]
    per_round: List[int] = []
    hops = -1
    for r in range(1, ttl + 1):
        if not frontier:
            break
        sends = 0
        newly: Set[int] = set()
        for c in frontier:
            for n in graph.adjacency[c]:
                if n in faults.failed:
                    continue
                sends += 1
                if n not in informed:
                    newly.add(n)
        per_round.append(sends)
        informed |= newly
        if dst in newly and hops < 0:
            hops = r
        frontier = sorted(newly)
    return FloodResult(delivered=hops >= 0, hops=hops,
                       messages_sent=sum(per_round), per_round=per_round)


def connectivity_oracle(graph: WallGraph, faults: FaultScenario,
                        src: int) -> Set[int]:
    """BFS reachability over alive cells; the ground truth for flooding."""
    _check_alive(graph, faults, src)
    dist = bfs_distances(graph, [src], blocked=faults.failed)
    return set(np.flatnonzero(dist >= 0).tolist())


def alive_components(graph: WallGraph, faults: FaultScenario) -> List[Set[int]]:
    seen: Set[int] = set(faults.failed)
    comps = []
    for c in range(graph.cell_count):
        if c in seen:
            continue
        comp = connectivity_oracle(graph, faults, c)
        comps.append(comp)
        seen |= comp
    return comps


def component_diameter(graph: WallGraph, faults: FaultScenario,
                       component: Set[int]) -> int:
    return max(
        int(bfs_distances(graph, [c], blocked=faults.failed)[sorted(component)].max())
        for c in component)


GOSSIP_OPS = ("min", "max")


def gossip_aggregate(graph: WallGraph, faults: FaultScenario,
                     initial_values: np.ndarray, aggregation: str,
                     rounds: int) -> GossipState:
    """Idempotent neighbourhood gossip; min/max converge to the exact
    component optimum within component-diameter rounds."""
    if aggregation not in GOSSIP_OPS:
        raise ValidationError(f"aggregation must be one of {GOSSIP_OPS}")
    if rounds < 0:
        raise ValidationError("rounds must be >= 0")
    values = np.asarray(initial_values, dtype=float)
    if values.shape != (graph.cell_count,):
        raise ValidationError("initial values length does not match the wall")
    v = values.copy()
    v[sorted(faults.failed)] = np.nan
    combine = np.fmin if aggregation == "min" else np.fmax
    for _ in range(rounds):
        nxt = v.copy()
        for c in range(graph.cell_count):
            if c in faults.failed:
                continue
            for n in graph.adjacency[c]:
                if n not in faults.failed:
                    nxt[c] = combine(nxt[c], v[n])
        v = nxt
    return GossipState(values=v, rounds=rounds, aggregation=aggregation)


def spanning_tree_mean(graph: WallGraph, faults: FaultScenario,
                       initial_values: np.ndarray) -> np.ndarray:
    """Exact per-component mean via a BFS spanning-tree sum (naive gossip
    averaging double-counts on cyclic graphs, so mean is not gossiped)."""
    values = np.asarray(initial_values, dtype=float)
    out = np.full(graph.cell_count, np.nan)
    for comp in alive_components(graph, faults):
        idx = sorted(comp)
        out[idx] = values[idx].mean()
    return out


def message_cost(result: FloodResult) -> Dict[str, object]:
    return {"total_messages": result.messages_sent,
            "per_round": list(result.per_round)}


# ---------------------------------------------------------------------------
# Scenario files: plain text, one key per line.

@dataclass
class RouteScenario:
    rows: int
    cols: int
    ttl: int
    faults: List[int]
    pairs: List[Tuple[int, int]]
    seed: int = 0


def scenario_dumps(sc: RouteScenario) -> str:
    lines = [f"rows {sc.rows}", f"cols {sc.cols}", f"ttl {sc.ttl}",
             f"seed {sc.seed}",
             "faults " + " ".join(str(f) for f in sorted(sc.faults))]
    for a, b in sc.pairs:
        lines.append(f"pair {a} {b}")
    return "\n".join(lines) + "\n"


def scenario_loads(text: str) -> RouteScenario:
    rows = cols = ttl = None
    seed = 0
    faults: List[int] = []
    pairs: List[Tuple[int, int]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if tok[0] == "rows":
            rows = int(tok[1])
        elif tok[0] == "cols":
            cols = int(tok[1])
        elif tok[0] == "ttl":
            ttl = int(tok[1])
        elif tok[0] == "seed":
            seed = int(tok[1])
        elif tok[0] == "faults":
            faults = [int(t) for t in tok[1:]]
        elif tok[0] == "pair":
            pairs.append((int(tok[1]), int(tok[2])))
        else:
            raise ValidationError(f"unknown scenario line: {line!r}")
    if rows is None or cols is None or ttl is None:
        raise ValidationError("scenario missing rows/cols/ttl")
    return RouteScenario(rows, cols, ttl, faults, pairs, seed)


def route_results_csv(rows: Sequence[Dict[str, object]]) -> str:
    buf = io.StringIO()
    buf.write("scenario,src,dst,fault_count,delivered,hops,messages\n")
    for r in rows:
        buf.write("{scenario},{src},{dst},{fault_count},"
                  "{delivered},{hops},{messages}\n".format(**r))
    return buf.getvalue()
