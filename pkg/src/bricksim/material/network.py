"""Random resistor/capacitor/memristor networks modelling doped concrete.

A brick substrate is an nx*ny*nz lattice of nodes; every lattice edge
carries one element whose kind is drawn independently per edge.  Each
node additionally gets a high-resistance leak to ground so the nodal
matrix is always nonsingular (the weakly conducting concrete matrix).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from ..errors import ValidationError
from .elements import Capacitor, Element, Memristor, Resistor


@dataclass
class CircuitTopology:
    node_count: int
    ground: int
    elements: List[Tuple[int, int, Element]]
    input_pins: List[int]
    output_pins: List[int]
    seed: int = 0

    def __post_init__(self):
        n = self.node_count
        if n < 1:
            raise ValidationError("node_count must be >= 1")
        if not (0 <= self.ground < n):
            raise ValidationError("ground node out of range")
        for a, b, _ in self.elements:
            if a == b:
                raise ValidationError(f"element connects node {a} to itself")
            if not (0 <= a < n and 0 <= b < n):
                raise ValidationError(f"element endpoint out of range: ({a}, {b})")
        for pin in list(self.input_pins) + list(self.output_pins):
            if not (0 <= pin < n):
                raise ValidationError(f"pin {pin} out of range")

    @property
    def memristor_count(self) -> int:
        return sum(1 for _, _, e in self.elements if isinstance(e, Memristor))

    def capacitive_energy(self, node_voltages: np.ndarray) -> float:
        """Total stored energy 0.5*C*v^2 over all capacitors, joules."""
        v = np.asarray(node_voltages, dtype=float)
        total = 0.0
        for a, b, e in self.elements:
            if isinstance(e, Capacitor):
                total += 0.5 * e.capacitance * (v[a] - v[b]) ** 2
        return total


@dataclass(frozen=True)
class NetworkGenParams:
    lattice_dims: Tuple[int, int, int] = (4, 4, 1)
    p_metallic: float = 0.10
    p_memristive: float = 0.05
    p_capacitive: float = 0.15
    metallic_ohms: Tuple[float, float] = (1.0, 10.0)
    matrix_ohms: Tuple[float, float] = (1e4, 1e6)
    capacitor_farads: Tuple[float, float] = (1e-9, 1e-6)
    memristor_r_on: float = 100.0
    memristor_r_off: float = 16e3
    memristor_mobility: float = 1e-14
    memristor_length: float = 1e-8
    leak_factor: float = 10.0  # r_leak = leak_factor * r_off
    pin_count_in: int = 2
    pin_count_out: int = 2
    seed: int = 0

    def __post_init__(self):
        nx, ny, nz = self.lattice_dims
        if min(nx, ny, nz) < 1 or nx * ny * nz < 2:
            raise ValidationError(f"degenerate lattice {self.lattice_dims}")
        probs = (self.p_metallic, self.p_memristive, self.p_capacitive)
        if any(p < 0 for p in probs) or sum(probs) > 1.0 + 1e-12:
            raise ValidationError("element probabilities must be nonnegative and sum to <= 1")
        for lo, hi in (self.metallic_ohms, self.matrix_ohms, self.capacitor_farads):
            if not (0 < lo <= hi):
                raise ValidationError("distribution bounds must be positive and ordered")
        if self.pin_count_in < 1 or self.pin_count_out < 1:
            raise ValidationError("need at least one input and one output pin")


def _node_id(x: int, y: int, z: int, dims: Tuple[int, int, int]) -> int:
    nx, ny, _ = dims
    return x + nx * (y + ny * z)


def lattice_edges(dims: Tuple[int, int, int]) -> List[Tuple[int, int]]:
    """Nearest-neighbour edges of an nx*ny*nz lattice, in fixed order."""
    nx, ny, nz = dims
    edges = []
    for z in range(nz):
        for y in range(ny):
            for x in range(nx):
                a = _node_id(x, y, z, dims)
                if x + 1 < nx:
                    edges.append((a, _node_id(x + 1, y, z, dims)))
                if y + 1 < ny:
                    edges.append((a, _node_id(x, y + 1, z, dims)))
                if z + 1 < nz:
                    edges.append((a, _node_id(x, y, z + 1, dims)))
    return edges


def boundary_nodes(dims: Tuple[int, int, int]) -> List[int]:
    nx, ny, nz = dims
    out = []
    for z in range(nz):
        for y in range(ny):
            for x in range(nx):
                on_edge = (
                    x in (0, nx - 1) or y in (0, ny - 1) or (nz > 1 and z in (0, nz - 1))
                )
                if on_edge:
                    out.append(_node_id(x, y, z, dims))
    return out


def _log_uniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    if lo == hi:
        return lo
    return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))


def generate_network(params: NetworkGenParams) -> CircuitTopology:
    """Draw a random brick substrate; deterministic for a fixed seed."""
    dims = params.lattice_dims
    n = dims[0] * dims[1] * dims[2]
    rng = np.random.default_rng(params.seed)
    ground = 0

    elements: List[Tuple[int, int, Element]] = []
    p_met, p_mem, p_cap = params.p_metallic, params.p_memristive, params.p_capacitive
    for a, b in lattice_edges(dims):
        u = rng.random()
        if u < p_met:
            r = _log_uniform(rng, *params.metallic_ohms)
            elements.append((a, b, Resistor(1.0 / r)))
        elif u < p_met + p_mem:
            elements.append((a, b, Memristor(
                params.memristor_r_on, params.memristor_r_off,
                params.memristor_mobility, params.memristor_length)))
        elif u < p_met + p_mem + p_cap:
            c = _log_uniform(rng, *params.capacitor_farads)
            elements.append((a, b, Capacitor(c)))
        else:
            r = _log_uniform(rng, *params.matrix_ohms)
            elements.append((a, b, Resistor(1.0 / r)))

    # Leak to ground from every other node keeps the MNA matrix nonsingular.
    g_leak = 1.0 / (params.leak_factor * params.memristor_r_off)
    for node in range(n):
        if node != ground:
            elements.append((node, ground, Resistor(g_leak)))

    candidates = [v for v in boundary_nodes(dims) if v != ground]
    want = params.pin_count_in + params.pin_count_out
    if max(params.pin_count_in, params.pin_count_out) > len(candidates):
        raise ValidationError(
            f"cannot place pins on {len(candidates)} boundary nodes")
    if want <= len(candidates):
        picks = rng.choice(len(candidates), size=want, replace=False)
        pins_in = [candidates[i] for i in picks[: params.pin_count_in]]
        pins_out = [candidates[i] for i in picks[params.pin_count_in:]]
    else:
        # boundary too small for disjoint pin sets: share nodes between roles
        pi = rng.choice(len(candidates), size=params.pin_count_in, replace=False)
        po = rng.choice(len(candidates), size=params.pin_count_out, replace=False)
        pins_in = [candidates[i] for i in pi]
        pins_out = [candidates[i] for i in po]

    return CircuitTopology(
        node_count=n,
        ground=ground,
        elements=elements,
        input_pins=pins_in,
        output_pins=pins_out,
        seed=params.seed,
    )


# ---------------------------------------------------------------------------
# Netlist text format: header lines then one element per line.

def netlist_dumps(topo: CircuitTopology) -> str:
    lines = [
        f"nodes {topo.node_count}",
        f"ground {topo.ground}",
        f"seed {topo.seed}",
        "input " + " ".join(str(p) for p in topo.input_pins),
        "output " + " ".join(str(p) for p in topo.output_pins),
    ]
    for a, b, e in topo.elements:
        if isinstance(e, Resistor):
            lines.append(f"R {a} {b} {e.conductance!r}")
        elif isinstance(e, Capacitor):
            lines.append(f"C {a} {b} {e.capacitance!r}")
        else:
            lines.append(f"M {a} {b} {e.r_on!r} {e.r_off!r} {e.mobility!r} {e.length_scale!r}")
    return "\n".join(lines) + "\n"


def netlist_loads(text: str) -> CircuitTopology:
    node_count = ground = seed = None
    input_pins: List[int] = []
    output_pins: List[int] = []
    elements: List[Tuple[int, int, Element]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        key = tok[0]
        if key == "nodes":
            node_count = int(tok[1])
        elif key == "ground":
            ground = int(tok[1])
        elif key == "seed":
            seed = int(tok[1])
        elif key == "input":
            input_pins = [int(t) for t in tok[1:]]
        elif key == "output":
            output_pins = [int(t) for t in tok[1:]]
        elif key == "R":
            elements.append((int(tok[1]), int(tok[2]), Resistor(float(tok[3]))))
        elif key == "C":
            elements.append((int(tok[1]), int(tok[2]), Capacitor(float(tok[3]))))
        elif key == "M":
            elements.append((int(tok[1]), int(tok[2]), Memristor(
                float(tok[3]), float(tok[4]), float(tok[5]), float(tok[6]))))
        else:
            raise ValidationError(f"unknown netlist line: {line!r}")
    if node_count is None or ground is None:
        raise ValidationError("netlist missing nodes/ground header")
    return CircuitTopology(node_count, ground, elements, input_pins, output_pins,
                           seed if seed is not None else 0)


def save_netlist(topo: CircuitTopology, path) -> None:
    with open(path, "w") as fh:
        fh.write(netlist_dumps(topo))


def load_netlist(path) -> CircuitTopology:
    with open(path) as fh:
        return netlist_loads(fh.read())
