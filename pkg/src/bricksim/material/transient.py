"""Transient simulation of brick substrates.

Driven pins are treated as ideal voltage sources (Dirichlet nodes) and
eliminated from the nodal system; capacitors and memristors enter through
companion models.  With the trapezoidal scheme the very first step of a
run started without capacitor-current history falls back to backward
Euler, which keeps step-source starts second-order accurate overall.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from ..errors import ValidationError
from . import backend
from .elements import Capacitor, Memristor, Resistor, SimConfig, Source
from .network import CircuitTopology


@dataclass
class TraceRecord:
    """Time-sampled node voltages and memristor states."""

    times: np.ndarray            # (n,) seconds
    node_ids: List[int]
    samples: np.ndarray          # (n, len(node_ids)) volts
    memristor_states: np.ndarray  # (n, n_memristors) in [0, 1]

    def channel(self, node_id: int) -> np.ndarray:
        return self.samples[:, self.node_ids.index(node_id)]


class TransientStep(NamedTuple):
    node_voltages: np.ndarray
    memristor_states: np.ndarray
    cap_currents: np.ndarray


class _Plan:
    """Packed arrays for the integration kernels, fixed per (topology, pins, dt)."""

    def __init__(self, topo: CircuitTopology, driven_pins: Sequence[int],
                 dt: float, scheme: str):
        n = topo.node_count
        driven = list(dict.fromkeys(driven_pins))
        if topo.ground in driven:
            raise ValidationError("cannot drive the ground node")
        free = [i for i in range(n) if i != topo.ground and i not in set(driven)]
        ridx = np.full(n, -1, dtype=np.intp)
        ridx[free] = np.arange(len(free))
        didx = np.full(n, -1, dtype=np.intp)
        didx[driven] = np.arange(len(driven))
        nf, nd = len(free), len(driven)

        res, caps, mems = [], [], []
        for a, b, e in topo.elements:
            if isinstance(e, Resistor):
                res.append((a, b, e.conductance))
            elif isinstance(e, Capacitor):
                caps.append((a, b, e.capacitance))
            else:
                mems.append((a, b, e))

        def build(geq_per_cap):
            A = np.zeros((nf, nf))
            B = np.zeros((nf, nd))
            for a, b, g in res:
                self._stamp(A, B, ridx, didx, a, b, g)
            for (a, b, _), geq in zip(caps, geq_per_cap):
                self._stamp(A, B, ridx, didx, a, b, geq)
            return A, B

        cvals = np.array([c for _, _, c in caps]) if caps else np.zeros(0)
        self.trap = scheme == "trapezoidal"
        self.geq_main = (2.0 if self.trap else 1.0) * cvals / dt
        self.geq_start = cvals / dt  # backward-Euler startup
        self.A0m, self.B0m = build(self.geq_main)
        if self.trap:
            self.A0s, self.B0s = build(self.geq_start)
        else:
            self.A0s, self.B0s = self.A0m, self.B0m

        self.cap_a = np.array([a for a, _, _ in caps], dtype=np.intp)
        self.cap_b = np.array([b for _, b, _ in caps], dtype=np.intp)
        self.cap_ra = ridx[self.cap_a] if caps else np.zeros(0, dtype=np.intp)
        self.cap_rb = ridx[self.cap_b] if caps else np.zeros(0, dtype=np.intp)
        self.mem_a = np.array([a for a, _, _ in mems], dtype=np.intp)
        self.mem_b = np.array([b for _, b, _ in mems], dtype=np.intp)
        self.mem_ra = ridx[self.mem_a] if mems else np.zeros(0, dtype=np.intp)
        self.mem_rb = ridx[self.mem_b] if mems else np.zeros(0, dtype=np.intp)
        self.mem_da = didx[self.mem_a] if mems else np.zeros(0, dtype=np.intp)
        self.mem_db = didx[self.mem_b] if mems else np.zeros(0, dtype=np.intp)
        self.mem_ron = np.array([e.r_on for _, _, e in mems])
        self.mem_roff = np.array([e.r_off for _, _, e in mems])
        self.mem_rate = np.array([e.state_rate for _, _, e in mems])
        self.free = np.array(free, dtype=np.intp)
        self.driven = np.array(driven, dtype=np.intp)
        self.n_caps = len(caps)
        self.n_mems = len(mems)

    @staticmethod
    def _stamp(A, B, ridx, didx, a, b, g):
        ra, rb = ridx[a], ridx[b]
        da, db = didx[a], didx[b]
        if ra >= 0:
            A[ra, ra] += g
            if rb >= 0:
                A[ra, rb] -= g
            elif db >= 0:
                B[ra, db] -= g
        if rb >= 0:
            A[rb, rb] += g
            if ra >= 0:
                A[rb, ra] -= g
            elif da >= 0:
                B[rb, da] -= g

    def run(self, kernel, dvals, v0, w0, ic0, dt, record_stride, record_nodes,
            startup):
        return kernel.run_transient(
            self.A0m, self.B0m, self.A0s, self.B0s,
            self.cap_a, self.cap_b, self.cap_ra, self.cap_rb,
            self.geq_main, self.geq_start,
            self.mem_a, self.mem_b, self.mem_ra, self.mem_rb,
            self.mem_da, self.mem_db,
            self.mem_ron, self.mem_roff, self.mem_rate,
            self.free, self.driven, dvals,
            v0, w0, ic0,
            dt, record_stride, np.asarray(record_nodes, dtype=np.intp),
            int(self.trap), int(startup),
        )


def _initial_state(topo, node_voltages, memristor_states, plan):
    v0 = (np.zeros(topo.node_count) if node_voltages is None
          else np.asarray(node_voltages, dtype=float))
    if v0.shape != (topo.node_count,):
        raise ValidationError(
            f"node_voltages must have length {topo.node_count}, got {v0.shape}")
    w0 = (np.full(plan.n_mems, 0.5) if memristor_states is None
          else np.asarray(memristor_states, dtype=float))
    if w0.shape != (plan.n_mems,):
        raise ValidationError(
            f"memristor_states must have length {plan.n_mems}, got {w0.shape}")
    if plan.n_mems and (w0.min() < 0.0 or w0.max() > 1.0):
        raise ValidationError("memristor states must lie in [0, 1]")
    return v0, w0


def step_transient(
    topology: CircuitTopology,
    node_voltages: Optional[np.ndarray],
    memristor_states: Optional[np.ndarray],
    sources: Dict[int, float],
    dt: float,
    scheme: str = "trapezoidal",
    cap_currents: Optional[np.ndarray] = None,
) -> TransientStep:
    """Advance one step; returns updated voltages, memristor states and
    capacitor currents (pass the latter back in to continue trapezoidal
    integration)."""
    for pin in sources:
        if pin not in topology.input_pins and pin not in topology.output_pins:
            raise ValidationError(f"source pin {pin} is not a declared pin")
    pins = sorted(sources)
    plan = _Plan(topology, pins, dt, scheme)
    v0, w0 = _initial_state(topology, node_voltages, memristor_states, plan)
    startup = cap_currents is None and plan.trap
    ic0 = (np.zeros(plan.n_caps) if cap_currents is None
           else np.asarray(cap_currents, dtype=float))
    dvals = np.array([[float(sources[p]) for p in pins]])
    kernel = backend.get_kernel()
    _, _, v, w, ic = plan.run(kernel, dvals, v0, w0, ic0, dt, 1,
                              np.zeros(0, dtype=np.intp), startup)
    return TransientStep(v, w, ic)


def simulate(
    topology: CircuitTopology,
    stimuli: Dict[int, Source],
    config: SimConfig,
    record_all_nodes: bool = False,
    initial_voltages: Optional[np.ndarray] = None,
    initial_memristor_states: Optional[np.ndarray] = None,
    backend_name: Optional[str] = None,
) -> TraceRecord:
    """Integrate the network response to the given pin stimuli.

    Records output-pin voltages (or every node) each record_stride steps.
    Deterministic: same inputs give the identical trace.
    """
    for pin in stimuli:
        if pin not in topology.input_pins:
            raise ValidationError(f"stimulus pin {pin} is not an input pin")
    pins = sorted(stimuli)
    plan = _Plan(topology, pins, config.dt, config.scheme)
    v0, w0 = _initial_state(topology, initial_voltages,
                            initial_memristor_states, plan)
    n_steps = config.n_steps
    t = config.dt * np.arange(1, n_steps + 1)
    if pins:
        dvals = np.column_stack([np.asarray(stimuli[p].sample(t), dtype=float)
                                 for p in pins])
    else:
        dvals = np.zeros((n_steps, 0))

    if record_all_nodes:
        record_nodes = list(range(topology.node_count))
    else:
        record_nodes = list(topology.output_pins)
    kernel = backend.get_kernel(backend_name)
    rec_v, rec_w, _, _, _ = plan.run(
        kernel, dvals, v0, w0, np.zeros(plan.n_caps), config.dt,
        config.record_stride, record_nodes, startup=plan.trap)
    times = config.dt * config.record_stride * np.arange(
        1, n_steps // config.record_stride + 1)
    return TraceRecord(times=times, node_ids=record_nodes,
                       samples=rec_v, memristor_states=rec_w)


# ---------------------------------------------------------------------------
# CSV export: header row "t,<node ids...>"

def trace_to_csv(trace: TraceRecord) -> str:
    buf = io.StringIO()
    buf.write("t," + ",".join(f"v{n}" for n in trace.node_ids) + "\n")
    for i, t in enumerate(trace.times):
        row = ",".join(repr(float(x)) for x in trace.samples[i])
        buf.write(f"{t!r},{row}\n")
    return buf.getvalue()


def trace_from_csv(text: str) -> TraceRecord:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split(",")
    node_ids = [int(h[1:]) for h in header[1:]]
    data = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]])
    return TraceRecord(times=data[:, 0], node_ids=node_ids,
                       samples=data[:, 1:],
                       memristor_states=np.zeros((len(data), 0)))


def save_trace(trace: TraceRecord, path) -> None:
    with open(path, "w") as fh:
        fh.write(trace_to_csv(trace))
