"""State harvesting: turn a brick simulation into a reservoir state matrix."""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..errors import ValidationError
from ..material.elements import SimConfig, Source
from ..material.network import CircuitTopology
from ..material.transient import simulate


@dataclass(frozen=True)
class ReservoirConfig:
    sampled_nodes: tuple       # node ids whose voltages form the state
    washout: float = 0.0       # seconds discarded at the start
    sample_period: float = 1e-3
    input_encoding: float = 1.0  # volts per unit task input

    def __post_init__(self):
        if len(self.sampled_nodes) == 0:
            raise ValidationError("sampled_nodes must be non-empty")
        if self.washout < 0 or self.sample_period <= 0:
            raise ValidationError("washout >= 0 and sample_period > 0 required")

    def validate_against(self, sim: SimConfig) -> None:
        if self.sample_period < sim.dt - 1e-15:
            raise ValidationError("sample_period must be >= simulation dt")
        if self.washout >= sim.duration:
            raise ValidationError("washout must leave a non-empty window")


@dataclass
class StateMatrix:
    times: np.ndarray    # (n,) seconds
    states: np.ndarray   # (n, len(node_ids)) volts
    node_ids: List[int]
    targets: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.states.ndim != 2 or self.states.shape[0] != len(self.times):
            raise ValidationError("states must be rectangular and align with times")
        if not np.all(np.isfinite(self.states)):
            raise ValidationError("states contain non-finite entries")


def harvest_states(topology: CircuitTopology, stimuli: Dict[int, Source],
                   sim_config: SimConfig,
                   res_config: ReservoirConfig) -> StateMatrix:
    """Simulate, drop the washout, downsample to sample_period."""
    res_config.validate_against(sim_config)
    trace = simulate(topology, stimuli, sim_config, record_all_nodes=True)
    stride = max(1, int(round(res_config.sample_period /
                              (sim_config.dt * sim_config.record_stride))))
    keep = trace.times >= res_config.washout - 1e-12
    times = trace.times[keep][::stride]
    if len(times) == 0:
        raise ValidationError("washout leaves no samples")
    cols = list(res_config.sampled_nodes)
    samples = trace.samples[keep][::stride][:, cols]
    return StateMatrix(times=times, states=samples, node_ids=cols)


def separation_score(topology: CircuitTopology,
                     stimulus_a: Dict[int, Source],
                     stimulus_b: Dict[int, Source],
                     sim_config: SimConfig,
                     res_config: ReservoirConfig) -> float:
    """Mean distance between the two state trajectories over the mean
    state norm; 0 iff the trajectories coincide."""
    sa = harvest_states(topology, stimulus_a, sim_config, res_config).states
    sb = harvest_states(topology, stimulus_b, sim_config, res_config).states
    dist = float(np.mean(np.linalg.norm(sa - sb, axis=1)))
    norm = float(np.mean((np.linalg.norm(sa, axis=1) +
                          np.linalg.norm(sb, axis=1)) / 2.0))
    if norm == 0.0:
        return 0.0
    return dist / norm


def states_to_csv(sm: StateMatrix) -> str:
    buf = io.StringIO()
    cols = ",".join(f"v{n}" for n in sm.node_ids)
    header = f"t,{cols}"
    if sm.targets is not None:
        header += ",target"
    buf.write(header + "\n")
    for i, t in enumerate(sm.times):
        row = ",".join(repr(float(x)) for x in sm.states[i])
        line = f"{t!r},{row}"
        if sm.targets is not None:
            line += f",{sm.targets[i]!r}"
        buf.write(line + "\n")
    return buf.getvalue()
