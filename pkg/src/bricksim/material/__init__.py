"""Doped-concrete brick substrates: random R/C/memristor networks and
their transient simulation."""

from .elements import (
    Capacitor,
    Memristor,
    PiecewiseConstantSource,
    Resistor,
    SimConfig,
    Waveform,
    waveform_sample,
)
from .network import (
    CircuitTopology,
    NetworkGenParams,
    generate_network,
    load_netlist,
    netlist_dumps,
    netlist_loads,
    save_netlist,
)
from .portrait import delay_embed, portrait_coverage
from .transient import (
    TraceRecord,
    save_trace,
    simulate,
    step_transient,
    trace_from_csv,
    trace_to_csv,
)
from .backend import backend_name

__all__ = [
    "Capacitor", "Memristor", "PiecewiseConstantSource", "Resistor",
    "SimConfig", "Waveform", "waveform_sample",
    "CircuitTopology", "NetworkGenParams", "generate_network",
    "load_netlist", "netlist_dumps", "netlist_loads", "save_netlist",
    "delay_embed", "portrait_coverage",
    "TraceRecord", "save_trace", "simulate", "step_transient",
    "trace_from_csv", "trace_to_csv", "backend_name",
]
