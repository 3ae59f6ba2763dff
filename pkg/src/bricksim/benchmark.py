"""Compare the compiled transient kernel against the pure-Python fallback.

Run with:  python -m bricksim.benchmark [--steps N] [--lattice NX,NY,NZ]

Both backends share one argument layout, so the same workload runs on
each; the script reports wall time, speedup, and the maximum absolute
difference between the recorded traces (expected at round-off level;
the two linear solvers may order operations differently).
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from .material import backend
from .material.elements import SimConfig, Waveform
from .material.network import NetworkGenParams, generate_network
from .material.transient import simulate


def run_benchmark(lattice=(8, 8, 1), steps=20000, seed=0) -> dict:
    params = NetworkGenParams(lattice_dims=lattice, p_metallic=0.10,
                              p_memristive=0.25, p_capacitive=0.35, seed=seed)
    topo = generate_network(params)
    dt = 2e-5
    sim = SimConfig(dt=dt, duration=steps * dt)
    stimuli = {topo.input_pins[0]: Waveform("square", 100.0, 5.0),
               topo.input_pins[-1]: Waveform("sine", 101.0, 5.0)}

    results = {}
    for name in ("compiled", "pure-python"):
        try:
            backend.get_kernel(name)
        except Exception:
            results[name] = None
            continue
        t0 = time.perf_counter()
        trace = simulate(topo, stimuli, sim, backend_name=name)
        results[name] = (time.perf_counter() - t0, trace)
    return {"topology": topo, "steps": steps, "results": results}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Benchmark compiled vs pure-Python transient kernels.")
    parser.add_argument("--steps", type=int, default=20000)
    parser.add_argument("--lattice", default="8,8,1")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    lattice = tuple(int(tok) for tok in args.lattice.split(","))

    out = run_benchmark(lattice=lattice, steps=args.steps, seed=args.seed)
    topo = out["topology"]
    print(f"workload: {topo.node_count} nodes, {len(topo.elements)} elements, "
          f"{out['steps']} steps")
    results = out["results"]
    traces = {}
    for name in ("compiled", "pure-python"):
        entry = results.get(name)
        if entry is None:
            print(f"{name:12s}  unavailable")
            continue
        elapsed, trace = entry
        traces[name] = trace
        rate = out["steps"] / elapsed
        print(f"{name:12s}  {elapsed:8.3f} s   {rate:12.0f} steps/s")
    if len(traces) == 2:
        diff = float(np.max(np.abs(traces["compiled"].samples -
                                   traces["pure-python"].samples)))
        speedup = results["pure-python"][0] / results["compiled"][0]
        print(f"speedup: {speedup:.1f}x   max |trace diff|: {diff:.3e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
