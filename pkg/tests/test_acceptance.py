"""End-to-end acceptance checks.

Each test prints exactly one pass/fail line; run with `pytest -s` to see
them.  Tolerances and runtime budgets are pinned in the assertions.
"""
import hashlib
import time
from pathlib import Path

import numpy as np

from bricksim.cli import main as cli_main
from bricksim.comm import (
    FaultScenario,
    component_diameter,
    connectivity_oracle,
    flood_route,
    gossip_aggregate,
)
from bricksim.material.elements import (
    Capacitor,
    Memristor,
    PiecewiseConstantSource,
    Resistor,
    SimConfig,
    Waveform,
)
from bricksim.material.network import (
    CircuitTopology,
    NetworkGenParams,
    generate_network,
)
from bricksim.material.portrait import delay_embed, portrait_coverage
from bricksim.material.transient import simulate
from bricksim.reservoir.harvest import ReservoirConfig
from bricksim.reservoir.readout import (
    predict,
    ridge_objective,
    train_gd,
    train_ridge,
)
from bricksim.reservoir.tasks import (
    memory_capacity,
    waveform_classification_task,
)
from bricksim.wall import (
    bfs_distances,
    broadcast_time,
    build_brick_wall,
    first_excitation_steps,
    morph_op,
    voronoi_bfs_oracle,
    voronoi_wavefront,
)


def _report(num: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"\n[criterion {num:02d}] {name}: {status}"
          + (f" ({detail})" if detail else ""))
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def test_criterion_01_rc_step_response():
    t0 = time.perf_counter()
    r, c = 1e3, 1e-6
    rc = r * c
    topo = CircuitTopology(
        node_count=3, ground=2,
        elements=[(0, 1, Resistor(1.0 / r)), (1, 2, Capacitor(c))],
        input_pins=[0], output_pins=[1], seed=0)
    dt = rc / 100.0
    sim = SimConfig(dt=dt, duration=5 * rc, scheme="trapezoidal")
    # 1 Hz square wave holds +1 V throughout the 5 ms window: a step input
    trace = simulate(topo, {0: Waveform("square", 1.0, 1.0)}, sim)
    exact = 1.0 - np.exp(-trace.times / rc)
    # relative to the response scale; the t=dt sample sits right after the
    # input discontinuity where a pointwise ratio is not meaningful
    rel = float(np.max(np.abs(trace.channel(1) - exact)) / exact.max())
    elapsed = time.perf_counter() - t0
    _report(1, "series-RC step response", rel < 1e-3 and elapsed < 1.0,
            f"max rel err {rel:.2e}, {elapsed:.2f}s")


def test_criterion_02_pinched_hysteresis():
    t0 = time.perf_counter()
    amp, r_on = 5.0, 100.0
    mem = Memristor(r_on=r_on, r_off=16e3, mobility=1e-13, length_scale=1e-8)
    topo = CircuitTopology(node_count=2, ground=1, elements=[(0, 1, mem)],
                           input_pins=[0], output_pins=[0], seed=0)
    # dt divides the 0.1 s period, so samples land on the zero crossings
    sim = SimConfig(dt=1e-3, duration=0.3, scheme="trapezoidal")
    trace = simulate(topo, {0: Waveform("sine", 10.0, amp)}, sim)
    v = np.asarray(Waveform("sine", 10.0, amp).sample(trace.times))
    w = trace.memristor_states[:, 0]
    i = v / (r_on * w + 16e3 * (1.0 - w))
    near_zero = np.abs(v) < 1e-6 * amp
    pinch_ok = bool(np.all(np.abs(i[near_zero]) < 1e-6 * amp / r_on))
    elapsed = time.perf_counter() - t0
    _report(2, "pinched hysteresis",
            near_zero.sum() >= 3 and pinch_ok and elapsed < 1.0,
            f"{int(near_zero.sum())} zero crossings, {elapsed:.2f}s")


def test_criterion_03_passivity_energy_decay():
    t0 = time.perf_counter()
    worst = 0.0
    for seed in range(20):
        params = NetworkGenParams(lattice_dims=(6, 6, 1), p_metallic=0.10,
                                  p_memristive=0.10, p_capacitive=0.40,
                                  seed=seed)
        topo = generate_network(params)
        sim = SimConfig(dt=1e-4, duration=0.2)
        src = PiecewiseConstantSource((5.0, 0.0), hold=0.1)
        trace = simulate(topo, {topo.input_pins[0]: src}, sim,
                         record_all_nodes=True)
        after = trace.times > 0.1 + sim.dt / 2
        energies = np.array([topo.capacitive_energy(s)
                             for s in trace.samples[after]])
        if len(energies) > 1 and energies.max() > 0:
            rises = np.diff(energies) / energies.max()
            worst = max(worst, float(rises.max(initial=0.0)))
    elapsed = time.perf_counter() - t0
    _report(3, "capacitive energy decay after source off",
            worst <= 1e-9 and elapsed < 30.0,
            f"worst relative rise {worst:.2e} over 20 seeds, {elapsed:.1f}s")


def test_criterion_04_attractor_coverage_ordering():
    t0 = time.perf_counter()
    wins = 0
    for seed in range(10):
        params = NetworkGenParams(lattice_dims=(6, 6, 1), p_metallic=0.10,
                                  p_memristive=0.25, p_capacitive=0.35,
                                  seed=seed)
        topo = generate_network(params)
        sim = SimConfig(dt=2e-5, duration=0.25)
        primary = Waveform("square", 100.0, 5.0)
        secondary = Waveform("sine", 101.0, 5.0)
        p0, p1 = topo.input_pins[0], topo.input_pins[-1]
        dual = simulate(topo, {p0: primary, p1: secondary}, sim)
        single = simulate(topo, {p0: primary}, sim)
        ch = topo.output_pins[0]
        cov_dual = portrait_coverage(delay_embed(dual, ch, 25), 64)
        cov_single = portrait_coverage(delay_embed(single, ch, 25), 64)
        wins += int(cov_dual > cov_single)
    elapsed = time.perf_counter() - t0
    _report(4, "dual-stimulus portraits cover more cells",
            wins >= 9 and elapsed < 120.0, f"{wins}/10 wins, {elapsed:.1f}s")


def test_criterion_05_ridge_and_gd():
    t0 = time.perf_counter()
    rng = np.random.default_rng(0)
    max_rel_grad, max_obj_gap = 0.0, 0.0
    for _ in range(20):
        X = rng.normal(size=(40, 6))
        y = rng.normal(size=40)
        lam = 0.1
        w = train_ridge(X, y, lam)
        # central finite differences of the ridge objective at the optimum
        theta = np.append(w.weights, w.bias)
        grad = np.empty_like(theta)
        eps = 1e-6
        for j in range(len(theta)):
            tp, tm = theta.copy(), theta.copy()
            tp[j] += eps
            tm[j] -= eps
            grad[j] = (ridge_objective(X, y, tp[:-1], tp[-1], lam)
                       - ridge_objective(X, y, tm[:-1], tm[-1], lam)) / (2 * eps)
        max_rel_grad = max(max_rel_grad,
                           float(np.linalg.norm(grad) / np.linalg.norm(y)))
        obj_star = ridge_objective(X, y, w.weights, w.bias, lam)
        g = train_gd(X, y, lam, learning_rate=0.01, epochs=4000, seed=1)
        obj_gd = ridge_objective(X, y, g.weights, g.bias, lam)
        max_obj_gap = max(max_obj_gap, float(obj_gd / obj_star - 1.0))
    elapsed = time.perf_counter() - t0
    _report(5, "ridge gradient oracle and GD agreement",
            max_rel_grad < 1e-6 and max_obj_gap < 0.01 and elapsed < 10.0,
            f"grad {max_rel_grad:.1e}, gd gap {max_obj_gap:.2e}, {elapsed:.1f}s")


def _classification_setup(seed=0):
    params = NetworkGenParams(lattice_dims=(6, 6, 1), p_metallic=0.05,
                              p_memristive=0.45, p_capacitive=0.30,
                              memristor_mobility=1e-13, seed=seed)
    topo = generate_network(params)
    sim = SimConfig(dt=1e-4, duration=1.1)
    res = ReservoirConfig(sampled_nodes=tuple(range(topo.node_count)),
                          washout=0.1, sample_period=1e-3,
                          input_encoding=6.0)
    return topo, sim, res


def test_criterion_06_waveform_classification():
    t0 = time.perf_counter()
    topo, sim, res = _classification_setup(seed=0)
    result = waveform_classification_task(topo, sim, res, n_episodes=30,
                                          seed=0)
    control = waveform_classification_task(topo, sim, res, n_episodes=30,
                                           seed=0, shuffle_labels=True,
                                           features=result.features)
    elapsed = time.perf_counter() - t0
    control_ok = abs(control.accuracy - 1.0 / 3.0) <= 0.15
    _report(6, "waveform classification",
            result.accuracy >= 0.8 and control_ok and elapsed < 120.0,
            f"accuracy {result.accuracy:.3f}, shuffled "
            f"{control.accuracy:.3f}, {elapsed:.1f}s")


def test_criterion_07_memoryless_control():
    t0 = time.perf_counter()
    params = NetworkGenParams(lattice_dims=(6, 6, 1), p_metallic=0.10,
                              p_memristive=0.0, p_capacitive=0.0, seed=0)
    topo = generate_network(params)
    sim = SimConfig(dt=1e-4, duration=0.5)
    res = ReservoirConfig(sampled_nodes=tuple(range(topo.node_count)),
                          washout=0.05, sample_period=1e-3)
    mc = memory_capacity(topo, sim, res, max_delay=5, seed=0)
    worst = max(mc.per_delay[1:])
    elapsed = time.perf_counter() - t0
    _report(7, "resistive-only network has no memory",
            worst < 0.1 and elapsed < 60.0,
            f"max r^2 at delay>=1 is {worst:.3f}, {elapsed:.1f}s")


def test_criterion_08_ca_wavefront_equals_bfs():
    t0 = time.perf_counter()
    ok = True
    for rows, cols, sources in ((5, 5, [0]), (17, 23, [40]),
                                (30, 30, [435]), (30, 30, [0, 899])):
        g = build_brick_wall(rows, cols)
        ok = ok and np.array_equal(first_excitation_steps(g, sources),
                                   bfs_distances(g, sources))
        ok = ok and broadcast_time(g, sources[0]) == int(
            bfs_distances(g, [sources[0]]).max())
    elapsed = time.perf_counter() - t0
    _report(8, "excitation wavefront equals BFS distance",
            ok and elapsed < 10.0, f"{elapsed:.1f}s")


def test_criterion_09_voronoi_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(0)
    ok = True
    for _ in range(100):
        rows = int(rng.integers(2, 26))
        cols = int(rng.integers(2, 26))
        g = build_brick_wall(rows, cols)
        n_seeds = int(rng.integers(1, min(9, g.cell_count + 1)))
        seeds = rng.choice(g.cell_count, size=n_seeds, replace=False).tolist()
        ok = ok and np.array_equal(voronoi_wavefront(g, seeds),
                                   voronoi_bfs_oracle(g, seeds))
    elapsed = time.perf_counter() - t0
    _report(9, "Voronoi wavefront matches BFS oracle",
            ok and elapsed < 30.0, f"100 instances, {elapsed:.1f}s")


def test_criterion_10_morphology_properties():
    t0 = time.perf_counter()
    rng = np.random.default_rng(0)
    ok = True
    for _ in range(100):
        rows = int(rng.integers(2, 20))
        cols = int(rng.integers(2, 20))
        g = build_brick_wall(rows, cols)
        img = rng.random(g.cell_count) < rng.uniform(0.2, 0.8)
        ok = ok and np.array_equal(morph_op(g, img, "erode"),
                                   ~morph_op(g, ~img, "dilate"))
        bigger = img | (rng.random(g.cell_count) < 0.3)
        ok = ok and not np.any(morph_op(g, img, "dilate")
                               & ~morph_op(g, bigger, "dilate"))
    elapsed = time.perf_counter() - t0
    _report(10, "erosion/dilation duality and monotonicity",
            ok and elapsed < 10.0, f"100 images, {elapsed:.1f}s")


def test_criterion_11_routing_equivalence():
    t0 = time.perf_counter()
    g = build_brick_wall(20, 30)
    rng = np.random.default_rng(0)
    ttl = g.cell_count
    ok = True
    for k in range(200):
        n_faults = int(rng.integers(0, 120))
        cells = rng.permutation(g.cell_count)
        src, dst = int(cells[-1]), int(cells[-2])
        faults = FaultScenario(
            failed=frozenset(int(c) for c in cells[:n_faults]))
        res = flood_route(g, faults, src, dst, ttl)
        reach = connectivity_oracle(g, faults, src)
        ok = ok and res.delivered == (dst in reach)
        if res.delivered:
            dist = bfs_distances(g, [src], blocked=faults.failed)
            ok = ok and res.hops == int(dist[dst])
        if k % 50 == 0:
            comp = reach
            diam = component_diameter(g, faults, comp)
            vals = np.asarray(rng.random(g.cell_count))
            gs = gossip_aggregate(g, faults, vals, "min", rounds=diam)
            idx = sorted(comp)
            ok = ok and bool(np.allclose(gs.values[idx], vals[idx].min()))
    elapsed = time.perf_counter() - t0
    _report(11, "flood routing matches BFS, gossip converges",
            ok and elapsed < 60.0, f"200 scenarios, {elapsed:.1f}s")


def test_criterion_12_cli_determinism(tmp_path):
    t0 = time.perf_counter()

    def digest(root: Path) -> dict:
        return {str(p.relative_to(root)):
                hashlib.sha256(p.read_bytes()).hexdigest()
                for p in sorted(root.rglob("*")) if p.is_file()}

    runs = {
        "attractor": ["attractor", "--seed", "1", "--duration", "0.05"],
        "reservoir": ["reservoir", "--seed", "1", "--task", "memory",
                      "--duration", "0.4", "--washout", "0.05",
                      "--max-delay", "3"],
        "wall": ["wall", "--seed", "1", "--steps", "6"],
        "route": ["route", "--seed", "1", "--rows", "8", "--cols", "8",
                  "--max-faults", "20", "--fault-step", "10",
                  "--per-count", "3"],
    }
    ok = True
    for name, argv in runs.items():
        argv = argv + ["--out", str(tmp_path)]
        ok = ok and cli_main(argv) == 0
        first = digest(tmp_path / f"{name}-1")
        ok = ok and cli_main(argv + ["--force"]) == 0
        ok = ok and digest(tmp_path / f"{name}-1") == first
    elapsed = time.perf_counter() - t0
    _report(12, "CLI runs are byte-identical under a fixed config",
            ok, f"4 subcommands, {elapsed:.1f}s")
