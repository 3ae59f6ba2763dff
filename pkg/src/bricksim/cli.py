"""Command-line front end: reproducible experiment runs.

Each subcommand resolves its configuration (built-in defaults, then an
optional key=value config file, then command-line flags, flags winning),
creates one output directory named <subcommand>-<seed>, writes a
fully-resolved config echo next to the outputs, and prints a single
machine-readable summary line.  Exit status is 0 only when every
internal consistency check passed.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Dict, List, Tuple

import numpy as np

from . import comm
from .errors import ValidationError
from .material.elements import SimConfig, Waveform
from .material.network import NetworkGenParams, generate_network, save_netlist
from .material.portrait import delay_embed, portrait_coverage
from .material.transient import save_trace, simulate
from .reservoir.harvest import ReservoirConfig, harvest_states
from .reservoir.readout import predict, nrmse, train_ridge
from .reservoir.tasks import (
    WAVEFORM_CLASSES,
    memory_capacity,
    waveform_classification_task,
)
from .wall import (
    RuleSpec,
    bfs_distances,
    build_brick_wall,
    first_excitation_steps,
    labels_to_text,
    make_state,
    morph_op,
    render_frame,
    run as run_automaton,
    state_to_text,
    step_sync,
    voronoi_bfs_oracle,
    voronoi_wavefront,
    write_ppm,
)

Check = Tuple[str, bool]


# ---------------------------------------------------------------------------
# config plumbing

def _parse_value(text: str, like):
    text = text.strip()
    if isinstance(like, bool):
        if text.lower() in ("1", "true", "yes", "on"):
            return True
        if text.lower() in ("0", "false", "no", "off"):
            return False
        raise ValidationError(f"expected a boolean, got {text!r}")
    if isinstance(like, int):
        return int(text)
    if isinstance(like, float):
        return float(text)
    if isinstance(like, tuple):
        return tuple(int(tok) for tok in text.split(","))
    return text


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _read_config_file(path: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("["):
            continue
        if "=" not in line:
            raise ValidationError(f"config line is not key=value: {line!r}")
        key, _, val = line.partition("=")
        out[key.strip()] = val.strip()
    return out


def _resolve_config(defaults: Dict[str, object], args) -> Dict[str, object]:
    cfg = dict(defaults)
    cfg["seed"] = 0
    if getattr(args, "preset", None) == "paper-wall":
        cfg["rows"], cfg["cols"] = 20, 30
    if args.config:
        for key, text in _read_config_file(args.config).items():
            if key not in cfg:
                raise ValidationError(f"unknown config key {key!r}")
            cfg[key] = _parse_value(text, cfg[key])
    for key in cfg:
        flag = getattr(args, f"cfg_{key}", None)
        if flag is not None:
            cfg[key] = _parse_value(flag, cfg[key])
    if args.seed is not None:
        cfg["seed"] = int(args.seed)
    return cfg


def _prepare_outdir(args, name: str, seed: int) -> Path:
    outdir = Path(args.out) / f"{name}-{seed}"
    if outdir.exists():
        if not args.force:
            raise ValidationError(
                f"output directory {outdir} exists; pass --force to overwrite")
        for p in sorted(outdir.rglob("*"), reverse=True):
            p.unlink() if p.is_file() else p.rmdir()
    outdir.mkdir(parents=True, exist_ok=True)
    return outdir


def _write_config_echo(outdir: Path, cfg: Dict[str, object]) -> None:
    lines = [f"{k}={_format_value(cfg[k])}" for k in sorted(cfg)]
    (outdir / "config.txt").write_text("\n".join(lines) + "\n")


def _finish(outdir: Path, summary: Dict[str, object],
            checks: List[Check]) -> int:
    ok = all(passed for _, passed in checks)
    summary["oracle_match"] = "true" if ok else "false"
    line = " ".join(f"{k}={_format_value(v)}" for k, v in summary.items())
    (outdir / "summary.txt").write_text(line + "\n")
    print(line)
    if not ok:
        failed = ", ".join(name for name, passed in checks if not passed)
        print(f"error: consistency check failed: {failed}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# attractor

ATTRACTOR_DEFAULTS: Dict[str, object] = {
    "lattice": (6, 6, 1),
    "p_metallic": 0.10,
    "p_memristive": 0.25,
    "p_capacitive": 0.35,
    "amplitude": 5.0,
    "primary_hz": 100.0,
    "secondary_hz": 101.0,
    "secondary": "sine",
    "dt": 2e-5,
    "duration": 0.25,
    "lag": 25,
    "grid": 64,
}


def _portrait_points_csv(points: np.ndarray, path: Path) -> None:
    with open(path, "w") as fh:
        fh.write("x,y\n")
        for x, y in points:
            fh.write(f"{float(x)!r},{float(y)!r}\n")


def _portrait_image(points: np.ndarray, res: int, scale: int = 4) -> np.ndarray:
    lo = points.min(axis=0)
    span = points.max(axis=0) - lo
    cells = np.zeros((points.shape[0], 2), dtype=int)
    for d in range(2):
        if span[d] > 0:
            idx = np.floor((points[:, d] - lo[d]) / span[d] * res)
            cells[:, d] = np.clip(idx, 0, res - 1).astype(int)
    grid = np.zeros((res, res), dtype=bool)
    grid[res - 1 - cells[:, 1], cells[:, 0]] = True  # y up
    img = np.full((res, res, 3), 255, dtype=np.uint8)
    img[grid] = (30, 30, 30)
    return np.repeat(np.repeat(img, scale, axis=0), scale, axis=1)


def cmd_attractor(cfg: Dict[str, object], outdir: Path,
                  checks: List[Check]) -> Dict[str, object]:
    params = NetworkGenParams(
        lattice_dims=cfg["lattice"], p_metallic=cfg["p_metallic"],
        p_memristive=cfg["p_memristive"], p_capacitive=cfg["p_capacitive"],
        seed=cfg["seed"])
    topo = generate_network(params)
    save_netlist(topo, outdir / "network.txt")
    sim = SimConfig(dt=cfg["dt"], duration=cfg["duration"])
    amp = cfg["amplitude"]
    primary = Waveform("square", cfg["primary_hz"], amp)
    secondary = Waveform(cfg["secondary"], cfg["secondary_hz"], amp)
    p_in, p_in2 = topo.input_pins[0], topo.input_pins[-1]
    dual = simulate(topo, {p_in: primary, p_in2: secondary}, sim)
    single = simulate(topo, {p_in: primary}, sim)
    save_trace(dual, outdir / "trace.csv")
    channel = topo.output_pins[0]
    pts_dual = delay_embed(dual, channel, cfg["lag"])
    pts_single = delay_embed(single, channel, cfg["lag"])
    cov_dual = portrait_coverage(pts_dual, cfg["grid"])
    cov_single = portrait_coverage(pts_single, cfg["grid"])
    _portrait_points_csv(pts_dual, outdir / "portrait.csv")
    write_ppm(_portrait_image(pts_dual, cfg["grid"]), outdir / "portrait.ppm")
    checks.append(("dual_coverage_exceeds_single", cov_dual > cov_single))
    return {"cmd": "attractor", "seed": cfg["seed"],
            "coverage_dual": cov_dual, "coverage_single": cov_single}


# ---------------------------------------------------------------------------
# reservoir

RESERVOIR_DEFAULTS: Dict[str, object] = {
    "task": "classify",           # classify | memory
    "lattice": (6, 6, 1),
    "p_metallic": 0.05,
    "p_memristive": 0.45,
    "p_capacitive": 0.30,
    "mobility": 1e-13,
    "amplitude": 6.0,
    "dt": 1e-4,
    "duration": 1.1,
    "washout": 0.1,
    "sample_period": 1e-3,
    "episodes": 30,
    "max_delay": 5,
    "lam": 1e-6,
    "lam_sweep": "",              # comma-separated lambda list, optional
}


def _default_reservoir_pieces(cfg):
    params = NetworkGenParams(
        lattice_dims=cfg["lattice"], p_metallic=cfg["p_metallic"],
        p_memristive=cfg["p_memristive"], p_capacitive=cfg["p_capacitive"],
        memristor_mobility=cfg["mobility"], seed=cfg["seed"])
    topo = generate_network(params)
    sim = SimConfig(dt=cfg["dt"], duration=cfg["duration"])
    res = ReservoirConfig(sampled_nodes=tuple(range(topo.node_count)),
                          washout=cfg["washout"],
                          sample_period=cfg["sample_period"],
                          input_encoding=cfg["amplitude"])
    return topo, sim, res


def cmd_reservoir(cfg: Dict[str, object], outdir: Path,
                  checks: List[Check]) -> Dict[str, object]:
    topo, sim, res = _default_reservoir_pieces(cfg)
    save_netlist(topo, outdir / "network.txt")
    summary: Dict[str, object] = {"cmd": "reservoir", "task": cfg["task"],
                                  "seed": cfg["seed"]}
    if cfg["task"] == "classify":
        result = waveform_classification_task(
            topo, sim, res, n_episodes=cfg["episodes"], seed=cfg["seed"],
            lam=cfg["lam"])
        with open(outdir / "states.csv", "w") as fh:
            dim = result.features.shape[1]
            fh.write(",".join(f"f{i}" for i in range(dim)) + ",label\n")
            for feat, lab in zip(result.features, result.labels):
                fh.write(",".join(repr(float(x)) for x in feat) +
                         f",{int(lab)}\n")
        with open(outdir / "weights.csv", "w") as fh:
            fh.write("class,bias,weights...\n")
            for c, w in enumerate(result.readouts):
                fh.write(f"{c},{float(w.bias)!r}," +
                         ",".join(repr(float(x)) for x in w.weights) + "\n")
        summary["accuracy"] = result.accuracy
        summary["train_accuracy"] = result.train_accuracy
        checks.append(("accuracy_in_unit_interval",
                       0.0 <= result.accuracy <= 1.0))
        if cfg["lam_sweep"]:
            lams = [float(tok) for tok in str(cfg["lam_sweep"]).split(",")]
            tr = result.dataset.train_indices
            targets = np.where(result.labels[tr] == 0, 1.0, -1.0)
            norms, rows = [], []
            for lam in lams:
                w = train_ridge(result.features[tr], targets, lam)
                norms.append(float(np.linalg.norm(w.weights)))
                rows.append((lam, norms[-1],
                             nrmse(predict(w, result.features[tr]), targets)))
            with open(outdir / "lam_sweep.csv", "w") as fh:
                fh.write("lambda,weight_norm,train_nrmse\n")
                for lam, nn, err in rows:
                    fh.write(f"{lam!r},{nn!r},{err!r}\n")
            mono = all(b <= a + 1e-12 for a, b in
                       zip(norms, norms[1:])) if sorted(lams) == lams else True
            checks.append(("weight_norm_nonincreasing_in_lambda", mono))
    elif cfg["task"] == "memory":
        mc = memory_capacity(topo, sim, res, max_delay=cfg["max_delay"],
                             lam=cfg["lam"], seed=cfg["seed"])
        with open(outdir / "memory.csv", "w") as fh:
            fh.write("delay,r2\n")
            for k, r2 in enumerate(mc.per_delay):
                fh.write(f"{k},{r2!r}\n")
        summary["capacity"] = mc.capacity
        checks.append(("r2_in_unit_interval",
                       all(-1e-9 <= r <= 1.0 + 1e-9 for r in mc.per_delay)))
    else:
        raise ValidationError(f"unknown task {cfg['task']!r}")
    return summary


# ---------------------------------------------------------------------------
# wall

WALL_DEFAULTS: Dict[str, object] = {
    "subtask": "excite",          # excite | voronoi | morph
    "rows": 10,
    "cols": 15,
    "steps": 30,
    "sources": "auto",            # comma-separated cell ids or "auto"
    "excite_lo": 1,
    "excite_hi": 6,
    "refractory_len": 1,
    "n_seeds": 4,
    "op": "dilate",
    "density": 0.4,
}


def _pick_sources(cfg, graph) -> List[int]:
    if cfg["sources"] == "auto":
        return [graph.cell_id(graph.cols // 2, graph.rows // 2)]
    return [int(tok) for tok in str(cfg["sources"]).split(",")]


def cmd_wall(cfg: Dict[str, object], outdir: Path,
             checks: List[Check]) -> Dict[str, object]:
    graph = build_brick_wall(cfg["rows"], cfg["cols"])
    summary: Dict[str, object] = {"cmd": "wall", "subtask": cfg["subtask"],
                                  "seed": cfg["seed"],
                                  "rows": cfg["rows"], "cols": cfg["cols"]}
    if cfg["subtask"] == "excite":
        rule = RuleSpec(cfg["excite_lo"], cfg["excite_hi"],
                        cfg["refractory_len"])
        sources = _pick_sources(cfg, graph)
        frames = run_automaton(graph, make_state(graph, sources), rule,
                               cfg["steps"])
        fdir = outdir / "frames"
        fdir.mkdir()
        for i, state in enumerate(frames):
            write_ppm(render_frame(graph, state=state),
                      fdir / f"frame_{i:04d}.ppm")
        (outdir / "states.txt").write_text(
            "".join(state_to_text(graph, s) + "\n" for s in frames))
        if rule.excite_lo == 1 and rule.table is None:
            first = first_excitation_steps(graph, sources)
            checks.append(("wavefront_matches_bfs",
                           np.array_equal(first,
                                          bfs_distances(graph, sources))))
        summary["steps_run"] = len(frames) - 1
    elif cfg["subtask"] == "voronoi":
        rng = np.random.default_rng(cfg["seed"])
        seeds = rng.choice(graph.cell_count, size=cfg["n_seeds"],
                           replace=False).tolist()
        labels = voronoi_wavefront(graph, seeds)
        checks.append(("voronoi_matches_bfs_oracle",
                       np.array_equal(labels,
                                      voronoi_bfs_oracle(graph, seeds))))
        if cfg["n_seeds"] <= 10:
            (outdir / "labels.txt").write_text(labels_to_text(graph, labels))
        write_ppm(render_frame(graph, labels=labels), outdir / "labels.ppm")
        summary["n_seeds"] = cfg["n_seeds"]
    elif cfg["subtask"] == "morph":
        rng = np.random.default_rng(cfg["seed"])
        img = rng.random(graph.cell_count) < cfg["density"]
        out = morph_op(graph, img, cfg["op"])
        for name, arr in (("before", img), ("after", out)):
            (outdir / f"{name}.txt").write_text(
                state_to_text(graph, arr.astype(int)))
            write_ppm(render_frame(graph, state=arr.astype(int)),
                      outdir / f"{name}.ppm")
        checks.append(("erode_dilate_duality",
                       np.array_equal(morph_op(graph, img, "erode"),
                                      ~morph_op(graph, ~img, "dilate"))))
        summary["op"] = cfg["op"]
        summary["on_before"] = int(img.sum())
        summary["on_after"] = int(out.sum())
    else:
        raise ValidationError(f"unknown subtask {cfg['subtask']!r}")
    return summary


# ---------------------------------------------------------------------------
# route

ROUTE_DEFAULTS: Dict[str, object] = {
    "scenario": "",               # path to a scenario file; empty = sweep
    "rows": 20,
    "cols": 30,
    "max_faults": 50,
    "fault_step": 10,
    "per_count": 5,
    "ttl": 0,                     # 0 = cell count
}


def _route_one(graph, faults, src, dst, ttl, scenario_id, checks, rows_out):
    res = comm.flood_route(graph, faults, src, dst, ttl)
    reach = comm.connectivity_oracle(graph, faults, src)
    dist = comm.bfs_distances(graph, [src], blocked=faults.failed)
    ok = res.delivered == (dst in reach and dist[dst] <= ttl)
    if res.delivered:
        ok = ok and res.hops == int(dist[dst])
    checks.append((f"flood_matches_bfs_{scenario_id}", bool(ok)))
    rows_out.append(dict(scenario=scenario_id, src=src, dst=dst,
                         fault_count=faults.failure_count,
                         delivered=res.delivered, hops=res.hops,
                         messages=res.messages_sent))
    return res


def cmd_route(cfg: Dict[str, object], outdir: Path,
              checks: List[Check]) -> Dict[str, object]:
    summary: Dict[str, object] = {"cmd": "route", "seed": cfg["seed"]}
    rows_out: List[Dict[str, object]] = []
    if cfg["scenario"]:
        sc = comm.scenario_loads(Path(cfg["scenario"]).read_text())
        graph = build_brick_wall(sc.rows, sc.cols)
        faults = comm.FaultScenario(failed=frozenset(sc.faults))
        for i, (src, dst) in enumerate(sc.pairs):
            _route_one(graph, faults, src, dst, sc.ttl, i, checks, rows_out)
        summary["pairs"] = len(sc.pairs)
    else:
        graph = build_brick_wall(cfg["rows"], cfg["cols"])
        ttl = cfg["ttl"] or graph.cell_count
        src, dst = 0, graph.cell_count - 1
        counts = list(range(0, cfg["max_faults"] + 1, cfg["fault_step"]))
        rates = []
        rng = np.random.default_rng(cfg["seed"])
        pool = np.array([c for c in range(graph.cell_count)
                         if c not in (src, dst)])
        orders = [rng.permutation(pool) for _ in range(cfg["per_count"])]
        sid = 0
        for count in counts:
            delivered = 0
            for order in orders:
                faults = comm.FaultScenario(
                    failed=frozenset(int(c) for c in order[:count]))
                res = _route_one(graph, faults, src, dst, ttl, sid,
                                 checks, rows_out)
                delivered += int(res.delivered)
                sid += 1
            rates.append(delivered / cfg["per_count"])
        checks.append(("delivery_rate_nonincreasing",
                       all(b <= a + 1e-12 for a, b in zip(rates, rates[1:]))))
        # gossip spot check on the heaviest fault load of the first replicate
        faults = comm.FaultScenario(
            failed=frozenset(int(c) for c in orders[0][:counts[-1]]))
        comp = comm.connectivity_oracle(graph, faults, src)
        diam = comm.component_diameter(graph, faults, comp)
        vals = np.arange(graph.cell_count, dtype=float)
        gs = comm.gossip_aggregate(graph, faults, vals, "min", rounds=diam)
        idx = sorted(comp)
        checks.append(("gossip_min_converges_within_diameter",
                       bool(np.allclose(gs.values[idx], vals[idx].min()))))
        summary["delivery_rates"] = ",".join(repr(r) for r in rates)
    (outdir / "results.csv").write_text(comm.route_results_csv(rows_out))
    summary["scenarios"] = len(rows_out)
    return summary


# ---------------------------------------------------------------------------
# entry point

_SUBCOMMANDS: Dict[str, Tuple[Dict[str, object], Callable]] = {
    "attractor": (ATTRACTOR_DEFAULTS, cmd_attractor),
    "reservoir": (RESERVOIR_DEFAULTS, cmd_reservoir),
    "wall": (WALL_DEFAULTS, cmd_wall),
    "route": (ROUTE_DEFAULTS, cmd_route),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bricksim",
        description="Simulator of computing buildings: brick circuits, "
                    "reservoir readouts, wall automata, and routing.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (defaults, _) in _SUBCOMMANDS.items():
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="key=value config file")
        sp.add_argument("--seed", type=int, help="master RNG seed")
        sp.add_argument("--out", default="runs", help="output root directory")
        sp.add_argument("--force", action="store_true",
                        help="overwrite an existing run directory")
        if name in ("wall", "route"):
            sp.add_argument("--preset", choices=["paper-wall"],
                            help="paper-wall: 20x30 wall of 600 bricks")
        for key, default in defaults.items():
            sp.add_argument(f"--{key.replace('_', '-')}", dest=f"cfg_{key}",
                            metavar=_format_value(default),
                            help=f"default: {_format_value(default)}")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    defaults, fn = _SUBCOMMANDS[args.command]
    try:
        cfg = _resolve_config(defaults, args)
        outdir = _prepare_outdir(args, args.command, cfg["seed"])
        _write_config_echo(outdir, cfg)
        checks: List[Check] = []
        summary = fn(cfg, outdir, checks)
        return _finish(outdir, summary, checks)
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
