import numpy as np
import pytest

from bricksim.errors import ValidationError
from bricksim.material import (
    Capacitor,
    CircuitTopology,
    NetworkGenParams,
    Resistor,
    SimConfig,
    Waveform,
    generate_network,
    simulate,
)
from bricksim.reservoir import (
    ReservoirConfig,
    harvest_states,
    make_waveform_dataset,
    memory_capacity,
    separation_score,
    waveform_classification_task,
)


def divider():
    # driven 0 -- R -- 1 -- R -- ground 2: output tracks the input instantly
    return CircuitTopology(3, 2, [(0, 1, Resistor(1e-3)), (1, 2, Resistor(1e-3))],
                           [0, 1], [1])


def test_harvest_identity_config_matches_trace():
    topo = generate_network(NetworkGenParams(lattice_dims=(4, 4, 1), seed=3))
    stim = {topo.input_pins[0]: Waveform("square", 100.0, 1.0)}
    cfg = SimConfig(dt=1e-4, duration=0.02)
    res = ReservoirConfig(sampled_nodes=tuple(topo.output_pins),
                          washout=0.0, sample_period=cfg.dt)
    sm = harvest_states(topo, stim, cfg, res)
    trace = simulate(topo, stim, cfg)
    assert np.array_equal(sm.states, trace.samples)
    assert np.array_equal(sm.times, trace.times)


def test_harvest_zero_stimuli_all_zero():
    topo = generate_network(NetworkGenParams(lattice_dims=(4, 4, 1), seed=3))
    stim = {topo.input_pins[0]: Waveform("sine", 100.0, 0.0)}
    cfg = SimConfig(dt=1e-4, duration=0.02)
    res = ReservoirConfig(sampled_nodes=(1, 2, 3), washout=0.005,
                          sample_period=1e-3)
    sm = harvest_states(topo, stim, cfg, res)
    assert np.all(sm.states == 0.0)


def test_harvest_washout_and_downsample():
    topo = divider()
    stim = {0: Waveform("sine", 100.0, 1.0)}
    cfg = SimConfig(dt=1e-4, duration=0.1)
    res = ReservoirConfig(sampled_nodes=(1,), washout=0.05, sample_period=1e-3)
    sm = harvest_states(topo, stim, cfg, res)
    assert sm.times[0] >= 0.05
    assert np.diff(sm.times) == pytest.approx(1e-3)


def test_harvest_empty_window_rejected():
    topo = divider()
    cfg = SimConfig(dt=1e-4, duration=0.01)
    res = ReservoirConfig(sampled_nodes=(1,), washout=0.02, sample_period=1e-3)
    with pytest.raises(ValidationError):
        harvest_states(topo, {0: Waveform("sine", 100.0, 1.0)}, cfg, res)


def test_distinct_stimuli_separate_states():
    topo = generate_network(NetworkGenParams(lattice_dims=(4, 4, 1), seed=9))
    cfg = SimConfig(dt=1e-4, duration=0.05)
    res = ReservoirConfig(sampled_nodes=tuple(range(topo.node_count)),
                          washout=0.0, sample_period=1e-3)
    a = harvest_states(topo, {topo.input_pins[0]: Waveform("square", 100.0, 1.0)},
                       cfg, res)
    b = harvest_states(topo, {topo.input_pins[0]: Waveform("sine", 101.0, 1.0)},
                       cfg, res)
    assert np.linalg.norm(a.states - b.states) > 0.0


def test_separation_zero_for_identical_stimuli():
    topo = generate_network(NetworkGenParams(lattice_dims=(4, 4, 1), seed=1))
    cfg = SimConfig(dt=1e-4, duration=0.05)
    res = ReservoirConfig(sampled_nodes=tuple(range(topo.node_count)),
                          washout=0.01, sample_period=1e-3)
    stim = {topo.input_pins[0]: Waveform("square", 100.0, 1.0)}
    assert separation_score(topo, stim, stim, cfg, res) == 0.0


def test_separation_square_vs_sine_above_threshold():
    topo = generate_network(NetworkGenParams(lattice_dims=(6, 6, 1), seed=14))
    cfg = SimConfig(dt=1e-4, duration=0.1)
    res = ReservoirConfig(sampled_nodes=tuple(range(1, topo.node_count)),
                          washout=0.02, sample_period=1e-3)
    pin = topo.input_pins[0]
    score = separation_score(
        topo, {pin: Waveform("square", 100.0, 1.0)},
        {pin: Waveform("sine", 101.0, 1.0)}, cfg, res)
    assert score > 0.01  # regression baseline


def test_separation_symmetric():
    topo = generate_network(NetworkGenParams(lattice_dims=(5, 5, 1), seed=4))
    cfg = SimConfig(dt=1e-4, duration=0.05)
    res = ReservoirConfig(sampled_nodes=tuple(range(1, topo.node_count)),
                          washout=0.01, sample_period=1e-3)
    pin = topo.input_pins[0]
    a = {pin: Waveform("square", 100.0, 1.0)}
    b = {pin: Waveform("sawtooth", 101.0, 1.0)}
    assert separation_score(topo, a, b, cfg, res) == \
        separation_score(topo, b, a, cfg, res)


def test_memoryless_network_zero_separation_post_washout():
    topo = divider()
    cfg = SimConfig(dt=1e-4, duration=0.1)
    res = ReservoirConfig(sampled_nodes=(1,), washout=0.05, sample_period=1e-3)
    # stimuli differ only in phase during the washout window via a dc kick:
    # a memoryless network forgets instantly, so post-washout states agree
    a = {0: Waveform("sine", 100.0, 1.0)}
    b = {0: Waveform("sine", 100.0, 1.0)}
    assert separation_score(topo, a, b, cfg, res) == 0.0


def test_steady_state_means_invariant_to_extra_washout_periods():
    # RC lowpass: after ten periods the transient is gone, so adding one
    # more whole washout period leaves the per-window mean state unchanged
    topo = CircuitTopology(3, 2, [(0, 1, Resistor(1e-3)),
                                  (1, 2, Capacitor(0.5e-6))], [0], [1])
    f = 100.0
    period = 1.0 / f
    stim = {0: Waveform("sine", f, 1.0, dc_offset=0.5)}
    means = []
    for n_washout in (10, 11):
        washout = n_washout * period
        cfg = SimConfig(dt=1e-5, duration=washout + 10 * period)
        res = ReservoirConfig(sampled_nodes=(1,), washout=washout,
                              sample_period=1e-4)
        sm = harvest_states(topo, stim, cfg, res)
        means.append(sm.states.mean(axis=0))
    assert np.linalg.norm(means[0] - means[1]) < 1e-6 * np.linalg.norm(means[0])


def memory_config(duration):
    cfg = SimConfig(dt=1e-4, duration=duration)
    res = ReservoirConfig(sampled_nodes=(1,), washout=0.05,
                          sample_period=1e-3)
    return cfg, res


def test_memory_delay_zero_high_on_divider():
    cfg, res = memory_config(0.5)
    result = memory_capacity(divider(), cfg, res, max_delay=3, seed=2)
    assert result.per_delay[0] > 0.9


def test_memoryless_network_has_no_memory():
    cfg, res = memory_config(1.0)
    result = memory_capacity(divider(), cfg, res, max_delay=3, seed=2)
    assert all(r2 < 0.1 for r2 in result.per_delay[1:])


def test_memory_per_delay_stable_across_max_delay():
    cfg, res = memory_config(0.5)
    short = memory_capacity(divider(), cfg, res, max_delay=2, seed=5)
    long = memory_capacity(divider(), cfg, res, max_delay=4, seed=5)
    assert long.per_delay[:3] == pytest.approx(short.per_delay)
    assert long.capacity >= short.capacity - 1e-12


def test_classification_on_synthetic_features():
    topo = generate_network(NetworkGenParams(lattice_dims=(4, 4, 1), seed=0))
    cfg = SimConfig(dt=1e-4, duration=0.1)
    res = ReservoirConfig(sampled_nodes=(1, 2), washout=0.01,
                          sample_period=1e-3)
    n = 30
    rng = np.random.default_rng(0)
    labels = np.arange(n) % 3
    centers = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]])
    feats = centers[labels] + 0.01 * rng.normal(size=(n, 2))
    result = waveform_classification_task(topo, cfg, res, n, seed=0,
                                          lam=1e-9, features=feats)
    assert result.train_accuracy == 1.0
    assert result.accuracy == 1.0
    shuffled = waveform_classification_task(topo, cfg, res, n, seed=0,
                                            lam=1e-9, features=feats,
                                            shuffle_labels=True)
    assert shuffled.accuracy <= 0.8  # chance band, coarse with 10 test episodes


def test_dataset_balanced_and_split():
    topo = generate_network(NetworkGenParams(lattice_dims=(4, 4, 1), seed=0))
    res = ReservoirConfig(sampled_nodes=(1,), washout=0.0, sample_period=1e-3)
    ds = make_waveform_dataset(topo, res, 30, seed=3)
    labels = [e.label for e in ds.episodes]
    assert labels.count(0) == labels.count(1) == labels.count(2) == 10
    assert sorted(ds.train_indices + ds.test_indices) == list(range(30))
    tr_labels = [labels[i] for i in ds.train_indices]
    assert tr_labels.count(0) == tr_labels.count(1) == tr_labels.count(2)
    with pytest.raises(ValidationError):
        make_waveform_dataset(topo, res, 6, seed=3)
