"""Benchmark tasks for brick reservoirs: delay-line memory capacity and
three-way waveform classification."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import ValidationError
from ..material.elements import PiecewiseConstantSource, SimConfig, Source, Waveform
from ..material.network import CircuitTopology
from .harvest import ReservoirConfig, StateMatrix, harvest_states
from .readout import ReadoutWeights, classify_one_vs_rest, predict, train_ridge

WAVEFORM_CLASSES = ("square", "sine", "sawtooth")


@dataclass(frozen=True)
class EpisodeSpec:
    stimuli: Dict[int, Source]
    label: int


@dataclass
class TaskDataset:
    episodes: List[EpisodeSpec]
    train_indices: List[int]
    test_indices: List[int]
    seed: int

    def __post_init__(self):
        if not self.train_indices or not self.test_indices:
            raise ValidationError("both dataset splits must be non-empty")


@dataclass
class MemoryCapacityResult:
    per_delay: List[float]   # r^2 for delays 0..max_delay
    capacity: float          # sum over delays >= 1


@dataclass
class ClassificationResult:
    accuracy: float
    train_accuracy: float
    labels: np.ndarray
    predictions: np.ndarray
    features: np.ndarray
    readouts: List[ReadoutWeights]
    dataset: TaskDataset


def _stratified_split(labels: Sequence[int], rng: np.random.Generator,
                      train_fraction: float = 2.0 / 3.0):
    train, test = [], []
    labels = np.asarray(labels)
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        rng.shuffle(idx)
        cut = max(1, int(round(train_fraction * len(idx))))
        cut = min(cut, len(idx) - 1)
        train.extend(idx[:cut].tolist())
        test.extend(idx[cut:].tolist())
    return sorted(train), sorted(test)


def memory_capacity(topology: CircuitTopology, sim_config: SimConfig,
                    res_config: ReservoirConfig, max_delay: int,
                    lam: float = 1e-6, seed: int = 0) -> MemoryCapacityResult:
    """Delay-line benchmark with a seeded uniform +-1 V stream.

    A piecewise-constant input (one fresh uniform value per sample
    period) drives the first input pin; per delay k a ridge readout is
    trained to reproduce the input k holds ago, and its squared
    correlation on the held-out tail is reported.  The capacity sums the
    delays >= 1 (the delay-0 entry is reported for diagnostics only).
    """
    if max_delay < 1:
        raise ValidationError("max_delay must be >= 1")
    res_config.validate_against(sim_config)
    rng = np.random.default_rng(seed)
    hold = res_config.sample_period
    n_values = int(np.ceil(sim_config.duration / hold)) + 1
    u = rng.uniform(-1.0, 1.0, size=n_values)
    src = PiecewiseConstantSource(tuple(u * res_config.input_encoding), hold)
    stimuli: Dict[int, Source] = {topology.input_pins[0]: src}
    sm = harvest_states(topology, stimuli, sim_config, res_config)

    # input value in force at each sample time (a new value takes effect
    # exactly on its hold boundary, matching the integrator's source timing)
    idx = np.floor(sm.times / hold + 1e-9).astype(int)
    r2 = []
    for k in range(max_delay + 1):
        valid = idx - k >= 0
        states = sm.states[valid]
        targets = u[idx[valid] - k]
        cut = (2 * len(targets)) // 3
        if cut < 2 or len(targets) - cut < 2:
            raise ValidationError("too few samples for the requested delays")
        w = train_ridge(states[:cut], targets[:cut], lam)
        pred = predict(w, states[cut:])
        tst = targets[cut:]
        if np.std(pred) == 0.0 or np.std(tst) == 0.0:
            r2.append(0.0)
        else:
            r2.append(float(np.corrcoef(pred, tst)[0, 1] ** 2))
    return MemoryCapacityResult(per_delay=r2, capacity=float(sum(r2[1:])))


def make_waveform_dataset(topology: CircuitTopology,
                          res_config: ReservoirConfig, n_episodes: int,
                          seed: int, primary_hz: float = 100.0,
                          secondary_hz: float = 101.0) -> TaskDataset:
    """Episodes with a fixed square primary drive and a class-defining
    secondary waveform with seeded random phase."""
    if n_episodes < 12:
        raise ValidationError("need at least 12 episodes")
    if len(topology.input_pins) < 2:
        raise ValidationError("waveform task needs two input pins")
    rng = np.random.default_rng(seed)
    amp = res_config.input_encoding
    p_primary, p_secondary = topology.input_pins[:2]
    episodes = []
    for i in range(n_episodes):
        label = i % len(WAVEFORM_CLASSES)
        phase = float(rng.uniform(0.0, 2.0 * np.pi))
        episodes.append(EpisodeSpec(
            stimuli={
                p_primary: Waveform("square", primary_hz, amp),
                p_secondary: Waveform(WAVEFORM_CLASSES[label], secondary_hz,
                                      amp, phase=phase),
            },
            label=label))
    labels = [e.label for e in episodes]
    train, test = _stratified_split(labels, rng)
    return TaskDataset(episodes, train, test, seed)


def episode_features(topology: CircuitTopology, dataset: TaskDataset,
                     sim_config: SimConfig,
                     res_config: ReservoirConfig) -> np.ndarray:
    """Per-episode time-mean of the sampled node voltages."""
    feats = []
    for ep in dataset.episodes:
        sm = harvest_states(topology, ep.stimuli, sim_config, res_config)
        feats.append(sm.states.mean(axis=0))
    return np.array(feats)


def waveform_classification_task(
        topology: CircuitTopology, sim_config: SimConfig,
        res_config: ReservoirConfig, n_episodes: int, seed: int,
        lam: float = 1e-6, shuffle_labels: bool = False,
        features: Optional[np.ndarray] = None) -> ClassificationResult:
    """Train one-vs-rest ridge readouts on episode-mean states and report
    held-out accuracy.  shuffle_labels permutes the labels (seeded) for a
    chance-level control; precomputed features may be passed to reuse the
    simulations across controls."""
    dataset = make_waveform_dataset(topology, res_config, n_episodes, seed)
    if features is None:
        features = episode_features(topology, dataset, sim_config, res_config)
    labels = np.array([e.label for e in dataset.episodes])
    if shuffle_labels:
        rng = np.random.default_rng(seed + 1)
        labels = rng.permutation(labels)
    tr, te = dataset.train_indices, dataset.test_indices
    readouts = []
    for cls in range(len(WAVEFORM_CLASSES)):
        targets = np.where(labels[tr] == cls, 1.0, -1.0)
        readouts.append(train_ridge(features[tr], targets, lam))
    pred_te = classify_one_vs_rest(readouts, features[te])
    pred_tr = classify_one_vs_rest(readouts, features[tr])
    return ClassificationResult(
        accuracy=float(np.mean(pred_te == labels[te])),
        train_accuracy=float(np.mean(pred_tr == labels[tr])),
        labels=labels,
        predictions=pred_te,
        features=features,
        readouts=readouts,
        dataset=dataset)
