"""Reservoir-computing layer over brick substrates: state harvesting,
linear readouts, and diagnostics."""

from .harvest import (
    ReservoirConfig,
    StateMatrix,
    harvest_states,
    separation_score,
    states_to_csv,
)
from .readout import (
    ReadoutWeights,
    classify_one_vs_rest,
    classify_sign,
    nrmse,
    predict,
    ridge_objective,
    train_gd,
    train_ridge,
    weights_from_csv,
    weights_to_csv,
)
from .tasks import (
    ClassificationResult,
    EpisodeSpec,
    MemoryCapacityResult,
    TaskDataset,
    WAVEFORM_CLASSES,
    episode_features,
    make_waveform_dataset,
    memory_capacity,
    waveform_classification_task,
)

__all__ = [
    "ReservoirConfig", "StateMatrix", "harvest_states", "separation_score",
    "states_to_csv",
    "ReadoutWeights", "classify_one_vs_rest", "classify_sign", "nrmse",
    "predict", "ridge_objective", "train_gd", "train_ridge",
    "weights_from_csv", "weights_to_csv",
    "ClassificationResult", "EpisodeSpec", "MemoryCapacityResult",
    "TaskDataset", "WAVEFORM_CLASSES", "episode_features",
    "make_waveform_dataset", "memory_capacity",
    "waveform_classification_task",
]
