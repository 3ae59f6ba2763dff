"""Linear readout layers: ridge regression (closed form), gradient
descent on the same objective, prediction and error metrics.

The objective throughout is ||X w + b - y||^2 + lambda ||w||^2 with the
bias unpenalized.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from ..errors import IllConditionedError, ValidationError


@dataclass
class ReadoutWeights:
    weights: np.ndarray
    bias: float
    ridge_lambda: float

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if not np.all(np.isfinite(self.weights)) or not np.isfinite(self.bias):
            raise ValidationError("readout weights must be finite")
        if self.ridge_lambda < 0:
            raise ValidationError("ridge_lambda must be nonnegative")


def ridge_objective(states, targets, weights, bias, lam) -> float:
    r = states @ weights + bias - targets
    return float(r @ r + lam * weights @ weights)


def train_ridge(states: np.ndarray, targets: np.ndarray,
                lam: float = 0.0) -> ReadoutWeights:
    """Closed-form minimizer via the regularized normal equations."""
    X = np.asarray(states, dtype=float)
    y = np.asarray(targets, dtype=float)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ValidationError("states must be (n, d) with matching targets")
    if lam < 0:
        raise ValidationError("lambda must be nonnegative")
    n, d = X.shape
    A = np.column_stack([X, np.ones(n)])
    M = A.T @ A
    M[np.arange(d), np.arange(d)] += lam
    rhs = A.T @ y
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > 1e12:
        raise IllConditionedError(
            f"normal equations ill-conditioned (cond={cond:.2e}); "
            "use lambda > 0")
    theta = np.linalg.solve(M, rhs)
    return ReadoutWeights(theta[:d], float(theta[d]), lam)


def train_gd(states: np.ndarray, targets: np.ndarray, lam: float,
             learning_rate: float, epochs: int,
             seed: int = 0) -> ReadoutWeights:
    """Full-batch gradient descent on the ridge objective.

    Raises on divergence (objective growing past 10x its start).
    """
    if learning_rate <= 0:
        raise ValidationError("learning_rate must be positive")
    if epochs < 1:
        raise ValidationError("epochs must be >= 1")
    X = np.asarray(states, dtype=float)
    y = np.asarray(targets, dtype=float)
    n, d = X.shape
    rng = np.random.default_rng(seed)
    w = rng.normal(scale=1e-8, size=d)
    b = 0.0
    start = ridge_objective(X, y, w, b, lam)
    limit = 10.0 * max(start, 1e-30)
    for _ in range(epochs):
        r = X @ w + b - y
        gw = 2.0 * (X.T @ r + lam * w)
        gb = 2.0 * float(r.sum())
        w = w - learning_rate * gw
        b = b - learning_rate * gb
        obj = ridge_objective(X, y, w, b, lam)
        if not np.isfinite(obj) or obj > limit:
            raise ValidationError(
                f"gradient descent diverged (objective {obj:.3e}); "
                "reduce learning_rate")
    return ReadoutWeights(w, float(b), lam)


def predict(weights: ReadoutWeights, states: np.ndarray) -> np.ndarray:
    X = np.asarray(states, dtype=float)
    if X.ndim != 2 or X.shape[1] != len(weights.weights):
        raise ValidationError(
            f"state dimension {X.shape} does not match readout "
            f"({len(weights.weights)})")
    return X @ weights.weights + weights.bias


def classify_sign(weights: ReadoutWeights, states: np.ndarray) -> np.ndarray:
    """Binary decision by the sign of the readout (0 maps to +1)."""
    return np.where(predict(weights, states) >= 0.0, 1, -1)


def classify_one_vs_rest(readouts: Sequence[ReadoutWeights],
                         states: np.ndarray) -> np.ndarray:
    """Argmax over per-class readouts applied to per-episode features."""
    scores = np.column_stack([predict(r, states) for r in readouts])
    return np.argmax(scores, axis=1)


def nrmse(pred: np.ndarray, target: np.ndarray) -> float:
    """Root mean squared error over the target's standard deviation."""
    p = np.asarray(pred, dtype=float)
    t = np.asarray(target, dtype=float)
    if p.shape != t.shape or p.ndim != 1 or len(p) < 2:
        raise ValidationError("pred and target must be equal-length vectors of >= 2")
    var = float(np.var(t))
    if var == 0.0:
        raise ValidationError("target variance is zero; nrmse undefined")
    return float(np.sqrt(np.mean((p - t) ** 2) / var))


# ---------------------------------------------------------------------------

def weights_to_csv(w: ReadoutWeights) -> str:
    buf = io.StringIO()
    buf.write("name,value\n")
    for i, wi in enumerate(w.weights):
        buf.write(f"w{i},{float(wi)!r}\n")
    buf.write(f"bias,{w.bias!r}\n")
    buf.write(f"ridge_lambda,{w.ridge_lambda!r}\n")
    return buf.getvalue()


def weights_from_csv(text: str) -> ReadoutWeights:
    vals = {}
    for line in text.splitlines()[1:]:
        if line.strip():
            name, value = line.split(",")
            vals[name] = float(value)
    ws = [vals[f"w{i}"] for i in range(len(vals) - 2)]
    return ReadoutWeights(np.array(ws), vals["bias"], vals["ridge_lambda"])
