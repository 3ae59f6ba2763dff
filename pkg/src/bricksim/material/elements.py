"""Two-terminal circuit elements, drive waveforms and simulation settings.

Element values use SI units throughout: siemens, farads, ohms, volts,
seconds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ..errors import ValidationError


@dataclass(frozen=True)
class Resistor:
    conductance: float  # siemens

    def __post_init__(self):
        if not (self.conductance > 0 and math.isfinite(self.conductance)):
            raise ValidationError(f"resistor conductance must be positive, got {self.conductance}")


@dataclass(frozen=True)
class Capacitor:
    capacitance: float  # farads

    def __post_init__(self):
        if not (self.capacitance > 0 and math.isfinite(self.capacitance)):
            raise ValidationError(f"capacitance must be positive, got {self.capacitance}")


@dataclass(frozen=True)
class Memristor:
    """Linear ion-drift memristor.

    Resistance interpolates between r_on (state w=1) and r_off (w=0):
    R(w) = r_on*w + r_off*(1-w).  The internal state advances as
    dw/dt = (mobility/length_scale^2) * r_on * i(t) * w*(1-w), clamped
    to [0, 1].
    """

    r_on: float
    r_off: float
    mobility: float = 1e-14   # m^2 s^-1 V^-1
    length_scale: float = 1e-8  # m, device thickness normalizer

    def __post_init__(self):
        if not (0 < self.r_on < self.r_off):
            raise ValidationError(f"memristor needs 0 < r_on < r_off, got {self.r_on}, {self.r_off}")
        if not (self.mobility > 0 and self.length_scale > 0):
            raise ValidationError("memristor mobility and length_scale must be positive")

    @property
    def state_rate(self) -> float:
        """Coefficient k in dw/dt = k * i * w*(1-w)  [1/(A s)]."""
        return self.mobility / self.length_scale**2 * self.r_on

    def resistance(self, w: float) -> float:
        return self.r_on * w + self.r_off * (1.0 - w)


Element = Union[Resistor, Capacitor, Memristor]

WAVEFORM_KINDS = ("square", "sine", "sawtooth")


@dataclass(frozen=True)
class Waveform:
    """Periodic drive signal.

    Conventions: square = amplitude*sign(sin(2*pi*f*t + phase)) with the
    value at an exact zero crossing taken as +amplitude; sawtooth ramps
    linearly from -amplitude to +amplitude once per period.  dc_offset is
    added to all kinds.
    """

    kind: str
    frequency: float  # Hz
    amplitude: float  # volts
    phase: float = 0.0  # radians
    dc_offset: float = 0.0  # volts

    def __post_init__(self):
        if self.kind not in WAVEFORM_KINDS:
            raise ValidationError(f"unknown waveform kind {self.kind!r}")
        if not self.frequency > 0:
            raise ValidationError("waveform frequency must be positive")
        if self.amplitude < 0:
            raise ValidationError("waveform amplitude must be nonnegative")

    def sample(self, t):
        """Evaluate at time t (scalar or ndarray, seconds)."""
        t = np.asarray(t, dtype=float)
        x = 2.0 * np.pi * self.frequency * t + self.phase
        if self.kind == "sine":
            v = self.amplitude * np.sin(x)
        elif self.kind == "square":
            v = np.where(np.sin(x) >= 0.0, self.amplitude, -self.amplitude)
        else:  # sawtooth
            pos = np.mod(x / (2.0 * np.pi), 1.0)
            v = -self.amplitude + 2.0 * self.amplitude * pos
        out = v + self.dc_offset
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PiecewiseConstantSource:
    """Sample-and-hold drive: values[k] held on [k*hold, (k+1)*hold).

    Times past the end of the value list hold the last value.
    """

    values: tuple
    hold: float  # seconds

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValidationError("piecewise-constant source needs at least one value")
        if not self.hold > 0:
            raise ValidationError("hold period must be positive")

    def sample(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.minimum(np.floor(t / self.hold).astype(int), len(self.values) - 1)
        out = np.asarray(self.values, dtype=float)[idx]
        return float(out) if out.ndim == 0 else out


Source = Union[Waveform, PiecewiseConstantSource]


def waveform_sample(w: Waveform, t):
    """Functional form of Waveform.sample."""
    return w.sample(t)


SCHEMES = ("trapezoidal", "backward-euler")


@dataclass(frozen=True)
class SimConfig:
    dt: float
    duration: float
    scheme: str = "trapezoidal"
    record_stride: int = 1

    def __post_init__(self):
        if not (0 < self.dt < self.duration or math.isclose(self.dt, self.duration)):
            raise ValidationError(f"need 0 < dt <= duration, got dt={self.dt}, duration={self.duration}")
        if self.scheme not in SCHEMES:
            raise ValidationError(f"unknown scheme {self.scheme!r}; choose from {SCHEMES}")
        if self.record_stride < 1:
            raise ValidationError("record_stride must be >= 1")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.duration / self.dt)))
