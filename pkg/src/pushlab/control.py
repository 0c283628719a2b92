"""Joint-level PD control and the observation low-pass filter."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def pd_torque(q_target, q_measured, qd_measured, gains, torque_limit):
    """PD torque u = Kp (q_target - q_measured) - Kd qd_measured, clamped to
    [-torque_limit, torque_limit].  Accepts scalars or matching arrays."""
    kp, kd = gains
    u = kp * (np.asarray(q_target) - np.asarray(q_measured)) - kd * np.asarray(qd_measured)
    return np.clip(u, -np.asarray(torque_limit), np.asarray(torque_limit))


@dataclass
class FilterState:
    """First-order low-pass state, discretized with the exact exponential
    a = exp(-2 pi f_c / f_s); y_prev is None until the first sample, which
    initializes the filter without a startup transient."""

    cutoff_hz: float
    sample_hz: float
    y_prev: np.ndarray | None = None

    @property
    def a(self) -> float:
        return math.exp(-2.0 * math.pi * self.cutoff_hz / self.sample_hz)

    def copy(self) -> "FilterState":
        return FilterState(self.cutoff_hz, self.sample_hz,
                           None if self.y_prev is None else self.y_prev.copy())


def filter_step(fs: FilterState, x) -> tuple[FilterState, np.ndarray]:
    """One filter update: y = a y_prev + (1 - a) x per channel.

    Returns the advanced state and the filtered sample.  The input state is
    not mutated.
    """
    x = np.asarray(x, dtype=np.float64)
    if fs.y_prev is None:
        y = x.copy()
    else:
        if x.shape != fs.y_prev.shape:
            raise ValueError(f"sample shape {x.shape} does not match filter "
                             f"state {fs.y_prev.shape}")
        a = fs.a
        y = a * fs.y_prev + (1.0 - a) * x
    return FilterState(fs.cutoff_hz, fs.sample_hz, y), y
