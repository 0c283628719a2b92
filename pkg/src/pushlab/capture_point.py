"""Linear-inverted-pendulum capture point math.

The capture point is where the robot would have to step for the LIP model to
come to rest; its distance to the support border bounds the impulse a
standing robot can absorb without stepping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class CpParams:
    """LIP parameters: CoM height z_c, gravity g, robot mass."""

    z_c: float
    g: float
    mass: float

    def __post_init__(self):
        if not (self.z_c > 0 and self.g > 0 and self.mass > 0):
            raise ValueError("CpParams fields must all be strictly positive")


def capture_point(x_com: float, v_com: float, p: CpParams) -> float:
    """x_CP = x_CoM + v_CoM * sqrt(z_c / g)."""
    return x_com + v_com * math.sqrt(p.z_c / p.g)


def max_rejectable_impulse(p: CpParams, delta_cop: float) -> float:
    """Largest impulse a stationary LIP can absorb without stepping, given a
    CoM-to-support-border margin of ``delta_cop``: m sqrt(g/z_c) delta."""
    if delta_cop < 0:
        raise ValueError("delta_cop must be >= 0")
    return p.mass * math.sqrt(p.g / p.z_c) * delta_cop


def desired_com_velocity(x_com: float, support_center: float, p: CpParams) -> float:
    """CoM velocity whose capture point lands on the support center:
    (support_center - x_com) * sqrt(g / z_c)."""
    return (support_center - x_com) * math.sqrt(p.g / p.z_c)
