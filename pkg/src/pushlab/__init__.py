"""Planar biped push-recovery laboratory.

A desk-scale pipeline for learning and evaluating balance recovery: planar
articulated dynamics with penalty ground contact, a 25 Hz policy / 500 Hz PD
control hierarchy, a capture-point-shaped balance reward with a push
curriculum, from-scratch TRPO and PPO, and a scenario evaluation harness.
"""

from .model import (
    LinkSpec, JointSpec, ContactPointSpec, ModelSpec, ModelError,
    builtin_model, load_model, save_model, support_interval,
)
from .dynamics import (
    SimState, ExternalForce, IntegrationError,
    forward_kinematics, mass_matrix, bias_forces, contact_forces, com_state,
    step, nominal_state, DT,
)
from .control import FilterState, pd_torque, filter_step
from .capture_point import CpParams, capture_point, max_rejectable_impulse, desired_com_velocity

__version__ = "0.1.0"
