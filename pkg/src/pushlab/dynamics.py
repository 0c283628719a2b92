"""Planar floating-base forward dynamics with penalty ground contact.

All operations are pure functions of their inputs; :func:`step` advances one
fixed 2 ms semi-implicit Euler tick (velocity update before position, which
keeps the stiff contact springs stable at the 500 Hz low-level rate).

Generalized coordinates ``q`` are ``[base_x, base_z, base_pitch,
joint_angles...]`` with base pitch zero when upright; ``qd`` matches.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .model import ModelSpec

DT = 0.002  # 500 Hz low-level tick


class IntegrationError(RuntimeError):
    """Integration produced a non-finite state; carries the last valid one."""

    def __init__(self, last_state: "SimState"):
        super().__init__("non-finite state during integration")
        self.last_state = last_state


@dataclass
class SimState:
    """Snapshot of the simulation: coordinates, velocities, time, and the
    per-contact (active, force) pairs evaluated at this state."""

    q: np.ndarray
    qd: np.ndarray
    t: float = 0.0
    contact_active: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))
    contact_forces: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))

    def copy(self) -> "SimState":
        return SimState(self.q.copy(), self.qd.copy(), self.t,
                        self.contact_active.copy(), self.contact_forces.copy())


@dataclass(frozen=True)
class ExternalForce:
    """World-frame force applied at a point (link frame) during [t_start, t_end)."""

    link: int
    point: tuple[float, float]
    force: tuple[float, float]
    window: tuple[float, float]

    def __post_init__(self):
        if not self.window[0] < self.window[1]:
            raise ValueError("external force window requires t_start < t_end")


@dataclass
class LinkKinematics:
    """World pose/velocity of every link frame plus contact point kinematics."""

    phi: np.ndarray            # (L,) frame rotations
    origin: np.ndarray         # (L, 2) frame origins
    omega: np.ndarray | None   # (L,) angular rates, None without qd
    origin_vel: np.ndarray | None
    contact_pos: np.ndarray    # (C, 2)
    contact_vel: np.ndarray | None


@functools.lru_cache(maxsize=32)
def pack_model(model: ModelSpec) -> K.PackedModel:
    """Flatten a ModelSpec into the array bundle the compiled kernels use."""
    L = len(model.links)
    J = len(model.joints)
    parent_joint = np.full(L, -1, dtype=np.int64)
    for ji, j in enumerate(model.joints):
        parent_joint[j.child_link] = ji

    # parent-first order and per-link ancestor joint chains
    order = []
    stack = [model.base_link]
    children = {i: [] for i in range(L)}
    for j in model.joints:
        children[j.parent_link].append(j.child_link)
    while stack:
        link = stack.pop(0)
        order.append(link)
        stack.extend(children[link])
    chains = []
    for i in range(L):
        chain = []
        cur = i
        while parent_joint[cur] >= 0:
            chain.append(parent_joint[cur])
            cur = model.joints[parent_joint[cur]].parent_link
        chains.append(chain[::-1])
    depth = np.array([len(c) for c in chains], dtype=np.int64)
    D = max(1, int(depth.max()) if L else 1)
    anc = np.full((L, D), -1, dtype=np.int64)
    for i, c in enumerate(chains):
        anc[i, :len(c)] = c

    c_foot = np.array([model.foot_links.index(c.link) for c in model.contacts],
                      dtype=np.int64)

    from . import constants as C
    return K.PackedModel(
        mass=np.array([l.mass for l in model.links]),
        inertia=np.array([l.inertia for l in model.links]),
        com_off=np.array([l.com_offset for l in model.links]),
        parent_joint=parent_joint,
        order=np.array(order, dtype=np.int64),
        anc=anc, depth=depth,
        j_parent=np.array([j.parent_link for j in model.joints], dtype=np.int64),
        j_child=np.array([j.child_link for j in model.joints], dtype=np.int64),
        anchor=np.array([j.parent_anchor for j in model.joints], dtype=np.float64).reshape(J, 2),
        mount=np.array([j.mount_angle for j in model.joints]),
        angle_lo=np.array([j.angle_limits[0] for j in model.joints]),
        angle_hi=np.array([j.angle_limits[1] for j in model.joints]),
        kp=np.array([j.kp for j in model.joints]),
        kd=np.array([j.kd for j in model.joints]),
        torque_lim=np.array([j.torque_limit for j in model.joints]),
        vel_lim=np.array([j.velocity_limit for j in model.joints]),
        c_link=np.array([c.link for c in model.contacts], dtype=np.int64),
        c_off=np.array([c.offset for c in model.contacts],
                       dtype=np.float64).reshape(len(model.contacts), 2),
        base=model.base_link, torso=model.torso_link,
        foot=np.array(model.foot_links, dtype=np.int64),
        c_foot=c_foot,
        gravity=model.gravity,
        base_free=1 if model.base_free else 0,
        k_n=C.CONTACT_K_N, d_n=C.CONTACT_D_N, d_t=C.CONTACT_D_T, mu=C.CONTACT_MU,
    )


def _check_q(model: ModelSpec, q) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64)
    if q.shape != (3 + model.n_joints,):
        raise ValueError(
            f"expected {3 + model.n_joints} coordinates, got shape {q.shape}")
    return q


def forward_kinematics(model: ModelSpec, q, qd=None) -> LinkKinematics:
    """World pose of every link frame; with ``qd`` also all velocities."""
    pm = pack_model(model)
    q = _check_q(model, q)
    have_vel = qd is not None
    qdv = _check_q(model, qd) if have_vel else np.zeros_like(q)
    phi, ox, oz, omega, vox, voz, _, _ = K.fk_arrays(pm, q, qdv)
    cpx, cpz, cvx, cvz, _, _, _ = K.contacts_eval(pm, phi, ox, oz, omega, vox, voz)
    return LinkKinematics(
        phi=phi, origin=np.stack([ox, oz], axis=1),
        omega=omega if have_vel else None,
        origin_vel=np.stack([vox, voz], axis=1) if have_vel else None,
        contact_pos=np.stack([cpx, cpz], axis=1),
        contact_vel=np.stack([cvx, cvz], axis=1) if have_vel else None,
    )


def mass_matrix(model: ModelSpec, q) -> np.ndarray:
    """Symmetric positive definite generalized inertia, (3+nj) x (3+nj)."""
    pm = pack_model(model)
    q = _check_q(model, q)
    M = np.empty((q.size, q.size))
    K.mass_matrix_into(pm, q, M)
    return M


def bias_forces(model: ModelSpec, q, qd) -> np.ndarray:
    """Gravity plus Coriolis/centrifugal terms h, with M qdd = tau_total - h."""
    pm = pack_model(model)
    q = _check_q(model, q)
    qd = _check_q(model, qd)
    h = np.empty(q.size)
    K.bias_into(pm, q, qd, h)
    return h


def contact_forces(model: ModelSpec, q, qd):
    """Penalty contact forces at each point: (forces (C,2), active (C,))."""
    pm = pack_model(model)
    q = _check_q(model, q)
    qd = _check_q(model, qd)
    phi, ox, oz, omega, vox, voz, _, _ = K.fk_arrays(pm, q, qd)
    _, _, _, _, fx, fz, active = K.contacts_eval(pm, phi, ox, oz, omega, vox, voz)
    return np.stack([fx, fz], axis=1), np.asarray(active)


def com_state(model: ModelSpec, q, qd):
    """Whole-robot CoM (position, velocity), mass-weighted over links."""
    pm = pack_model(model)
    q = _check_q(model, q)
    qd = _check_q(model, qd)
    phi, ox, oz, omega, vox, voz, _, _ = K.fk_arrays(pm, q, qd)
    cx, cz, vcx, vcz = K.com_arrays(pm, phi, ox, oz, omega, vox, voz)
    px, pz, vx, vz = K.total_com(pm, cx, cz, vcx, vcz)
    return np.array([px, pz]), np.array([vx, vz])


def pack_external_forces(forces) -> np.ndarray:
    rows = np.zeros((len(forces), 7))
    for i, f in enumerate(forces):
        rows[i] = [f.link, f.point[0], f.point[1], f.force[0], f.force[1],
                   f.window[0], f.window[1]]
    return rows


def refresh_contacts(model: ModelSpec, state: SimState) -> SimState:
    forces, active = contact_forces(model, state.q, state.qd)
    state.contact_forces = forces
    state.contact_active = active
    return state


def step(model: ModelSpec, state: SimState, joint_torques, external_forces=(),
         dt: float = DT) -> SimState:
    """Advance one tick.  ``joint_torques`` must already respect the per-joint
    torque limits (the control layer clamps; asserted here).

    Raises :class:`IntegrationError` carrying the last valid state when the
    integration produces NaN/Inf.
    """
    pm = pack_model(model)
    tau = np.asarray(joint_torques, dtype=np.float64)
    if tau.shape != (model.n_joints,):
        raise ValueError(f"expected {model.n_joints} joint torques")
    lim = pm.torque_lim
    if np.any(np.abs(tau) > lim + 1e-9):
        raise AssertionError("joint torques exceed the actuation limits")
    ext = pack_external_forces(external_forces)
    q, qd, ok = K.tick(pm, _check_q(model, state.q), _check_q(model, state.qd),
                       state.t, tau, ext, dt)
    if not ok:
        raise IntegrationError(state.copy())
    new = SimState(q, qd, state.t + dt)
    return refresh_contacts(model, new)


def nominal_pose(model: ModelSpec) -> np.ndarray:
    """Nominal-pose coordinates: joints at their nominal angles and the base
    placed so the lowest contact point touches the ground exactly."""
    q = np.zeros(3 + model.n_joints)
    for j, spec in enumerate(model.joints):
        q[3 + j] = spec.nominal_angle
    if model.contacts:
        kin = forward_kinematics(model, q)
        q[1] = -kin.contact_pos[:, 1].min()
    return q


def nominal_state(model: ModelSpec) -> SimState:
    state = SimState(nominal_pose(model), np.zeros(3 + model.n_joints))
    return refresh_contacts(model, state)
