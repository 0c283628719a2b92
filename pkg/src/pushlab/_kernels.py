"""Compiled inner loops for the planar articulated dynamics.

Everything here operates on a flat, array-packed view of a ModelSpec (see
:func:`pushlab.dynamics.pack_model`) so the per-tick work — kinematics,
mass matrix, bias forces, penalty contacts, the semi-implicit Euler update
and the 500 Hz observation/filter pipeline — runs inside numba.

Conventions: world x horizontal, z up, gravity -z.  A link frame sits at the
link's proximal joint with +x along the segment; planar rotations are CCW.
The base frame axis points "up" at zero base pitch, i.e. its world rotation
is ``q[2] + pi/2``.  Generalized coordinates are ``[base_x, base_z,
base_pitch, joint_angles...]``.
"""

import math
from collections import namedtuple

import numpy as np
from numba import njit

# Packed model arrays.  ``anc`` lists, per link, the joint indices on the
# path from the base (padded with -1); links in ``order`` are parent-first.
PackedModel = namedtuple("PackedModel", [
    "mass", "inertia", "com_off",          # (L,)
    "parent_joint",                        # (L,) joint whose child is the link, -1 for base
    "order",                               # (L,) topological link order
    "anc", "depth",                        # (L, D), (L,)
    "j_parent", "j_child",                 # (J,)
    "anchor",                              # (J, 2)
    "mount",                               # (J,)
    "angle_lo", "angle_hi",                # (J,)
    "kp", "kd", "torque_lim", "vel_lim",   # (J,)
    "c_link",                              # (C,)
    "c_off",                               # (C, 2)
    "base", "torso",                       # link indices
    "foot",                                # (F,) foot link indices
    "c_foot",                              # (C,) which foot slot each contact belongs to
    "gravity",
    "base_free",                           # 0/1
    "k_n", "d_n", "d_t", "mu",             # contact parameters
])

_F8 = np.float64


@njit(cache=True)
def fk_arrays(pm, q, qd):
    """World pose and velocity of every link frame plus joint anchor points.

    Returns (phi, ox, oz, omega, vox, voz, jax, jaz); the j* arrays are the
    world positions of each joint's anchor (its rotation axis).
    """
    L = pm.mass.shape[0]
    J = pm.mount.shape[0]
    phi = np.empty(L, dtype=_F8)
    ox = np.empty(L, dtype=_F8)
    oz = np.empty(L, dtype=_F8)
    omega = np.empty(L, dtype=_F8)
    vox = np.empty(L, dtype=_F8)
    voz = np.empty(L, dtype=_F8)
    jax = np.empty(J, dtype=_F8)
    jaz = np.empty(J, dtype=_F8)

    for idx in range(L):
        link = pm.order[idx]
        ji = pm.parent_joint[link]
        if ji < 0:
            phi[link] = q[2] + 0.5 * math.pi
            ox[link] = q[0]
            oz[link] = q[1]
            omega[link] = qd[2]
            vox[link] = qd[0]
            voz[link] = qd[1]
        else:
            p = pm.j_parent[ji]
            cp = math.cos(phi[p])
            sp = math.sin(phi[p])
            rx = cp * pm.anchor[ji, 0] - sp * pm.anchor[ji, 1]
            rz = sp * pm.anchor[ji, 0] + cp * pm.anchor[ji, 1]
            jax[ji] = ox[p] + rx
            jaz[ji] = oz[p] + rz
            phi[link] = phi[p] + pm.mount[ji] + q[3 + ji]
            ox[link] = jax[ji]
            oz[link] = jaz[ji]
            omega[link] = omega[p] + qd[3 + ji]
            vox[link] = vox[p] - omega[p] * rz
            voz[link] = voz[p] + omega[p] * rx
    return phi, ox, oz, omega, vox, voz, jax, jaz


@njit(cache=True)
def com_arrays(pm, phi, ox, oz, omega, vox, voz):
    """Per-link CoM world positions and velocities."""
    L = pm.mass.shape[0]
    cx = np.empty(L, dtype=_F8)
    cz = np.empty(L, dtype=_F8)
    vcx = np.empty(L, dtype=_F8)
    vcz = np.empty(L, dtype=_F8)
    for i in range(L):
        rx = math.cos(phi[i]) * pm.com_off[i]
        rz = math.sin(phi[i]) * pm.com_off[i]
        cx[i] = ox[i] + rx
        cz[i] = oz[i] + rz
        vcx[i] = vox[i] - omega[i] * rz
        vcz[i] = voz[i] + omega[i] * rx
    return cx, cz, vcx, vcz


@njit(cache=True)
def total_com(pm, cx, cz, vcx, vcz):
    m_tot = 0.0
    px = 0.0
    pz = 0.0
    vx = 0.0
    vz = 0.0
    for i in range(pm.mass.shape[0]):
        m = pm.mass[i]
        m_tot += m
        px += m * cx[i]
        pz += m * cz[i]
        vx += m * vcx[i]
        vz += m * vcz[i]
    return px / m_tot, pz / m_tot, vx / m_tot, vz / m_tot


@njit(cache=True)
def mass_matrix_into(pm, q, M):
    """Generalized inertia via per-link CoM Jacobians (sum of Gram matrices)."""
    n = M.shape[0]
    qd0 = np.zeros(n, dtype=_F8)
    phi, ox, oz, _, _, _, jax, jaz = fk_arrays(pm, q, qd0)
    L = pm.mass.shape[0]
    M[:, :] = 0.0
    # up to 3 + depth coordinate columns per link
    D = pm.anc.shape[1]
    cols = np.empty((3 + D, 3), dtype=_F8)  # (coord index, Jx, Jz)
    for i in range(L):
        cxi = ox[i] + math.cos(phi[i]) * pm.com_off[i]
        czi = oz[i] + math.sin(phi[i]) * pm.com_off[i]
        nc = 0
        cols[nc, 0] = 0.0
        cols[nc, 1] = 1.0
        cols[nc, 2] = 0.0
        nc += 1
        cols[nc, 0] = 1.0
        cols[nc, 1] = 0.0
        cols[nc, 2] = 1.0
        nc += 1
        # base pitch rotates about the base origin
        cols[nc, 0] = 2.0
        cols[nc, 1] = -(czi - oz[pm.base])
        cols[nc, 2] = cxi - ox[pm.base]
        nc += 1
        for d in range(pm.depth[i]):
            ji = pm.anc[i, d]
            cols[nc, 0] = 3.0 + ji
            cols[nc, 1] = -(czi - jaz[ji])
            cols[nc, 2] = cxi - jax[ji]
            nc += 1
        m = pm.mass[i]
        inertia = pm.inertia[i]
        for a in range(nc):
            ka = int(cols[a, 0])
            for b in range(nc):
                kb = int(cols[b, 0])
                M[ka, kb] += m * (cols[a, 1] * cols[b, 1] + cols[a, 2] * cols[b, 2])
                if a >= 2 and b >= 2:  # both rotational coordinates
                    M[ka, kb] += inertia


@njit(cache=True)
def bias_into(pm, q, qd, h):
    """Gravity + velocity-product generalized forces (inverse dynamics at
    zero acceleration).  Planar links have no gyroscopic angular term."""
    phi, ox, oz, omega, vox, voz, jax, jaz = fk_arrays(pm, q, qd)
    L = pm.mass.shape[0]
    # frame-origin accelerations with qdd = 0: a_child = a_parent - w_p^2 * r
    aox = np.empty(L, dtype=_F8)
    aoz = np.empty(L, dtype=_F8)
    for idx in range(L):
        link = pm.order[idx]
        ji = pm.parent_joint[link]
        if ji < 0:
            aox[link] = 0.0
            aoz[link] = 0.0
        else:
            p = pm.j_parent[ji]
            cp = math.cos(phi[p])
            sp = math.sin(phi[p])
            rx = cp * pm.anchor[ji, 0] - sp * pm.anchor[ji, 1]
            rz = sp * pm.anchor[ji, 0] + cp * pm.anchor[ji, 1]
            w2 = omega[p] * omega[p]
            aox[link] = aox[p] - w2 * rx
            aoz[link] = aoz[p] - w2 * rz
    h[:] = 0.0
    g = pm.gravity
    for i in range(L):
        rx = math.cos(phi[i]) * pm.com_off[i]
        rz = math.sin(phi[i]) * pm.com_off[i]
        cxi = ox[i] + rx
        czi = oz[i] + rz
        # effective force m * (a_com - g_vec)
        fx = pm.mass[i] * (aox[i] - omega[i] * omega[i] * rx)
        fz = pm.mass[i] * (aoz[i] - omega[i] * omega[i] * rz + g)
        h[0] += fx
        h[1] += fz
        h[2] += -(czi - oz[pm.base]) * fx + (cxi - ox[pm.base]) * fz
        for d in range(pm.depth[i]):
            ji = pm.anc[i, d]
            h[3 + ji] += -(czi - jaz[ji]) * fx + (cxi - jax[ji]) * fz


@njit(cache=True)
def contacts_eval(pm, phi, ox, oz, omega, vox, voz):
    """Contact point world kinematics and penalty forces.

    Normal: f_z = max(0, -k_n z - d_n zdot) for z < 0, else 0.  Tangential:
    -d_t xdot clamped to the friction cone |f_x| <= mu f_z.
    """
    C = pm.c_link.shape[0]
    px = np.empty(C, dtype=_F8)
    pz = np.empty(C, dtype=_F8)
    vx = np.empty(C, dtype=_F8)
    vz = np.empty(C, dtype=_F8)
    fx = np.zeros(C, dtype=_F8)
    fz = np.zeros(C, dtype=_F8)
    active = np.zeros(C, dtype=np.bool_)
    for c in range(C):
        link = pm.c_link[c]
        cp = math.cos(phi[link])
        sp = math.sin(phi[link])
        rx = cp * pm.c_off[c, 0] - sp * pm.c_off[c, 1]
        rz = sp * pm.c_off[c, 0] + cp * pm.c_off[c, 1]
        px[c] = ox[link] + rx
        pz[c] = oz[link] + rz
        vx[c] = vox[link] - omega[link] * rz
        vz[c] = voz[link] + omega[link] * rx
        if pz[c] < 0.0:
            fn = -pm.k_n * pz[c] - pm.d_n * vz[c]
            if fn > 0.0:
                ft = -pm.d_t * vx[c]
                cone = pm.mu * fn
                if ft > cone:
                    ft = cone
                elif ft < -cone:
                    ft = -cone
                fx[c] = ft
                fz[c] = fn
                active[c] = True
    return px, pz, vx, vz, fx, fz, active


@njit(cache=True)
def add_point_force(pm, link, jax, jaz, obx, obz, px, pz, fx, fz, tau):
    """Accumulate the generalized force of a world force at a point on a link."""
    tau[0] += fx
    tau[1] += fz
    tau[2] += -(pz - obz) * fx + (px - obx) * fz
    for d in range(pm.depth[link]):
        ji = pm.anc[link, d]
        tau[3 + ji] += -(pz - jaz[ji]) * fx + (px - jax[ji]) * fz


@njit(cache=True)
def solve_accel(pm, M, rhs):
    n = rhs.shape[0]
    qdd = np.zeros(n, dtype=_F8)
    if pm.base_free == 1:
        qdd[:] = np.linalg.solve(M, rhs)
    else:
        Mj = np.ascontiguousarray(M[3:, 3:])
        qdd[3:] = np.linalg.solve(Mj, np.ascontiguousarray(rhs[3:]))
    return qdd


@njit(cache=True)
def tick(pm, q, qd, t, tau_j, ext, dt):
    """One semi-implicit Euler step.  ``ext`` rows are
    (link, point_x, point_z, force_x, force_z, t_start, t_end) with the
    point in the link frame and the force in world axes; a row is applied
    when t_start <= t < t_end.

    Returns (q', qd', ok); ok is False when the new state is non-finite,
    in which case the inputs are returned unchanged.
    """
    n = q.shape[0]
    phi, ox, oz, omega, vox, voz, jax, jaz = fk_arrays(pm, q, qd)
    cpx, cpz, _, _, cfx, cfz, _ = contacts_eval(pm, phi, ox, oz, omega, vox, voz)

    tau = np.zeros(n, dtype=_F8)
    for j in range(pm.mount.shape[0]):
        tau[3 + j] += tau_j[j]
    for c in range(pm.c_link.shape[0]):
        if cfz[c] != 0.0 or cfx[c] != 0.0:
            add_point_force(pm, pm.c_link[c], jax, jaz, ox[pm.base], oz[pm.base],
                            cpx[c], cpz[c], cfx[c], cfz[c], tau)
    for e in range(ext.shape[0]):
        if ext[e, 5] <= t and t < ext[e, 6]:
            link = int(ext[e, 0])
            cp = math.cos(phi[link])
            sp = math.sin(phi[link])
            pxe = ox[link] + cp * ext[e, 1] - sp * ext[e, 2]
            pze = oz[link] + sp * ext[e, 1] + cp * ext[e, 2]
            add_point_force(pm, link, jax, jaz, ox[pm.base], oz[pm.base],
                            pxe, pze, ext[e, 3], ext[e, 4], tau)

    M = np.empty((n, n), dtype=_F8)
    mass_matrix_into(pm, q, M)
    h = np.empty(n, dtype=_F8)
    bias_into(pm, q, qd, h)
    qdd = solve_accel(pm, M, tau - h)

    q_new = np.empty(n, dtype=_F8)
    qd_new = np.empty(n, dtype=_F8)
    for k in range(n):
        qd_new[k] = qd[k] + qdd[k] * dt
    if pm.base_free == 0:
        qd_new[0] = 0.0
        qd_new[1] = 0.0
        qd_new[2] = 0.0
    for k in range(n):
        q_new[k] = q[k] + qd_new[k] * dt

    # hard joint stops: clamp angle, zero the into-stop velocity
    for j in range(pm.mount.shape[0]):
        k = 3 + j
        if q_new[k] < pm.angle_lo[j]:
            q_new[k] = pm.angle_lo[j]
            if qd_new[k] < 0.0:
                qd_new[k] = 0.0
        elif q_new[k] > pm.angle_hi[j]:
            q_new[k] = pm.angle_hi[j]
            if qd_new[k] > 0.0:
                qd_new[k] = 0.0

    ok = True
    for k in range(n):
        if not (math.isfinite(q_new[k]) and math.isfinite(qd_new[k])):
            ok = False
            break
    if not ok:
        return q.copy(), qd.copy(), False
    return q_new, qd_new, True


# ---------------------------------------------------------------------------
# environment inner loop: PD control, disturbances, observation filtering
# ---------------------------------------------------------------------------
# Observation layout (per plane, nj actuated joints, F=2 feet):
#   [0:nj]            joint angles
#   [nj:2nj]          joint velocities
#   +2                pelvis linear velocity (world x, z)
#   +1                pelvis pitch (0 = upright)
#   +1                pelvis pitch rate
#   +2                CoM velocity (world)
#   +2                CoM position relative to pelvis origin
#   +2F               per-foot contact force (x, z), summed over the foot's points
#   +2                torso CoM relative to pelvis origin
#   +2F               per-foot ankle position relative to pelvis origin

@njit(cache=True)
def obs_into(pm, q, qd, phi, ox, oz, omega, vox, voz, cfx, cfz, out):
    nj = pm.mount.shape[0]
    for j in range(nj):
        out[j] = q[3 + j]
        out[nj + j] = qd[3 + j]
    i = 2 * nj
    out[i] = qd[0]
    out[i + 1] = qd[1]
    out[i + 2] = q[2]
    out[i + 3] = qd[2]
    cx, cz, vcx, vcz = com_arrays(pm, phi, ox, oz, omega, vox, voz)
    comx, comz, comvx, comvz = total_com(pm, cx, cz, vcx, vcz)
    out[i + 4] = comvx
    out[i + 5] = comvz
    out[i + 6] = comx - q[0]
    out[i + 7] = comz - q[1]
    i += 8
    F = pm.foot.shape[0]
    for f in range(F):
        out[i + 2 * f] = 0.0
        out[i + 2 * f + 1] = 0.0
    for c in range(pm.c_link.shape[0]):
        f = pm.c_foot[c]
        out[i + 2 * f] += cfx[c]
        out[i + 2 * f + 1] += cfz[c]
    i += 2 * F
    out[i] = cx[pm.torso] - q[0]
    out[i + 1] = cz[pm.torso] - q[1]
    i += 2
    for f in range(F):
        foot = pm.foot[f]
        out[i + 2 * f] = ox[foot] - q[0]
        out[i + 2 * f + 1] = oz[foot] - q[1]


@njit(cache=True)
def substeps(pm, q, qd, t, targets, ext, dt, n_sub, filt_y, filt_a,
             obs_noise, pelvis_min_z, pelvis_radius, torso_radius,
             log_tau, log_qdj, log_cact, log_cfx, log_cfz, log_footx, log_footz):
    """Run ``n_sub`` 500 Hz control ticks holding one policy action.

    Per tick: PD torques toward ``targets`` (clamped to the actuation limit),
    scheduled external forces, one integrator step, then the raw observation
    is sampled, perturbed by ``obs_noise`` (one pre-drawn row per tick; pass
    a (0, 0) array to disable) and fed through the first-order low-pass whose
    state ``filt_y`` persists across calls.

    Stops early on termination events.  Returns
    (q, qd, t, ticks_done, reason) with reason 0 = ran to the end,
    1 = body ground contact, 2 = pelvis below threshold, 3 = non-finite
    state.  Log arrays are filled up to ticks_done.
    """
    nj = pm.mount.shape[0]
    n_obs = filt_y.shape[0]
    raw = np.empty(n_obs, dtype=_F8)
    reason = 0
    ticks = 0
    for k in range(n_sub):
        # PD torques at the pre-tick state
        tau_j = np.empty(nj, dtype=_F8)
        for j in range(nj):
            u = pm.kp[j] * (targets[j] - q[3 + j]) - pm.kd[j] * qd[3 + j]
            if u > pm.torque_lim[j]:
                u = pm.torque_lim[j]
            elif u < -pm.torque_lim[j]:
                u = -pm.torque_lim[j]
            tau_j[j] = u
        q, qd, ok = tick(pm, q, qd, t, tau_j, ext, dt)
        t += dt
        if not ok:
            reason = 3
            break
        ticks = k + 1

        # post-tick kinematics: logs, observation sample, termination checks
        phi, ox, oz, omega, vox, voz, _, _ = fk_arrays(pm, q, qd)
        px, pz, vx, vz, cfx, cfz, cact = contacts_eval(pm, phi, ox, oz, omega, vox, voz)
        for j in range(nj):
            log_tau[k, j] = tau_j[j]
            log_qdj[k, j] = qd[3 + j]
        for c in range(cact.shape[0]):
            log_cact[k, c] = cact[c]
            log_cfx[k, c] = cfx[c]
            log_cfz[k, c] = cfz[c]
        for f in range(pm.foot.shape[0]):
            log_footx[k, f] = ox[pm.foot[f]]
            log_footz[k, f] = oz[pm.foot[f]]

        obs_into(pm, q, qd, phi, ox, oz, omega, vox, voz, cfx, cfz, raw)
        if obs_noise.shape[0] > 0:
            for m in range(n_obs):
                raw[m] += obs_noise[k, m]
        for m in range(n_obs):
            filt_y[m] = filt_a * filt_y[m] + (1.0 - filt_a) * raw[m]

        cx, cz, _, _ = com_arrays(pm, phi, ox, oz, omega, vox, voz)
        if cz[pm.base] < pelvis_radius or cz[pm.torso] < torso_radius:
            reason = 1
            break
        if q[1] < pelvis_min_z:
            reason = 2
            break
    return q, qd, t, ticks, reason
