"""Numeric constants for the builtin planar bipeds and the simulation defaults.

Everything tunable about the builtin robots lives here so the numbers can be
audited in one place.  The two robots share a mass budget of 137 kg and a
standing center-of-mass height of 1.1 m on a 1.8 m stature; the per-link
split below is a modeling choice (pelvis 30, torso 45 + 14 of lumped arm
mass, thighs 12, shanks 8, feet 4).
"""

import math

# ---------------------------------------------------------------------------
# gravity and ground contact (penalty model)
# ---------------------------------------------------------------------------

GRAVITY = 9.81  # m/s^2, magnitude; acts along -z

# Spring-damper ground: normal f = max(0, -K_N*z - D_N*zdot) below the plane,
# tangential f = -D_T*xdot clamped to the friction cone |f_t| <= MU*f_n.
# K_N is sized so full weight on one foot penetrates ~5 mm.  The dampers are
# explicit at the fixed 2 ms step, so the foot-rocking mode needs
# sum(d * r^2) * dt < 2 * I_foot; 500 N*s/m sits well inside that bound for
# both feet (heel/toe lever 0.13 m sagittal, 0.06 m frontal).
CONTACT_K_N = 1.3e5  # N/m
CONTACT_D_N = 5.0e2  # N*s/m
CONTACT_D_T = 5.0e2  # N*s/m
CONTACT_MU = 1.0

# ---------------------------------------------------------------------------
# shared geometry (meters) -- 1.8 m stature
# ---------------------------------------------------------------------------

ANKLE_HEIGHT = 0.08
SHANK_LENGTH = 0.42
THIGH_LENGTH = 0.45
PELVIS_SEGMENT = 0.20  # hip center -> waist
TORSO_SEGMENT = 0.55   # waist -> neck (head and arms lumped in)

FOOT_HALF_LENGTH = 0.13   # sagittal: heel/toe at +-0.13 around the ankle
FOOT_HALF_WIDTH = 0.06    # frontal: inner/outer edge at +-0.06 around the ankle
STANCE_HALF_WIDTH = 0.13  # frontal: ankles at +-0.13 from the pelvis center

# ---------------------------------------------------------------------------
# mass budget (kg) and rod-model inertias (kg*m^2 about own CoM)
# ---------------------------------------------------------------------------

PELVIS_MASS = 30.0
TORSO_MASS = 59.0  # 45 torso + 14 lumped arms
THIGH_MASS = 12.0
SHANK_MASS = 8.0
FOOT_MASS = 4.0
TOTAL_MASS = PELVIS_MASS + TORSO_MASS + 2 * (THIGH_MASS + SHANK_MASS + FOOT_MASS)

PELVIS_INERTIA = 0.10
TORSO_INERTIA = TORSO_MASS * TORSO_SEGMENT**2 / 12.0
THIGH_INERTIA = THIGH_MASS * THIGH_LENGTH**2 / 12.0
SHANK_INERTIA = SHANK_MASS * SHANK_LENGTH**2 / 12.0
# Foot rotational inertia assumes the mass concentrated toward heel, toe and
# ankle structure (a uniform 0.26 m plate would give 0.023, a heel/toe
# dumbbell 0.068); the value also keeps the explicit contact/PD dampers
# stable on the foot-rocking mode at the 2 ms step.
FOOT_INERTIA = 0.05

# CoM offsets along each link axis, from the proximal joint.  The torso value
# solves sum(m_i * z_i) = 137 kg * 1.1 m at the nominal pose; with the head
# and arms lumped in, the combined torso CoM sits at shoulder height.
PELVIS_COM_OFFSET = 0.10
THIGH_COM_OFFSET = 0.20
SHANK_COM_OFFSET = 0.18
FOOT_COM_OFFSET = 0.0
_HIP_HEIGHT = ANKLE_HEIGHT + SHANK_LENGTH + THIGH_LENGTH  # 0.95
_KNEE_HEIGHT = ANKLE_HEIGHT + SHANK_LENGTH                # 0.50, shank axis points down
_OTHER_MOMENT = (
    2 * FOOT_MASS * ANKLE_HEIGHT
    + 2 * SHANK_MASS * (_KNEE_HEIGHT - SHANK_COM_OFFSET)
    + 2 * THIGH_MASS * (_HIP_HEIGHT - THIGH_COM_OFFSET)
    + PELVIS_MASS * (_HIP_HEIGHT + PELVIS_COM_OFFSET)
)
COM_HEIGHT_TARGET = 1.1
TORSO_COM_OFFSET = (TOTAL_MASS * COM_HEIGHT_TARGET - _OTHER_MOMENT) / TORSO_MASS - (
    _HIP_HEIGHT + PELVIS_SEGMENT
)

# Frontal variant: torso welded into the pelvis body, knees omitted (legs are
# rigid hip-to-ankle).  Derived composite properties:
FRONTAL_PELVIS_MASS = PELVIS_MASS + TORSO_MASS
FRONTAL_PELVIS_COM_OFFSET = (
    PELVIS_MASS * PELVIS_COM_OFFSET
    + TORSO_MASS * (PELVIS_SEGMENT + TORSO_COM_OFFSET)
) / FRONTAL_PELVIS_MASS
FRONTAL_PELVIS_INERTIA = (
    PELVIS_INERTIA
    + PELVIS_MASS * (PELVIS_COM_OFFSET - FRONTAL_PELVIS_COM_OFFSET) ** 2
    + TORSO_INERTIA
    + TORSO_MASS * (PELVIS_SEGMENT + TORSO_COM_OFFSET - FRONTAL_PELVIS_COM_OFFSET) ** 2
)
LEG_LENGTH = THIGH_LENGTH + SHANK_LENGTH  # 0.87, hip to ankle
LEG_MASS = THIGH_MASS + SHANK_MASS
LEG_COM_OFFSET = (
    THIGH_MASS * THIGH_COM_OFFSET + SHANK_MASS * (THIGH_LENGTH + SHANK_COM_OFFSET)
) / LEG_MASS
LEG_INERTIA = (
    THIGH_INERTIA
    + THIGH_MASS * (THIGH_COM_OFFSET - LEG_COM_OFFSET) ** 2
    + SHANK_INERTIA
    + SHANK_MASS * (THIGH_LENGTH + SHANK_COM_OFFSET - LEG_COM_OFFSET) ** 2
)
# Roll inertia of the full 3D foot assembly about the ankle axis; also keeps
# the swing-foot ankle PD damper inside the explicit stability bound.
FRONTAL_FOOT_INERTIA = 0.03

# ---------------------------------------------------------------------------
# joint limits (angle rad, velocity rad/s, torque N*m) and PD gains
# ---------------------------------------------------------------------------
# Torque and velocity ceilings follow the full-size humanoid actuation table
# (torso 150 / hip 350 / knee 350 / ankle 205 N*m; 9.0 / 6.11 / 11 / 11 rad/s).
# PD gains are our defaults, tuned so the nominal pose settles in < 0.5 s.

TORSO_LIMITS = (-0.8, 0.8)
HIP_PITCH_LIMITS = (-0.9, 1.6)
KNEE_LIMITS = (-2.3, 0.02)
ANKLE_PITCH_LIMITS = (-0.9, 0.9)
HIP_ROLL_LIMITS = (-0.6, 0.6)
ANKLE_ROLL_LIMITS = (-0.6, 0.6)

TORSO_TORQUE = 150.0
HIP_TORQUE = 350.0
KNEE_TORQUE = 350.0
ANKLE_TORQUE = 205.0

TORSO_VEL = 9.0
HIP_VEL = 6.11
KNEE_VEL = 11.0
ANKLE_VEL = 11.0

KP_HIP, KP_KNEE, KP_ANKLE, KP_TORSO = 800.0, 600.0, 300.0, 500.0
KD_FRACTION = 1.0 / 20.0  # Kd = Kp / 20

# ---------------------------------------------------------------------------
# control hierarchy and episode defaults
# ---------------------------------------------------------------------------

CONTROL_HZ = 500
POLICY_HZ = 25
FILTER_CUTOFF_HZ = 10.0
EPISODE_SECONDS = 10.0
RESET_JOINT_PERTURBATION = 0.02  # rad, uniform

# Episode ends when the pelvis drops below this fraction of its nominal
# height, or when pelvis/torso geometrically touch the ground.
PELVIS_HEIGHT_FRACTION = 0.6
PELVIS_GROUND_RADIUS = 0.20
TORSO_GROUND_RADIUS = 0.30

# ---------------------------------------------------------------------------
# disturbance curriculum
# ---------------------------------------------------------------------------
# Training pushes span [0.5, 2.0] x the 53 N*s sagittal capture-point bound,
# repeat every 5 s, and hit the pelvis.  Evaluation pushes last 0.12 s.

CP_SAGITTAL_BOUND = 53.0  # N*s, quoted no-step bound for the reference robot
PUSH_INTERVAL = 5.0
PUSH_MAGNITUDE_RANGE = (0.5 * CP_SAGITTAL_BOUND, 2.0 * CP_SAGITTAL_BOUND)
PUSH_DURATION_TRAIN = 0.1
PUSH_DURATION_EVAL = 0.12
FIRST_PUSH_AT = 1.0

# ---------------------------------------------------------------------------
# reward shaping defaults
# ---------------------------------------------------------------------------
# Positive terms use w * exp(-alpha * err^2) with alpha = ln2 / e_half^2, so
# each term halves at its e_half error.  Positive weights sum to 1.

def _alpha(e_half: float) -> float:
    return math.log(2.0) / e_half**2

ALPHA_POSE = _alpha(0.1)       # rad
ALPHA_COM_XY = _alpha(0.05)    # m
ALPHA_COM_Z = _alpha(0.05)     # m
ALPHA_COM_VEL = _alpha(0.3)    # m/s
ALPHA_GRF = _alpha(200.0)      # N

W_POSE = 0.1         # per term (torso, pelvis)
W_COM_XY = 0.2
W_COM_Z = 0.1
W_COM_VEL_XY = 0.2
W_COM_VEL_Z = 0.1
W_GRF = 0.1          # per foot
W_POWER = -1e-4      # per watt, penalty

PENALTY_NO_FOOT_CONTACT = -2.0
PENALTY_BODY_CONTACT = -10.0

# Observation/action noise used by the robustness evaluation (off in training).
EVAL_OBS_NOISE_SIGMA = 0.5
EVAL_ACTION_NOISE_SIGMA = 0.1
