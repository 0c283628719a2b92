"""Planar biped robot descriptions.

A robot is a tree of rigid links in a vertical plane.  Each link is a segment
whose frame sits at its proximal joint with the x-axis along the segment;
joints are revolute about the out-of-plane axis and carry their own anchor
point on the parent plus a fixed mount rotation, so a single convention covers
both the sagittal (pitch) and frontal (roll) robots.

Two builtin variants are provided: ``sagittal`` (pelvis, torso, two
thigh/shank/foot legs; 7 actuated pitch joints) and ``frontal`` (torso welded
to the pelvis, rigid legs; 4 actuated roll joints).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict

from . import constants as C


class ModelError(ValueError):
    """A model file or spec violates an invariant."""


@dataclass(frozen=True)
class LinkSpec:
    """One rigid segment.  ``com_offset`` is measured along the link axis from
    the proximal joint; ``parent`` is a link index or None for the base."""

    name: str
    mass: float
    inertia: float
    length: float
    com_offset: float
    parent: int | None


@dataclass(frozen=True)
class JointSpec:
    """Revolute joint between two links.

    ``parent_anchor`` locates the joint in the parent link frame and
    ``mount_angle`` is the fixed rotation from the parent axis to the child
    axis at zero joint angle (the segment layout at the zero pose).
    """

    name: str
    parent_link: int
    child_link: int
    parent_anchor: tuple[float, float]
    mount_angle: float
    angle_limits: tuple[float, float]
    velocity_limit: float
    torque_limit: float
    kp: float
    kd: float
    nominal_angle: float


@dataclass(frozen=True)
class ContactPointSpec:
    """Ground contact point on a foot link, offset in the link frame."""

    link: int
    offset: tuple[float, float]
    label: str  # "heel" | "toe"


@dataclass(frozen=True)
class ModelSpec:
    """Validated planar robot: links, joints, contacts, and key link roles.

    Immutable after construction; safe to share across rollout workers.
    ``base_free`` selects floating-base dynamics (default); pinning the base
    is used by test fixtures such as pendulums.
    """

    links: tuple[LinkSpec, ...]
    joints: tuple[JointSpec, ...]
    contacts: tuple[ContactPointSpec, ...]
    gravity: float
    base_link: int
    torso_link: int
    foot_links: tuple[int, int]
    plane: str  # "sagittal" | "frontal"
    base_free: bool = True

    @property
    def n_joints(self) -> int:
        return len(self.joints)

    @property
    def n_coords(self) -> int:
        """Generalized coordinates: base (x, z, pitch) + joint angles.  A
        pinned base keeps its three coordinates frozen rather than dropping
        them, so the layout never changes."""
        return 3 + len(self.joints)

    @property
    def total_mass(self) -> float:
        return sum(l.mass for l in self.links)

    def link_index(self, name: str) -> int:
        for i, l in enumerate(self.links):
            if l.name == name:
                return i
        raise KeyError(name)

    def children(self, link: int) -> list[int]:
        return [j.child_link for j in self.joints if j.parent_link == link]


def validate_model(model: ModelSpec) -> ModelSpec:
    """Check every invariant; raises ModelError naming the violated one."""
    n = len(model.links)
    for l in model.links:
        if not l.mass > 0:
            raise ModelError(f"link '{l.name}': mass > 0 violated")
        if not l.inertia > 0:
            raise ModelError(f"link '{l.name}': inertia > 0 violated")
        if not (0 <= l.com_offset <= l.length):
            raise ModelError(f"link '{l.name}': 0 <= com_offset <= length violated")

    for j in model.joints:
        if not (0 <= j.parent_link < n and 0 <= j.child_link < n):
            raise ModelError(f"joint '{j.name}': link index out of range")
        if not j.angle_limits[0] < j.angle_limits[1]:
            raise ModelError(f"joint '{j.name}': angle_limits[0] < angle_limits[1] violated")
        if not j.velocity_limit > 0:
            raise ModelError(f"joint '{j.name}': velocity_limit > 0 violated")
        if not j.torque_limit > 0:
            raise ModelError(f"joint '{j.name}': torque_limit > 0 violated")
        if not j.kp > 0:
            raise ModelError(f"joint '{j.name}': Kp > 0 violated")
        if not j.kd >= 0:
            raise ModelError(f"joint '{j.name}': Kd >= 0 violated")
        if not j.angle_limits[0] <= j.nominal_angle <= j.angle_limits[1]:
            raise ModelError(f"joint '{j.name}': nominal_angle within angle_limits violated")

    # Tree structure: every non-base link is the child of exactly one joint,
    # parents agree with the link records, and walking up always reaches base.
    if not 0 <= model.base_link < n:
        raise ModelError("base_link out of range")
    parent_joint = [None] * n
    for ji, j in enumerate(model.joints):
        if j.child_link == model.base_link:
            raise ModelError("joints form a tree violated: base link has a parent joint")
        if parent_joint[j.child_link] is not None:
            raise ModelError(
                f"joints form a tree violated: link '{model.links[j.child_link].name}'"
                " has more than one parent joint"
            )
        parent_joint[j.child_link] = ji
        if model.links[j.child_link].parent != j.parent_link:
            raise ModelError(
                f"link '{model.links[j.child_link].name}': parent field disagrees with joint graph"
            )
    if model.links[model.base_link].parent is not None:
        raise ModelError("base link must have parent None")
    for i in range(n):
        if i != model.base_link and parent_joint[i] is None:
            raise ModelError(
                f"joints form a tree violated: link '{model.links[i].name}' is unreachable"
            )
    for i in range(n):
        seen = set()
        cur = i
        while cur != model.base_link:
            if cur in seen:
                raise ModelError("joints form a tree violated: cycle detected")
            seen.add(cur)
            cur = model.joints[parent_joint[cur]].parent_link

    for f in model.foot_links:
        heels = [c for c in model.contacts if c.link == f and c.label == "heel"]
        toes = [c for c in model.contacts if c.link == f and c.label == "toe"]
        if len(heels) != 1 or len(toes) != 1:
            raise ModelError(
                f"foot link '{model.links[f].name}' must have exactly one heel and one toe"
            )
        if not toes[0].offset[0] > heels[0].offset[0]:
            raise ModelError(
                f"foot link '{model.links[f].name}': toe offset must be distal of heel offset"
            )
        if model.children(f):
            raise ModelError(f"foot link '{model.links[f].name}' must be a leaf")
    for c in model.contacts:
        if c.link not in model.foot_links:
            raise ModelError("contact points may only sit on foot links")
        if c.label not in ("heel", "toe"):
            raise ModelError(f"contact label must be heel or toe, got '{c.label}'")

    if not model.gravity > 0:
        raise ModelError("gravity > 0 violated")
    if model.plane not in ("sagittal", "frontal"):
        raise ModelError(f"plane must be sagittal or frontal, got '{model.plane}'")
    return model


# ---------------------------------------------------------------------------
# builtin robots
# ---------------------------------------------------------------------------

def builtin_model(variant: str = "sagittal") -> ModelSpec:
    """Builtin 137 kg planar biped; ``variant`` is "sagittal" or "frontal".

    Both variants stand with the CoM at 1.1 m.  All numbers come from
    :mod:`pushlab.constants`.
    """
    if variant == "sagittal":
        return _sagittal_model()
    if variant == "frontal":
        return _frontal_model()
    raise ModelError(f"unknown variant '{variant}'")


def _sagittal_model() -> ModelSpec:
    kd = C.KD_FRACTION
    links = [
        LinkSpec("pelvis", C.PELVIS_MASS, C.PELVIS_INERTIA, C.PELVIS_SEGMENT,
                 C.PELVIS_COM_OFFSET, None),
        LinkSpec("torso", C.TORSO_MASS, C.TORSO_INERTIA, C.TORSO_SEGMENT,
                 C.TORSO_COM_OFFSET, 0),
    ]
    joints = [
        JointSpec("torso_pitch", 0, 1, (C.PELVIS_SEGMENT, 0.0), 0.0,
                  C.TORSO_LIMITS, C.TORSO_VEL, C.TORSO_TORQUE,
                  C.KP_TORSO, C.KP_TORSO * kd, 0.0),
    ]
    contacts = []
    foot_links = []
    for side in ("l", "r"):
        thigh = len(links)
        links.append(LinkSpec(f"{side}_thigh", C.THIGH_MASS, C.THIGH_INERTIA,
                              C.THIGH_LENGTH, C.THIGH_COM_OFFSET, 0))
        joints.append(JointSpec(f"{side}_hip_pitch", 0, thigh, (0.0, 0.0), math.pi,
                                C.HIP_PITCH_LIMITS, C.HIP_VEL, C.HIP_TORQUE,
                                C.KP_HIP, C.KP_HIP * kd, 0.0))
        shank = len(links)
        links.append(LinkSpec(f"{side}_shank", C.SHANK_MASS, C.SHANK_INERTIA,
                              C.SHANK_LENGTH, C.SHANK_COM_OFFSET, thigh))
        joints.append(JointSpec(f"{side}_knee_pitch", thigh, shank,
                                (C.THIGH_LENGTH, 0.0), 0.0,
                                C.KNEE_LIMITS, C.KNEE_VEL, C.KNEE_TORQUE,
                                C.KP_KNEE, C.KP_KNEE * kd, 0.0))
        foot = len(links)
        links.append(LinkSpec(f"{side}_foot", C.FOOT_MASS, C.FOOT_INERTIA,
                              2 * C.FOOT_HALF_LENGTH, C.FOOT_COM_OFFSET, shank))
        joints.append(JointSpec(f"{side}_ankle_pitch", shank, foot,
                                (C.SHANK_LENGTH, 0.0), math.pi / 2,
                                C.ANKLE_PITCH_LIMITS, C.ANKLE_VEL, C.ANKLE_TORQUE,
                                C.KP_ANKLE, C.KP_ANKLE * kd, 0.0))
        contacts.append(ContactPointSpec(foot, (-C.FOOT_HALF_LENGTH, -C.ANKLE_HEIGHT), "heel"))
        contacts.append(ContactPointSpec(foot, (C.FOOT_HALF_LENGTH, -C.ANKLE_HEIGHT), "toe"))
        foot_links.append(foot)

    return validate_model(ModelSpec(
        links=tuple(links), joints=tuple(joints), contacts=tuple(contacts),
        gravity=C.GRAVITY, base_link=0, torso_link=1,
        foot_links=tuple(foot_links), plane="sagittal",
    ))


def _frontal_model() -> ModelSpec:
    # Torso welded into the pelvis body; legs rigid hip-to-ankle (lateral
    # recovery uses hip/ankle roll only, and stepping is blocked laterally).
    kd = C.KD_FRACTION
    links = [
        LinkSpec("pelvis", C.FRONTAL_PELVIS_MASS, C.FRONTAL_PELVIS_INERTIA,
                 C.PELVIS_SEGMENT + C.TORSO_SEGMENT, C.FRONTAL_PELVIS_COM_OFFSET, None),
    ]
    joints = []
    contacts = []
    foot_links = []
    # Pelvis axis points up; the in-plane perpendicular at the nominal pose
    # maps frame (0, -d) to world (+d, 0).
    for side, lateral in (("l", C.STANCE_HALF_WIDTH), ("r", -C.STANCE_HALF_WIDTH)):
        leg = len(links)
        links.append(LinkSpec(f"{side}_leg", C.LEG_MASS, C.LEG_INERTIA,
                              C.LEG_LENGTH, C.LEG_COM_OFFSET, 0))
        joints.append(JointSpec(f"{side}_hip_roll", 0, leg, (0.0, -lateral), math.pi,
                                C.HIP_ROLL_LIMITS, C.HIP_VEL, C.HIP_TORQUE,
                                C.KP_HIP, C.KP_HIP * kd, 0.0))
        foot = len(links)
        links.append(LinkSpec(f"{side}_foot", C.FOOT_MASS, C.FRONTAL_FOOT_INERTIA,
                              2 * C.FOOT_HALF_WIDTH, C.FOOT_COM_OFFSET, leg))
        joints.append(JointSpec(f"{side}_ankle_roll", leg, foot,
                                (C.LEG_LENGTH, 0.0), math.pi / 2,
                                C.ANKLE_ROLL_LIMITS, C.ANKLE_VEL, C.ANKLE_TORQUE,
                                C.KP_ANKLE, C.KP_ANKLE * kd, 0.0))
        contacts.append(ContactPointSpec(foot, (-C.FOOT_HALF_WIDTH, -C.ANKLE_HEIGHT), "heel"))
        contacts.append(ContactPointSpec(foot, (C.FOOT_HALF_WIDTH, -C.ANKLE_HEIGHT), "toe"))
        foot_links.append(foot)

    return validate_model(ModelSpec(
        links=tuple(links), joints=tuple(joints), contacts=tuple(contacts),
        gravity=C.GRAVITY, base_link=0, torso_link=0,
        foot_links=tuple(foot_links), plane="frontal",
    ))


# ---------------------------------------------------------------------------
# file I/O
# ---------------------------------------------------------------------------
# JSON schema: object with exactly the keys links / joints / contacts /
# gravity / plane.  Link parents and joint/contact link references are by
# name; angles in radians, SI units throughout.  The base link is the one
# with parent null; the torso role falls to a link named "torso" when
# present, else the base; foot links are the ones carrying contact points.

_LINK_KEYS = {"name", "mass", "inertia", "length", "com_offset", "parent"}
_JOINT_KEYS = {"name", "parent_link", "child_link", "parent_anchor", "mount_angle",
               "angle_limits", "velocity_limit", "torque_limit", "kp", "kd",
               "nominal_angle"}
_CONTACT_KEYS = {"link", "offset", "label"}


def _reject_unknown(obj: dict, allowed: set, where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ModelError(f"unknown keys in {where}: {sorted(unknown)}")


def load_model(path) -> ModelSpec:
    """Load and fully validate a model file; rejection is total."""
    with open(path) as f:
        try:
            raw = json.load(f)
        except json.JSONDecodeError as e:
            raise ModelError(f"malformed model file {path}: {e}") from e
    return model_from_dict(raw)


def model_from_dict(raw: dict) -> ModelSpec:
    if not isinstance(raw, dict):
        raise ModelError("model file must be a JSON object")
    _reject_unknown(raw, {"links", "joints", "contacts", "gravity", "plane"}, "model")
    for key in ("links", "joints", "contacts", "gravity", "plane"):
        if key not in raw:
            raise ModelError(f"model file missing key '{key}'")

    names = [l.get("name") for l in raw["links"]]
    if len(set(names)) != len(names):
        raise ModelError("duplicate link names")

    def link_id(name, where):
        if name not in names:
            raise ModelError(f"{where} references unknown link '{name}'")
        return names.index(name)

    links = []
    for l in raw["links"]:
        _reject_unknown(l, _LINK_KEYS, f"link '{l.get('name')}'")
        parent = None if l["parent"] is None else link_id(l["parent"], f"link '{l['name']}'")
        links.append(LinkSpec(l["name"], float(l["mass"]), float(l["inertia"]),
                              float(l["length"]), float(l["com_offset"]), parent))

    joints = []
    for j in raw["joints"]:
        _reject_unknown(j, _JOINT_KEYS, f"joint '{j.get('name')}'")
        joints.append(JointSpec(
            j["name"],
            link_id(j["parent_link"], f"joint '{j['name']}'"),
            link_id(j["child_link"], f"joint '{j['name']}'"),
            tuple(float(v) for v in j["parent_anchor"]),
            float(j["mount_angle"]),
            tuple(float(v) for v in j["angle_limits"]),
            float(j["velocity_limit"]), float(j["torque_limit"]),
            float(j["kp"]), float(j["kd"]), float(j["nominal_angle"]),
        ))

    contacts = []
    for c in raw["contacts"]:
        _reject_unknown(c, _CONTACT_KEYS, "contact")
        contacts.append(ContactPointSpec(
            link_id(c["link"], "contact"),
            tuple(float(v) for v in c["offset"]), c["label"]))

    bases = [i for i, l in enumerate(links) if l.parent is None]
    if len(bases) != 1:
        raise ModelError("exactly one link must have parent null")
    base = bases[0]
    torso = names.index("torso") if "torso" in names else base
    foot_links = sorted({c.link for c in contacts})
    if len(foot_links) != 2:
        raise ModelError("contacts must cover exactly two foot links")

    return validate_model(ModelSpec(
        links=tuple(links), joints=tuple(joints), contacts=tuple(contacts),
        gravity=float(raw["gravity"]), base_link=base, torso_link=torso,
        foot_links=tuple(foot_links), plane=raw["plane"],
    ))


def model_to_dict(model: ModelSpec) -> dict:
    names = [l.name for l in model.links]
    return {
        "links": [
            {**asdict(l), "parent": None if l.parent is None else names[l.parent]}
            for l in model.links
        ],
        "joints": [
            {**asdict(j), "parent_link": names[j.parent_link],
             "child_link": names[j.child_link],
             "parent_anchor": list(j.parent_anchor),
             "angle_limits": list(j.angle_limits)}
            for j in model.joints
        ],
        "contacts": [
            {"link": names[c.link], "offset": list(c.offset), "label": c.label}
            for c in model.contacts
        ],
        "gravity": model.gravity,
        "plane": model.plane,
    }


def save_model(model: ModelSpec, path) -> None:
    with open(path, "w") as f:
        json.dump(model_to_dict(model), f, indent=2)
        f.write("\n")


# ---------------------------------------------------------------------------
# support interval
# ---------------------------------------------------------------------------

def support_interval(model: ModelSpec, active, positions):
    """Planar support polygon of the active contacts.

    ``active`` is a per-contact boolean sequence and ``positions`` the
    matching world ground-plane coordinates (x, z).  Returns the smallest
    interval ``(x_min, x_max)`` containing all active contact x-coordinates,
    or None during flight.
    """
    if len(active) != len(model.contacts) or len(positions) != len(model.contacts):
        raise ValueError("contact state length does not match model contacts")
    xs = [p[0] for a, p in zip(active, positions) if a]
    if not xs:
        return None
    return (min(xs), max(xs))
