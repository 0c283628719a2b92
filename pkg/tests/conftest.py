import numpy as np
import pytest

from pushlab.model import LinkSpec, JointSpec, ModelSpec, validate_model
from pushlab import builtin_model


def make_pendulum(base_free=False, mass=1.0, length=1.0, inertia=None,
                  gravity=9.81, mount=-np.pi):
    """Rod on a pin: a tiny base body plus one rod link.

    With ``mount=-pi`` the rod hangs straight down at zero joint angle; the
    joint coordinate is q[3].  Pinning the base (default) freezes the base
    coordinates, giving classic pendulum dynamics.
    """
    if inertia is None:
        inertia = mass * length**2 / 12.0
    links = (
        LinkSpec("pivot", 1.0, 0.01, 0.01, 0.0, None),
        LinkSpec("rod", mass, inertia, length, length / 2.0, 0),
    )
    joints = (
        JointSpec("pin", 0, 1, (0.0, 0.0), mount, (-50.0, 50.0), 1e3, 1e6,
                  1.0, 0.0, 0.0),
    )
    return validate_model(ModelSpec(links, joints, (), gravity, 0, 0, (),
                                    "sagittal", base_free))


@pytest.fixture(scope="session")
def sagittal():
    return builtin_model("sagittal")


@pytest.fixture(scope="session")
def frontal():
    return builtin_model("frontal")
