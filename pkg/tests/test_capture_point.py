import numpy as np
import pytest
from hypothesis import given, strategies as st

from pushlab.capture_point import (
    CpParams, capture_point, desired_com_velocity, max_rejectable_impulse,
)

VALKYRIE = CpParams(z_c=1.1, g=9.81, mass=137.0)


def simulate_lip(x0, v0, p_stance, params, t_end=10.0, dt=1e-4):
    """Independent oracle: integrate the linear inverted pendulum
    xdd = (g/z_c)(x - p) with RK4 and return the final (x, v)."""
    w2 = params.g / params.z_c
    x, v = x0, v0

    def f(s):
        return np.array([s[1], w2 * (s[0] - p_stance)])

    s = np.array([x, v])
    for _ in range(int(t_end / dt)):
        k1 = f(s)
        k2 = f(s + 0.5 * dt * k1)
        k3 = f(s + 0.5 * dt * k2)
        k4 = f(s + dt * k3)
        s = s + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return s


class TestCapturePoint:
    def test_at_rest(self):
        assert capture_point(0.0, 0.0, VALKYRIE) == 0.0

    def test_direct_value(self):
        # 0.5 * sqrt(1.1 / 9.81) = 0.1674294...
        assert capture_point(0.0, 0.5, VALKYRIE) == pytest.approx(0.167429, abs=1e-5)

    def test_lip_comes_to_rest_when_stepping_there(self):
        cp = capture_point(0.0, 0.5, VALKYRIE)
        x, v = simulate_lip(0.0, 0.5, cp, VALKYRIE, t_end=5.0)
        assert abs(v) < 1e-3 and abs(x - cp) < 1e-3
        # stepping 2 cm short instead diverges
        x_bad, v_bad = simulate_lip(0.0, 0.5, cp - 0.02, VALKYRIE, t_end=5.0)
        assert abs(v_bad) > 1.0

    def test_linearity_in_velocity(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            x, v, c = rng.uniform(-1, 1, 3)
            assert capture_point(x, 2 * v, VALKYRIE) - x == pytest.approx(
                2 * (capture_point(x, v, VALKYRIE) - x))

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            CpParams(z_c=-1.0, g=9.81, mass=137.0)


class TestMaxRejectableImpulse:
    def test_sagittal_margin(self):
        # 137 * sqrt(9.81/1.1) * 0.13 = 53.2, quoted as ~53 N*s
        j = max_rejectable_impulse(VALKYRIE, 0.13)
        assert j == pytest.approx(53.2, abs=0.05)
        assert j == pytest.approx(53.0, rel=0.01)

    def test_lateral_margin(self):
        # 0.19 m margin: 77.7, quoted as ~78 N*s
        j = max_rejectable_impulse(VALKYRIE, 0.19)
        assert j == pytest.approx(77.7, abs=0.05)
        assert j == pytest.approx(78.0, rel=0.01)

    def test_zero_margin(self):
        assert max_rejectable_impulse(VALKYRIE, 0.0) == 0.0

    @given(st.floats(0.01, 10.0), st.floats(0.0, 1.0))
    def test_linear_in_mass_and_margin(self, scale, delta):
        p2 = CpParams(z_c=1.1, g=9.81, mass=137.0 * scale)
        assert max_rejectable_impulse(p2, delta) == pytest.approx(
            scale * max_rejectable_impulse(VALKYRIE, delta))
        assert max_rejectable_impulse(VALKYRIE, 2 * delta) == pytest.approx(
            2 * max_rejectable_impulse(VALKYRIE, delta))

    def test_taller_is_weaker(self):
        js = [max_rejectable_impulse(CpParams(z, 9.81, 137.0), 0.13)
              for z in (0.8, 1.0, 1.2, 1.5)]
        assert all(a > b for a, b in zip(js, js[1:]))


class TestDesiredComVelocity:
    def test_already_captured(self):
        assert desired_com_velocity(0.2, 0.2, VALKYRIE) == 0.0

    def test_hand_value(self):
        # 0.1 * sqrt(9.81/1.1) = 0.29863
        v = desired_com_velocity(0.0, 0.1, VALKYRIE)
        assert v == pytest.approx(0.29863, abs=1e-5)

    def test_sign_convention(self):
        assert desired_com_velocity(0.3, 0.1, VALKYRIE) < 0

    @given(st.floats(-2, 2), st.floats(-2, 2))
    def test_round_trip_with_capture_point(self, x, c):
        v = desired_com_velocity(x, c, VALKYRIE)
        assert capture_point(x, v, VALKYRIE) == pytest.approx(c, abs=1e-12)
