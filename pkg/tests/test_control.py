import numpy as np
import pytest

from pushlab.control import FilterState, filter_step, pd_torque
from pushlab.dynamics import SimState, step
from conftest import make_pendulum


class TestPdTorque:
    def test_equilibrium_zero(self):
        assert pd_torque(0.4, 0.4, 0.0, (100.0, 10.0), 50.0) == 0.0

    def test_hand_evaluated(self):
        # 100 * (0.5 - 0.3) - 10 * 1.0 = 10.0
        assert pd_torque(0.5, 0.3, 1.0, (100.0, 10.0), 500.0) == pytest.approx(10.0)

    def test_clamped_to_ankle_limit(self):
        # commanded 400 N*m against the 205 ankle-pitch ceiling
        u = pd_torque(2.0, 0.0, 0.0, (200.0, 10.0), 205.0)
        assert u == 205.0

    def test_monotone_in_error_and_velocity(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            e1, e2 = sorted(rng.uniform(-0.3, 0.3, 2))
            v = rng.uniform(-1, 1)
            assert pd_torque(e1, 0, v, (100, 10), 1e3) <= pd_torque(e2, 0, v, (100, 10), 1e3)
            v1, v2 = sorted(rng.uniform(-1, 1, 2))
            e = rng.uniform(-0.3, 0.3)
            assert pd_torque(e, 0, v1, (100, 10), 1e3) >= pd_torque(e, 0, v2, (100, 10), 1e3)

    def test_always_within_limit(self):
        rng = np.random.default_rng(4)
        u = pd_torque(rng.uniform(-9, 9, 500), 0.0, rng.uniform(-9, 9, 500),
                      (800.0, 40.0), 350.0)
        assert np.all(np.abs(u) <= 350.0)

    def test_overdamped_pendulum_no_overshoot(self):
        # Kd^2 >= 4 Kp I about the pin (I = 1/3): critically+ damped hold
        m = make_pendulum()
        kp, kd = 30.0, 2.0 * np.sqrt(30.0 / 3.0)  # kd^2 = 4 kp I
        target = 0.4
        st = SimState(np.zeros(4), np.zeros(4))
        overshoot = False
        for _ in range(4000):
            u = pd_torque(target, st.q[3], st.qd[3], (kp, kd), 1e5)
            # cancel gravity so the linear analysis applies
            g_tau = 9.81 * 0.5 * np.sin(st.q[3])
            st = step(m, st, np.array([u + g_tau]))
            if st.q[3] > target + 1e-6:
                overshoot = True
        assert not overshoot
        assert st.q[3] == pytest.approx(target, abs=1e-3)


class TestFilter:
    def make(self):
        return FilterState(cutoff_hz=10.0, sample_hz=500.0)

    def test_smoothing_coefficient_invariant(self):
        fs = self.make()
        assert 0 < fs.a < 1
        assert fs.a == pytest.approx(np.exp(-2 * np.pi * 10.0 / 500.0))

    def test_first_sample_initializes(self):
        fs, y = filter_step(self.make(), np.array([3.0, -1.0]))
        np.testing.assert_array_equal(y, [3.0, -1.0])

    def test_dc_gain_unity(self):
        fs = self.make()
        x = np.array([0.7])
        for _ in range(3000):
            fs, y = filter_step(fs, x)
        assert y[0] == pytest.approx(0.7, abs=1e-9)

    def test_step_response_time_constant(self):
        # after ~ f_s / (2 pi f_c) ~ 8 samples the step response reaches 1-1/e
        fs, _ = filter_step(self.make(), np.array([0.0]))
        y = None
        for _ in range(8):
            fs, y = filter_step(fs, np.array([1.0]))
        assert y[0] == pytest.approx(1 - np.exp(-1), abs=0.03)

    def test_minus_3db_at_cutoff(self):
        # drive with a 10 Hz sinusoid at 500 Hz and measure the steady-state
        # amplitude over whole periods
        fs = self.make()
        n, f, fsamp = 5000, 10.0, 500.0
        t = np.arange(n) / fsamp
        x = np.sin(2 * np.pi * f * t)
        ys = np.empty(n)
        for i in range(n):
            fs, y = filter_step(fs, np.array([x[i]]))
            ys[i] = y[0]
        tail = ys[-1000:]  # 20 whole periods
        amp = (tail.max() - tail.min()) / 2.0
        gain_db = 20 * np.log10(amp)
        assert gain_db == pytest.approx(-3.0, abs=0.5)

    def test_linearity(self):
        rng = np.random.default_rng(5)
        x1 = rng.normal(size=(50, 3))
        x2 = rng.normal(size=(50, 3))
        a, b = 2.0, -0.7

        def run(xs):
            fs = FilterState(10.0, 500.0, y_prev=np.zeros(3))
            out = []
            for x in xs:
                fs, y = filter_step(fs, x)
                out.append(y)
            return np.array(out)

        lhs = run(a * x1 + b * x2)
        rhs = a * run(x1) + b * run(x2)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)

    def test_dimension_mismatch(self):
        fs = FilterState(10.0, 500.0, y_prev=np.zeros(3))
        with pytest.raises(ValueError, match="shape"):
            filter_step(fs, np.zeros(4))
