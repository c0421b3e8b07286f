import numpy as np
import pytest

from ltah.core import ArmSample
from ltah.inference import (Contrast, Measure, logrank_test,
                            lt_ah_difference, lt_ah_ratio, rmst_difference,
                            rmst_ratio)
from ltah.measures import WindowSpec

from oracles import make_dataset, valid_window


def _two_arms(rng):
    while True:
        x1, e1 = make_dataset(rng)
        x0, e0 = make_dataset(rng)
        tau2 = min(float(x1[-1]), float(x0[-1]))
        win = valid_window(x1, e1, rng)
        if win is None or win[1] > tau2:
            continue
        tau1, t2 = win
        ev0 = x0[e0 == 1]
        if not np.any((ev0 > tau1) & (ev0 <= t2)):
            continue
        return (ArmSample(x1, e1, 1), ArmSample(x0, e0, 0),
                WindowSpec(tau1, t2))


@pytest.fixture
def identical_arms():
    t = [1.0, 2.0, 3.0, 4.0, 6.0, 7.0]
    e = [1, 1, 0, 1, 1, 0]
    return ArmSample(t, e, 1), ArmSample(t, e, 0)


WIN = WindowSpec(1.0, 6.0)


class TestIdenticalArms:
    def test_ratio_is_exactly_null(self, identical_arms):
        a1, a0 = identical_arms
        r = lt_ah_ratio(a1, a0, WIN)
        assert r.estimate == 1.0
        assert r.z == 0.0
        assert r.p_two_sided == 1.0
        assert not r.ci_excludes_null()

    def test_difference_is_exactly_null(self, identical_arms):
        a1, a0 = identical_arms
        d = lt_ah_difference(a1, a0, WIN)
        assert d.estimate == 0.0
        assert d.z == 0.0
        assert d.p_two_sided == 1.0

    def test_rmst_contrasts_null(self, identical_arms):
        a1, a0 = identical_arms
        assert rmst_difference(a1, a0, WIN).estimate == 0.0
        assert rmst_difference(a1, a0, WIN).p_two_sided == 1.0
        assert rmst_ratio(a1, a0, WIN).estimate == 1.0

    def test_logrank_null(self, identical_arms):
        a1, a0 = identical_arms
        lr = logrank_test(a1, a0)
        assert lr.z == 0.0
        assert lr.p_two_sided == 1.0
        assert lr.estimate is None and lr.window is None


class TestResultStructure:
    def test_measure_labels_follow_window(self, identical_arms):
        a1, a0 = identical_arms
        assert lt_ah_ratio(a1, a0, WIN).measure is Measure.LT_AH
        assert lt_ah_ratio(a1, a0, WindowSpec(0.0, 6.0)).measure \
            is Measure.AH
        assert rmst_difference(a1, a0, WIN).measure is Measure.LT_RMST
        assert rmst_difference(a1, a0, WindowSpec(0.0, 6.0)).measure \
            is Measure.RMST
        assert logrank_test(a1, a0).measure is Measure.LOGRANK

    def test_null_values(self, identical_arms):
        a1, a0 = identical_arms
        assert lt_ah_ratio(a1, a0, WIN).null_value == 1.0
        assert lt_ah_difference(a1, a0, WIN).null_value == 0.0
        assert lt_ah_ratio(a1, a0, WIN).contrast is Contrast.RATIO
        assert logrank_test(a1, a0).contrast is Contrast.SCORE

    def test_per_arm_estimates_attached(self, identical_arms):
        a1, a0 = identical_arms
        r = lt_ah_ratio(a1, a0, WIN)
        e1, e0 = r.per_arm
        assert e1.eta_hat == e0.eta_hat
        assert r.estimate == e1.eta_hat / e0.eta_hat

    def test_arm_labels_enforced(self, identical_arms):
        a1, a0 = identical_arms
        with pytest.raises(ValueError):
            lt_ah_ratio(a0, a1, WIN)
        with pytest.raises(ValueError):
            logrank_test(a0, a1)

    def test_alpha_validation(self, identical_arms):
        a1, a0 = identical_arms
        with pytest.raises(ValueError):
            lt_ah_difference(a1, a0, WIN, alpha=0.0)

    def test_estimate_inside_ci(self, rng):
        for _ in range(50):
            a1, a0, win = _two_arms(rng)
            for fn in (lt_ah_ratio, lt_ah_difference, rmst_difference):
                r = fn(a1, a0, win)
                assert r.ci_lower <= r.estimate <= r.ci_upper


class TestCoherency:
    @pytest.mark.parametrize("alpha", [0.01, 0.05, 0.10])
    def test_ci_and_test_agree(self, rng, alpha):
        for _ in range(150):
            a1, a0, win = _two_arms(rng)
            for fn in (lt_ah_ratio, lt_ah_difference, rmst_difference,
                       rmst_ratio):
                r = fn(a1, a0, win, alpha=alpha)
                assert r.ci_excludes_null() == (r.p_two_sided < alpha)


class TestArmSwap:
    def test_difference_and_logrank_negate(self, rng):
        for _ in range(50):
            a1, a0, win = _two_arms(rng)
            b1 = ArmSample(a0.times, a0.events, 1)
            b0 = ArmSample(a1.times, a1.events, 0)
            d = lt_ah_difference(a1, a0, win)
            ds = lt_ah_difference(b1, b0, win)
            assert ds.estimate == pytest.approx(-d.estimate, rel=1e-12)
            assert ds.z == pytest.approx(-d.z, rel=1e-12)
            assert ds.ci_lower == pytest.approx(-d.ci_upper, rel=1e-12)
            lr = logrank_test(a1, a0)
            lrs = logrank_test(b1, b0)
            assert lrs.z == pytest.approx(-lr.z, rel=1e-11, abs=1e-12)

    def test_ratio_inverts(self, rng):
        for _ in range(50):
            a1, a0, win = _two_arms(rng)
            b1 = ArmSample(a0.times, a0.events, 1)
            b0 = ArmSample(a1.times, a1.events, 0)
            r = lt_ah_ratio(a1, a0, win)
            rs = lt_ah_ratio(b1, b0, win)
            assert rs.estimate == pytest.approx(1.0 / r.estimate, rel=1e-12)
            assert rs.ci_lower == pytest.approx(1.0 / r.ci_upper, rel=1e-12)
            assert rs.ci_upper == pytest.approx(1.0 / r.ci_lower, rel=1e-12)
            assert rs.p_two_sided == pytest.approx(r.p_two_sided, rel=1e-12)


class TestStandardWindowReduction:
    def test_zero_tau1_equals_standard_contrast(self, rng):
        # the [0, tau2] window and an explicitly standard window are
        # the same analysis, bit for bit
        for _ in range(30):
            a1, a0, win = _two_arms(rng)
            std = WindowSpec(0.0, win.tau2)
            again = WindowSpec(0.0, win.tau2)
            for fn in (lt_ah_ratio, lt_ah_difference, rmst_difference):
                r1 = fn(a1, a0, std)
                r2 = fn(a1, a0, again)
                assert r1.estimate == r2.estimate
                assert r1.ci_lower == r2.ci_lower
                assert r1.z == r2.z
