import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import twpasim as tw
from twpasim.constants import HBAR, K_B
from twpasim.errors import DomainError


class TestEtaIdeal:
    def test_unity_gain(self):
        assert tw.eta_ideal(1.0) == 1.0

    def test_high_gain_limit(self):
        assert tw.eta_ideal(1e12) == pytest.approx(0.5, rel=1e-11)

    def test_gain_100(self):
        assert tw.eta_ideal(100.0) == pytest.approx(1.0 / 1.99, rel=1e-14)
        assert tw.eta_ideal(100.0) == pytest.approx(0.502513, rel=1e-6)

    def test_subunity_gain_rejected(self):
        with pytest.raises(DomainError):
            tw.eta_ideal(0.5)


class TestEtaSys:
    def test_published_on_value(self):
        assert tw.eta_sys(0.378, 6.59e9) == pytest.approx(0.8367, rel=2e-3)

    def test_published_off_value(self):
        assert tw.eta_sys(3.99, 6.59e9) == pytest.approx(0.07927, rel=2e-3)

    def test_quantum_limited_temperature_gives_unity(self):
        f = 6.59e9
        t_q = HBAR * 2 * np.pi * f / K_B
        assert tw.eta_sys(t_q, f) == pytest.approx(1.0, rel=1e-14)

    def test_nonpositive_temperature_rejected(self):
        with pytest.raises(DomainError):
            tw.eta_sys(0.0, 6e9)


class TestEtaIntrinsic:
    def test_published_value(self):
        assert tw.eta_intrinsic(0.836, 0.0792, 104.2) == pytest.approx(
            0.92168, rel=1e-4)

    def test_ideal_amplifier_identity(self):
        # on-state photons at the ideal level n = 1 - 1/(2G), vacuum off
        for g in (10.0, 104.2, 1e4):
            eta_on = 1.0 / (1.0 - 1.0 / (2.0 * g))
            assert tw.eta_intrinsic(eta_on, 2.0, g) == pytest.approx(
                1.0, rel=1e-12)

    def test_high_gain_limit_is_eta_on(self):
        assert tw.eta_intrinsic(0.4, 2.0, 1e14) == pytest.approx(
            0.4, rel=1e-10)

    def test_bad_bracket_rejected(self):
        # off-state efficiency so high at low gain the bracket goes negative
        with pytest.raises(DomainError):
            tw.eta_intrinsic(5.0, 0.01, 1.001)

    def test_nonpositive_efficiency_rejected(self):
        with pytest.raises(DomainError):
            tw.eta_intrinsic(0.0, 0.1, 10.0)


class TestSnri:
    def test_published_value(self):
        assert tw.snri_from_temps(0.378, 3.99) == pytest.approx(
            10.235, abs=5e-3)

    def test_equal_temperatures_zero_db(self):
        assert tw.snri_from_temps(1.3, 1.3) == 0.0

    def test_efficiency_ratio_identity(self):
        # SNRI equals the efficiency ratio in dB at fixed frequency
        t_on, t_off, f = 0.42, 3.1, 6e9
        lhs = tw.snri_from_temps(t_on, t_off)
        rhs = 10 * np.log10(tw.eta_sys(t_on, f) / tw.eta_sys(t_off, f))
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_nonpositive_rejected(self):
        with pytest.raises(DomainError):
            tw.snri_from_temps(-0.1, 1.0)


def make_budget(freq=6.59e9, rbw=1e4, g_amp=104.2, g_off=40.0,
                t_on=0.378, t_off=3.99, s_a=1e-16):
    """Raw powers consistent with the given gains and noise temperatures."""
    s_d_off = s_a * g_off
    s_d_on = s_d_off * g_amp
    n_d_on = (s_d_on / s_a) * K_B * t_on * rbw
    n_d_off = (s_d_off / s_a) * K_B * t_off * rbw
    return dict(s_a_on=s_a, s_d_on=s_d_on, n_d_on=n_d_on,
                s_a_off=s_a, s_d_off=s_d_off, n_d_off=n_d_off,
                resolution_bandwidth=rbw, freq_on=freq)


class TestBudgetPipeline:
    def test_published_operating_point(self):
        budget, report = tw.budget_pipeline(**make_budget())
        assert report.gain_db == pytest.approx(10 * np.log10(104.2), rel=1e-12)
        assert report.eta_sys_on == pytest.approx(0.8367, rel=2e-3)
        assert report.eta_sys_off == pytest.approx(0.07927, rel=2e-3)
        assert report.eta_intrinsic_normalized == pytest.approx(0.9217, abs=2e-3)
        assert not report.nonphysical
        assert budget.g_amp == pytest.approx(104.2, rel=1e-12)
        assert budget.t_sys_on == pytest.approx(0.378, rel=1e-12)

    def test_quantum_limited_input_noise_temperature(self):
        # an exactly quantum-limited system sits at one noise photon
        f = 6.59e9
        t_q = HBAR * 2 * np.pi * f / K_B
        assert t_q == pytest.approx(0.3163, abs=2e-4)
        budget, report = tw.budget_pipeline(**make_budget(t_on=t_q))
        assert budget.n_sys_on == pytest.approx(1.0, rel=1e-12)

    def test_ideal_added_noise_gives_unity_intrinsic(self):
        # vacuum off state plus exactly the ideal added photons on state
        f, g = 6.59e9, 104.2
        n_on = 1.0 - 1.0 / (2.0 * g)  # incl. the 1/2 vacuum photon
        t_on = HBAR * 2 * np.pi * f * n_on / K_B
        t_off = HBAR * 2 * np.pi * f * 0.5 / K_B
        budget, report = tw.budget_pipeline(
            **make_budget(t_on=t_on, t_off=t_off))
        assert report.eta_intrinsic_normalized == pytest.approx(1.0, rel=1e-10)

    def test_frequency_mismatch_rejected(self):
        kw = make_budget()
        kw["freq_off"] = 6.6e9
        with pytest.raises(DomainError):
            tw.budget_pipeline(**kw)

    def test_nonpositive_power_rejected(self):
        kw = make_budget()
        kw["n_d_on"] = 0.0
        with pytest.raises(DomainError):
            tw.budget_pipeline(**kw)

    def test_closed_form_identity_random_budgets(self):
        rng = np.random.default_rng(17)
        worst = 0.0
        for _ in range(1000):
            g_amp = rng.uniform(1.5, 5000)
            kw = make_budget(
                freq=rng.uniform(4e9, 8e9),
                rbw=rng.uniform(1e2, 1e6),
                g_amp=g_amp,
                g_off=rng.uniform(0.01, 100),
                t_on=rng.uniform(0.32, 5.0),
                t_off=rng.uniform(0.32, 20.0),
                s_a=10 ** rng.uniform(-18, -12),
            )
            budget, report = tw.budget_pipeline(**kw)
            closed = tw.eta_intrinsic(report.eta_sys_on, report.eta_sys_off,
                                      budget.g_amp) \
                if (2 / report.eta_sys_on - 2 / (budget.g_amp * report.eta_sys_off)
                    + 1 / budget.g_amp) > 0 else None
            if closed is None:
                continue
            worst = max(worst, abs(report.eta_intrinsic_normalized / closed - 1))
        assert worst < 1e-12

    def test_nonphysical_flagged_not_clamped(self):
        # fewer added photons than an ideal amplifier allows -> eta above 1
        f, g = 6.59e9, 104.2
        t_on = HBAR * 2 * np.pi * f * 0.9 / K_B  # below the ideal 1 - 1/2G
        t_off = HBAR * 2 * np.pi * f * 0.5 / K_B
        budget, report = tw.budget_pipeline(
            **make_budget(t_on=t_on, t_off=t_off))
        assert report.nonphysical
        assert report.eta_intrinsic_normalized > 1.0


class TestDistributedLossQe:
    def test_lossless_chain_is_exactly_ideal(self):
        assert tw.distributed_loss_qe([4.0, 4.0], [1.0, 1.0]) == 1.0

    def test_single_loss_before_gain(self):
        # attenuation in front of a high-gain ideal amplifier costs t
        t = 0.8
        eta = tw.distributed_loss_qe([1.0, 1e9], [t, 1.0])
        assert eta == pytest.approx(t, rel=1e-6)

    def test_loss_after_high_gain_is_free(self):
        eta = tw.distributed_loss_qe([1e9, 1.0], [1.0, 0.5])
        assert eta == pytest.approx(1.0, rel=1e-6)

    def test_segment_count_converges(self):
        # halving segments of a uniform gain/loss chain barely moves eta
        def chain(n):
            g = 10 ** (20 / 10 / n)
            t = 10 ** (-3 / 10 / n)
            return tw.distributed_loss_qe([g] * n, [t] * n)
        assert abs(chain(64) - chain(128)) < 5e-3
        assert abs(chain(128) - chain(256)) < abs(chain(64) - chain(128))

    def test_input_validation(self):
        with pytest.raises(DomainError):
            tw.distributed_loss_qe([], [])
        with pytest.raises(DomainError):
            tw.distributed_loss_qe([2.0], [0.5, 0.5])
        with pytest.raises(DomainError):
            tw.distributed_loss_qe([0.5], [1.0])
        with pytest.raises(DomainError):
            tw.distributed_loss_qe([2.0], [1.5])

    @given(n=st.integers(1, 12), seed=st.integers(0, 2**31 - 1))
    @settings(max_examples=40, deadline=None)
    def test_bounded_and_loss_monotone(self, n, seed):
        rng = np.random.default_rng(seed)
        gains = rng.uniform(1.0, 10.0, n)
        trans = rng.uniform(0.5, 1.0, n)
        eta = tw.distributed_loss_qe(gains, trans)
        assert 0.0 < eta <= 1.0 + 1e-12
        worse = tw.distributed_loss_qe(gains, trans * 0.9)
        assert worse < eta + 1e-12


class TestDeviceLossQeProfile:
    def test_zero_loss_gives_exactly_unity(self, lossless_device):
        pump = tw.PumpConfig(7.71e9, current_fraction=0.38158)
        gains_db, etas = tw.device_loss_qe_profile(
            lossless_device, pump, [6.59e9], segments=16)
        assert gains_db[0] > 15.0
        assert etas[0] == pytest.approx(1.0, abs=1e-12)

    def test_dielectric_loss_costs_a_few_percent(self, device):
        pump = tw.PumpConfig(7.71e9, current_fraction=0.38158)
        gains_db, etas = tw.device_loss_qe_profile(
            device, pump, [6.59e9], segments=64)
        assert 0.9 < etas[0] < 1.0
