import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kerrcat.model import (
    ModelParams,
    PJ_ORDERS,
    params_from_experiment,
    subspace_constants,
)


class TestModelParams:
    def test_alpha_derived(self):
        p = ModelParams(delta=0.0, kerr=4.0, two_photon=9.0, drive=0.0, kappa=0.1)
        assert p.alpha == 1.5
        assert p.alpha_sq == 9.0 / 4.0

    @pytest.mark.parametrize("bad", [{"kerr": -1.0}, {"kerr": 0.0}, {"two_photon": 0.0}])
    def test_rejects_nonpositive_kp(self, bad):
        kw = dict(delta=0.0, kerr=1.0, two_photon=1.0, drive=0.0, kappa=0.0)
        kw.update(bad)
        with pytest.raises(ValueError):
            ModelParams(**kw)

    def test_rejects_negative_kappa_and_nonfinite(self):
        with pytest.raises(ValueError):
            ModelParams(delta=0.0, kerr=1.0, two_photon=1.0, drive=0.0, kappa=-0.1)
        with pytest.raises(ValueError):
            ModelParams(delta=np.nan, kerr=1.0, two_photon=1.0, drive=0.0, kappa=0.0)

    def test_replace(self):
        p = ModelParams(delta=0.0, kerr=1.0, two_photon=1.0, drive=0.0, kappa=0.1)
        q = p.replace(delta=2.0)
        assert q.delta == 2.0 and q.kappa == 0.1 and p.delta == 0.0


class TestSubspaceConstants:
    def test_frozen_point_values(self):
        # independent scalar evaluation of sqrt(tanh(alpha^2)) and p^-2 - p^2
        c = subspace_constants(1.52)
        assert c.p == pytest.approx(0.9902030706106328, abs=1e-15)
        assert c.pj_minus[2] == pytest.approx(0.03938348504707756, rel=1e-13)

    def test_large_alpha_limit(self):
        c = subspace_constants(40.0)
        assert c.p == 1.0
        for j in PJ_ORDERS:
            assert c.pj_plus[j] == 2.0
            assert c.pj_minus[j] == 0.0

    def test_rejects_bad_alpha(self):
        for bad in (0.0, -1.0, math.inf, math.nan):
            with pytest.raises(ValueError):
                subspace_constants(bad)

    @settings(max_examples=200, deadline=None)
    @given(alpha=st.floats(0.1, 5.0))
    def test_tanh_form_matches_normalization_ratio(self, alpha):
        # p defined as the ratio of cat normalizations N+ / N-
        w = math.exp(-2.0 * alpha * alpha)
        n_plus = 1.0 / math.sqrt(2.0 * (1.0 + w))
        n_minus = 1.0 / math.sqrt(2.0 * (1.0 - w))
        c = subspace_constants(alpha)
        assert c.p == pytest.approx(n_plus / n_minus, rel=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(alpha=st.floats(0.1, 5.0))
    def test_pj_identities(self, alpha):
        c = subspace_constants(alpha)
        assert c.pj_plus[2] * c.pj_minus[2] == pytest.approx(c.pj_minus[4], rel=1e-12)
        assert c.pj_plus[1] ** 2 == pytest.approx(c.pj_plus[2] + 2.0, rel=1e-12)
        for j in PJ_ORDERS:
            assert c.pj_plus[j] >= 2.0
            assert c.pj_minus[j] >= 0.0
            # p_j+^2 - p_j-^2 = 4; the cancellation error scales with p_j+^2
            assert abs(c.pj_plus[j] ** 2 - c.pj_minus[j] ** 2 - 4.0) < 1e-12 * c.pj_plus[j] ** 2

    def test_p_monotone_to_one(self):
        alphas = np.linspace(0.2, 4.0, 30)
        ps = [subspace_constants(a).p for a in alphas]
        assert all(0.0 < p <= 1.0 for p in ps)
        assert all(b >= a for a, b in zip(ps, ps[1:]))


class TestParamsFromExperiment:
    def test_fig_point(self):
        p = params_from_experiment(6.7, 15.5, 1 / 15.5, eps_MHz=0.74)
        assert p.alpha_sq == pytest.approx(15.5 / 6.7, rel=1e-15)
        assert p.alpha == pytest.approx(1.5209973161780712, rel=1e-14)
        assert p.kerr == pytest.approx(2 * math.pi * 6.7, rel=1e-15)
        assert p.drive == pytest.approx(2 * math.pi * 0.74, rel=1e-15)
        # kappa carries no 2*pi: 1/15.5 MHz quoted loss = 15.5 us lifetime
        assert p.kappa == pytest.approx(1 / 15.5, rel=1e-15)

    def test_unit_ratio(self):
        p = params_from_experiment(1.0, 1.0, 0.0)
        assert p.alpha == 1.0 and p.kappa == 0.0

    def test_delta_conversion(self):
        p = params_from_experiment(6.7, 15.5, 1 / 15.5, eps_MHz=0.0, delta_MHz=0.2)
        assert p.drive == 0.0
        assert p.delta == pytest.approx(0.4 * math.pi, rel=1e-15)

    def test_kappa_angular_flag(self):
        p = params_from_experiment(6.7, 15.5, 0.1, kappa_angular=True)
        assert p.kappa == pytest.approx(2 * math.pi * 0.1, rel=1e-15)

    @settings(max_examples=100, deadline=None)
    @given(K=st.floats(0.5, 50.0), P=st.floats(0.5, 50.0))
    def test_alpha_round_trip(self, K, P):
        p = params_from_experiment(K, P, 0.05)
        assert p.alpha_sq == pytest.approx(P / K, rel=1e-12)
