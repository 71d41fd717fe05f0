import math

import numpy as np
import pytest

from gelfond import (GelfondCertificate, PotentialParams,
                     centering_bound_check, gelfond_exponent,
                     inner_shift_negativity_grid, outer_shift_negativity_grid,
                     sturmian_condition_probe)
from gelfond.checks import _transfer_derivative
from gelfond.potential import _f, _fp


class TestCenteringBound:
    def test_q2_excluded(self):
        with pytest.raises(ValueError):
            centering_bound_check(2, [0.3])

    @pytest.mark.parametrize("q", [3, 4])
    def test_grid_passes(self, q):
        grid = [0.05 + 0.9 * i / 11 for i in range(12)]
        rep = centering_bound_check(q, grid)
        assert rep.passed
        assert rep.worst_value > 0
        lo, hi = 3.0 / (8 * q), 5.0 / (8 * q)
        for theta in rep.details["thetas"]:
            assert lo < theta < hi

    def test_q3_specific_value(self):
        rep = centering_bound_check(3, [0.3])
        theta = rep.details["thetas"][0]
        assert 1.0 / 8.0 < theta < 5.0 / 24.0


class TestInnerShiftGrid:
    def test_q_bound(self):
        with pytest.raises(ValueError):
            inner_shift_negativity_grid(2)

    @pytest.mark.parametrize("q", [3, 4, 5, 6])
    def test_negative(self, q):
        rep = inner_shift_negativity_grid(q, 120, 120)
        assert rep.passed
        assert rep.worst_value < 0

    @pytest.mark.parametrize("q", [3, 5, 8])
    def test_a_bound_at_quarter_over_q(self, q):
        # log(sin(pi/(4q)) / sin(5 pi/(4q))) stays below -1.3169
        s = 1.0 / (4 * q)
        a_val = math.log(math.sin(math.pi * s) /
                         math.sin(math.pi * (1.0 / q + s)))
        assert a_val <= -1.3169

    def test_sliver_diverges(self):
        # s -> 0+ sends the first term to -infinity
        q = 3
        s = 1e-12
        a_val = math.log(math.sin(math.pi * s) /
                         math.sin(math.pi * (1.0 / q + s)))
        assert a_val < -20


class TestOuterShiftGrid:
    def test_q_bound(self):
        with pytest.raises(ValueError):
            outer_shift_negativity_grid(3)

    @pytest.mark.parametrize("q", [4, 5, 6])
    def test_negative(self, q):
        rep = outer_shift_negativity_grid(q, 120, 120)
        assert rep.passed
        assert rep.worst_value < 0

    @pytest.mark.parametrize("q", [4, 5, 6])
    def test_diagonal_identity(self, q):
        # at s = t the composite reduces to U(t) + log q - f(t), negative
        for t in np.linspace(3.0 / (8 * q) + 1e-6, 5.0 / (8 * q) - 1e-6, 25):
            u_val = math.log(math.sin(math.pi * (1.0 / q - t)) /
                             math.sin(math.pi * (1.0 / q + t)))
            g_tt = u_val + math.log(q) - _f(q, float(t))
            assert g_tt < 0

    @pytest.mark.parametrize("q", [4, 5, 6])
    def test_u_negative_on_range(self, q):
        # direct evaluation: sin(pi(1/q - s)) < sin(pi(1/q + s)) there
        for s in np.linspace(1e-6, 1.0 / q - 1e-6, 200):
            assert math.sin(math.pi * (1.0 / q - s)) < \
                math.sin(math.pi * (1.0 / q + s))

    def test_report_json(self):
        rep = outer_shift_negativity_grid(4, 40, 40)
        d = rep.to_json_dict()
        assert d["schema_version"] == 1
        assert d["passed"] is True


def _certificate(q, c):
    res = gelfond_exponent(PotentialParams(q, c))
    assert isinstance(res, GelfondCertificate)
    return res


class TestConditionProbe:
    def test_constancy_on_arc_at_half(self):
        params = PotentialParams(2, 0.5)
        rep = sturmian_condition_probe(params, _certificate(2, 0.5),
                                       samples=50, depth=30)
        assert rep.passed
        assert rep.details["inside_residual"] <= 1e-4
        assert rep.worst_value < -1e-3

    def test_outside_margin_at_quarter(self):
        params = PotentialParams(2, 0.25)
        rep = sturmian_condition_probe(params, _certificate(2, 0.25),
                                       samples=40, depth=30)
        assert rep.passed
        assert rep.worst_value < -1e-3

    def test_q3_case(self):
        params = PotentialParams(3, 0.35)
        rep = sturmian_condition_probe(params, _certificate(3, 0.35),
                                       samples=30, depth=25)
        assert rep.passed

    def test_transfer_series_truncation_bound(self):
        # |psi'_depth - psi'_{depth+10}| <= M q^-depth / (q-1) pointwise
        q, c = 2, 0.4
        cert = _certificate(q, c)
        lam = cert.lambda_star % 1.0
        m_edge = max(abs(_fp(q, lam + c)), abs(_fp(q, lam + 0.5 + c)))
        for x in np.linspace(0.02, 0.98, 23):
            d1 = _transfer_derivative(q, c, lam, float(x), 20)
            d2 = _transfer_derivative(q, c, lam, float(x), 30)
            assert abs(d1 - d2) <= m_edge * 2.0 ** -20 / (q - 1) + 1e-15

    def test_residual_decreases_with_depth(self):
        params = PotentialParams(2, 0.5)
        cert = _certificate(2, 0.5)
        resids = []
        for depth in (8, 16, 30):
            rep = sturmian_condition_probe(params, cert, samples=15,
                                           depth=depth)
            resids.append(rep.details["inside_residual"])
        assert resids[0] > resids[1] > resids[2]
