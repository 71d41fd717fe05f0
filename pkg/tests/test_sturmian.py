from fractions import Fraction as F

import pytest

from gelfond import (IrrationalFlag, RationalRotation, build_cycle,
                     enumerate_cycles, lambda_window, measure_support,
                     rotation_number, rotation_staircase, truncated_map_lift)

from reference_tables import PRINTED_TABLE1


class TestEnumeration:
    def test_period_one_fixed_points(self):
        cycles = enumerate_cycles(2, 1)
        assert len(cycles) == 1
        assert cycles[0].points == (F(0),)
        cycles = enumerate_cycles(4, 1)
        assert [c.points[0] for c in cycles] == [F(0), F(1, 3), F(2, 3)]

    def test_two_cycle(self):
        cycles = [c for c in enumerate_cycles(2, 2) if c.period == 2]
        assert len(cycles) == 1
        cyc = cycles[0]
        assert cyc.points == (F(1, 3), F(2, 3))
        win = lambda_window(cyc)
        assert (win.lo, win.hi) == (F(1, 6), F(1, 3))

    def test_count_57_for_periods_2_to_13(self):
        cycles = [c for c in enumerate_cycles(2, 13) if c.period >= 2]
        assert len(cycles) == 57
        # Euler phi per period
        by_period = {}
        for c in cycles:
            by_period[c.period] = by_period.get(c.period, 0) + 1
        assert by_period == {2: 1, 3: 2, 4: 2, 5: 4, 6: 2, 7: 6, 8: 4,
                             9: 6, 10: 4, 11: 10, 12: 4, 13: 12}

    def test_exact_permutation_and_arc(self):
        for cyc in enumerate_cycles(3, 6):
            cyc.validate()  # integer arithmetic, no tolerance
            assert cyc.s_max - cyc.s_min <= F(1, cyc.q)

    def test_windows_match_printed_table(self):
        ours = {(lambda_window(c).lo, lambda_window(c).hi)
                for c in enumerate_cycles(2, 13) if c.period >= 2}
        printed = {(lo, hi) for _, lo, hi, _, _ in PRINTED_TABLE1}
        assert ours == printed

    def test_windows_disjoint_interiors(self):
        wins = sorted((lambda_window(c).lo % 1, lambda_window(c).hi % 1)
                      for c in enumerate_cycles(2, 10))
        for (_, hi1), (lo2, _) in zip(wins, wins[1:]):
            assert hi1 <= lo2

    def test_distinct_rotations_distinct_cycles(self):
        cycles = enumerate_cycles(3, 5)
        keys = {(c.base_digit, c.rotation) for c in cycles}
        assert len(keys) == len(cycles)

    def test_specific_period_6_window(self):
        row = next(c for c in enumerate_cycles(2, 6)
                   if c.period == 6 and c.s_min == F(31, 63))
        win = lambda_window(row)
        assert (win.lo, win.hi) == (F(61, 126), F(31, 63))


class TestBuildCycle:
    def test_three_cycles(self):
        c1 = build_cycle(2, 0, F(1, 3))
        assert c1.points == (F(1, 7), F(2, 7), F(4, 7))
        c2 = build_cycle(2, 0, F(2, 3))
        assert c2.points == (F(3, 7), F(5, 7), F(6, 7))

    def test_rejects_bad_digit(self):
        with pytest.raises(ValueError):
            build_cycle(2, 1, F(1, 2))


class TestTruncatedLift:
    def test_linear_branch(self):
        for x in (0.0, 0.1, 0.25):
            assert truncated_map_lift(2, 0.0, x) == 2 * x

    def test_plateau(self):
        lam = 0.2
        v1 = truncated_map_lift(2, lam, lam + 0.5)
        v2 = truncated_map_lift(2, lam, lam + 0.51)
        v3 = truncated_map_lift(2, lam, lam + 0.99)
        assert v1 == v2 == v3 == 2 * lam + 1.0

    def test_monotone_on_grid(self):
        lam = 0.37
        xs = [i / 1000 for i in range(2001)]
        vals = [truncated_map_lift(3, lam, x) for x in xs]
        assert all(a <= b for a, b in zip(vals, vals[1:]))

    def test_degree_one(self):
        lam = 0.42
        for x in (0.0, 0.3, 0.9):
            assert truncated_map_lift(2, lam, x + 1.0) == \
                pytest.approx(truncated_map_lift(2, lam, x) + 1.0, abs=1e-12)


class TestRotationNumber:
    def test_fixed_point_at_zero(self):
        rot = rotation_number(2, 0.0)
        assert isinstance(rot, RationalRotation)
        assert rot.value == 0
        assert rot.cycle.points == (F(0),)

    def test_half_at_quarter(self):
        rot = rotation_number(2, 0.25, iterations=100_000)
        assert isinstance(rot, RationalRotation)
        assert rot.value == F(1, 2)
        assert rot.cycle.points == (F(1, 3), F(2, 3))

    def test_plateau_constant_on_window(self):
        # rotation is 1/2 across the whole window of the 2-cycle
        for lam in (1.0 / 6.0 + 1e-6, 0.2, 0.3, 1.0 / 3.0 - 1e-6):
            rot = rotation_number(2, lam)
            assert isinstance(rot, RationalRotation)
            assert rot.value == F(1, 2)

    def test_shift_by_one_adds_q_minus_one(self):
        # rho(lam + 1) = rho(lam) + q - 1 via the lift normalization
        q, lam, n = 3, 0.21, 20_000
        x0, x1 = 0.0, 0.0
        for _ in range(n):
            x0 = truncated_map_lift(q, lam, x0)
            x1 = truncated_map_lift(q, lam + 1.0, x1)
        assert x1 / n - x0 / n == pytest.approx(q - 1, abs=1e-3)


class TestMeasureSupport:
    def test_two_cycle_at_02(self):
        cyc = measure_support(2, 0.2, 13)
        assert cyc.points == (F(1, 3), F(2, 3))

    def test_fixed_point(self):
        cyc = measure_support(2, 0.0, 13)
        assert cyc.points == (F(0),)

    def test_period_6_just_inside_window(self):
        cyc = measure_support(2, 61.0 / 126.0 + 1e-4, 13)
        assert cyc.period == 6
        assert cyc.s_min == F(31, 63)

    def test_irrational_flag_out_of_reach(self):
        # inside a high-period window, period cap 5 cannot certify
        res = measure_support(2, 61.0 / 126.0 + 1e-4, 5)
        assert isinstance(res, IrrationalFlag)
        assert res.estimate.uncertainty > 0


class TestStaircase:
    def test_monotone_and_plateau(self):
        rows = rotation_staircase(2, 512, iterations=20_000)
        est = [r[1] for r in rows]
        assert all(b >= a for a, b in zip(est, est[1:]))
        plateau = [r[2] for r in rows
                   if 1.0 / 6.0 + 1e-4 <= r[0] <= 1.0 / 3.0 - 1e-4]
        assert plateau and all(v == F(1, 2) for v in plateau)

    def test_estimates_near_certified(self):
        rows = rotation_staircase(2, 128, iterations=20_000)
        for lam, est, cert in rows:
            if cert is not None:
                assert abs(est - float(cert)) <= 2.0 / 20_000 + 1e-9
