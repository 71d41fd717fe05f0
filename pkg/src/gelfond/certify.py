"""Certified computation of the Gelfond exponent gamma(q;c).

Pipeline: locate the unique zero lam* of the balance integral inside the
admissible window W_c = (-1/q - c, -c); pick the enumerated cycle whose
arc-base window contains the bisection bracket; certify a strict sign change
of the balance integral at the ends of W_c intersected with that window; then
evaluate

    beta(c)  = mean of the potential over the exact cycle points,
    gamma(c) = beta(c) / log q.

The certificate carries the signed balance values with their rigorous error
bounds, so the cycle identification is machine-checkable.  Validity
intervals in c (one per cycle) come from root-finding the balance integral
in c at the two window endpoints; c -> balance is strictly decreasing, which
gives clean brackets.

All lambda and c arithmetic runs in lifted coordinates where W_c is a real
interval; reduction mod 1 happens only at I/O boundaries.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .circle import (BalanceValue, DEFAULT_TARGET_ERR, DEPTH_CAP, WINDOW_GUARD,
                     sturmian_balance)
from .errors import DomainError, GuardError, MultipleSignChangeError
from .potential import PotentialParams, _f
from .sturmian import (SturmianCycle, enumerate_cycles, lambda_window,
                       rotation_number)

DEFAULT_MAX_PERIOD = 13
DEFAULT_LAMBDA_TOL = 1e-12
DEFAULT_VALIDITY_TOL = 1e-11

# Validity interval of the q=2 period-2 cycle {1/3, 2/3}: the c-range where
# the balance integral vanishes inside that cycle's window.  Endpoints are
# the roots at the window endpoints, computed by validity_interval at
# tol 1e-11 and regression-pinned by the test suite.
PERIOD2_VALIDITY_Q2 = (0.427484440438785, 0.572515559561215)


@dataclass(frozen=True)
class GelfondCertificate:
    """Certified answer for one (q, c): cycle, sign bracket, beta, gamma."""

    params: PotentialParams
    cycle: SturmianCycle
    lambda_star: float
    lambda1: float
    lambda2: float
    v1: BalanceValue
    v2: BalanceValue
    beta: float
    gamma: float

    def to_json_dict(self) -> dict:
        win = lambda_window(self.cycle)
        return {
            "schema_version": 1,
            "q": self.params.q,
            "c": self.params.c,
            "period": self.cycle.period,
            "rotation": str(self.cycle.rotation),
            "base_digit": self.cycle.base_digit,
            "cycle_points": [str(p) for p in self.cycle.points],
            "window_lo": str(win.lo),
            "window_hi": str(win.hi),
            "lambda_star": self.lambda_star,
            "lambda_star_mod1": self.lambda_star % 1.0,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "v1": {"value": self.v1.value, "err_bound": self.v1.err_bound,
                   "depth": self.v1.depth},
            "v2": {"value": self.v2.value, "err_bound": self.v2.err_bound,
                   "depth": self.v2.depth},
            "beta": self.beta,
            "gamma": self.gamma,
        }


@dataclass(frozen=True)
class NonPeriodicReport:
    """Honest failure: no cycle of the allowed periods certifies this c."""

    params: PotentialParams
    lambda_star: float
    rotation: object
    reason: str

    def to_json_dict(self) -> dict:
        rot = self.rotation
        rot_json = (str(rot.value) if hasattr(rot, "cycle")
                    else {"estimate": rot.value, "uncertainty": rot.uncertainty}
                    if rot is not None else None)
        return {
            "schema_version": 1,
            "q": self.params.q,
            "c": self.params.c,
            "status": "nonperiodic",
            "lambda_star": self.lambda_star,
            "lambda_star_mod1": self.lambda_star % 1.0,
            "rotation": rot_json,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class ValidityInterval:
    """c-range on which a fixed cycle is the certified maximizer."""

    cycle: SturmianCycle
    c_lo: float
    c_hi: float
    tol: float


def _window_bounds(params: PotentialParams) -> tuple[float, float]:
    q, c = params.q, params.c
    return -1.0 / q - c, -c


def _certified_sign(v: BalanceValue) -> int:
    if v.value > v.err_bound:
        return 1
    if v.value < -v.err_bound:
        return -1
    return 0


def _balance_bracket(params: PotentialParams, tol: float, *, coarse: int = 64,
                     guard: float = WINDOW_GUARD,
                     target_err: float = DEFAULT_TARGET_ERR,
                     depth_cap: int = DEPTH_CAP) -> tuple[float, float]:
    """Bracket the balance zero: coarse scan (exactly one certified sign
    change expected), then bisection to width <= tol."""
    wlo, whi = _window_bounds(params)
    a = wlo + 2.0 * guard
    b = whi - 2.0 * guard
    xs = [a + (b - a) * i / (coarse - 1) for i in range(coarse)]
    signed = []
    for x in xs:
        v = sturmian_balance(params, x, target_err, guard=guard,
                             depth_cap=depth_cap, stop_on_sign=True)
        s = _certified_sign(v)
        if s != 0:
            signed.append((x, s))
    flips = [i for i in range(len(signed) - 1)
             if signed[i][1] != signed[i + 1][1]]
    if len(flips) != 1:
        raise MultipleSignChangeError(
            f"coarse scan saw {len(flips)} certified sign changes, expected 1"
        )
    i = flips[0]
    if not (signed[i][1] > 0 > signed[i + 1][1]):
        raise MultipleSignChangeError("sign change oriented -,+; expected +,-")
    lo, hi = signed[i][0], signed[i + 1][0]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        v = sturmian_balance(params, mid, target_err, guard=guard,
                             depth_cap=depth_cap, stop_on_sign=True)
        if v.value > 0.0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def find_balance_point(params: PotentialParams, tol: float = DEFAULT_LAMBDA_TOL,
                       **kwargs) -> float:
    """The lambda in W_c where the balance integral vanishes (lifted)."""
    lo, hi = _balance_bracket(params, tol, **kwargs)
    return 0.5 * (lo + hi)


def orbit_potential_mean(params: PotentialParams, cycle: SturmianCycle) -> float:
    """Mean of the potential over the exact cycle points (this is beta)."""
    total = math.fsum(_f(params.q, float(s) + params.c) for s in cycle.points)
    return total / cycle.period


def gelfond_exponent(params: PotentialParams,
                     max_period: int = DEFAULT_MAX_PERIOD, *,
                     tol: float = DEFAULT_LAMBDA_TOL,
                     guard: float = WINDOW_GUARD,
                     target_err: float = DEFAULT_TARGET_ERR,
                     depth_cap: int = DEPTH_CAP):
    """Certified beta(c) and gamma(c), or a NonPeriodicReport.

    The period-1 fixed points participate like any other cycle, so c = 0
    resolves to beta = log q, gamma = 1 through the same code path.
    """
    q, c = params.q, params.c
    wlo, whi = _window_bounds(params)
    bra, brb = _balance_bracket(params, tol, guard=guard,
                                target_err=target_err, depth_cap=depth_cap)
    lam_star = 0.5 * (bra + brb)
    assert wlo < lam_star < whi  # lifted-coordinate sanity: c+lam in (-1/q, 0)

    found = None
    shift = 0
    for cyc in enumerate_cycles(q, max_period):
        win = lambda_window(cyc)
        lo_f, hi_f = float(win.lo), float(win.hi)
        k = round(lam_star - 0.5 * (lo_f + hi_f))
        if lo_f + k <= bra and brb <= hi_f + k:
            found, shift = cyc, k
            break
    if found is None:
        rot = rotation_number(q, lam_star, iterations=100_000,
                              max_denominator=max(64, 4 * max_period))
        return NonPeriodicReport(
            params, lam_star, rot,
            f"no cycle of period <= {max_period} has a window containing the "
            f"balance-zero bracket",
        )

    win = lambda_window(found)
    l1 = max(float(win.lo) + shift, wlo + 2.0 * guard)
    l2 = min(float(win.hi) + shift, whi - 2.0 * guard)
    if not l1 < l2:
        return NonPeriodicReport(params, lam_star, None,
                                 "window intersection collapsed by the guard")
    v1 = sturmian_balance(params, l1, target_err, guard=guard,
                          depth_cap=depth_cap, stop_on_sign=True)
    v2 = sturmian_balance(params, l2, target_err, guard=guard,
                          depth_cap=depth_cap, stop_on_sign=True)
    if not (_certified_sign(v1) > 0 > _certified_sign(v2)):
        return NonPeriodicReport(
            params, lam_star, None,
            "balance signs at the window endpoints could not be certified "
            "beyond their error bounds",
        )
    beta = orbit_potential_mean(params, found)
    gamma = beta / math.log(q)
    return GelfondCertificate(params, found, lam_star, l1, l2, v1, v2,
                              beta, gamma)


def _c_root(q: int, lam_e: float, tol: float, guard: float,
            target_err: float) -> float:
    """Solve balance = 0 in c at a fixed lambda (strictly decreasing in c)."""
    clo = -lam_e - 1.0 / q
    chi = -lam_e
    a = clo + 2.0 * guard
    b = chi - 2.0 * guard
    va = sturmian_balance(PotentialParams(q, a % 1.0), lam_e, target_err,
                          guard=guard, stop_on_sign=True)
    vb = sturmian_balance(PotentialParams(q, b % 1.0), lam_e, target_err,
                          guard=guard, stop_on_sign=True)
    if not (_certified_sign(va) > 0 > _certified_sign(vb)):
        raise GuardError(
            f"no certified sign bracket in c for lambda={lam_e!r}"
        )
    while b - a > tol:
        mid = 0.5 * (a + b)
        v = sturmian_balance(PotentialParams(q, mid % 1.0), lam_e, target_err,
                             guard=guard, stop_on_sign=True)
        if v.value > 0.0:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def validity_interval(q: int, cycle: SturmianCycle,
                      tol: float = DEFAULT_VALIDITY_TOL, *,
                      guard: float = WINDOW_GUARD,
                      target_err: float = DEFAULT_TARGET_ERR) -> ValidityInterval:
    """The c-interval on which this cycle is the certified maximizer.

    The window's upper endpoint yields the smaller c; the map from window
    endpoint to c-endpoint is orientation-reversing, which is asserted
    rather than assumed.
    """
    win = lambda_window(cycle)
    r_from_hi = _c_root(q, float(win.hi), tol, guard, target_err)
    r_from_lo = _c_root(q, float(win.lo), tol, guard, target_err)
    if not r_from_hi < r_from_lo:
        raise RuntimeError(
            f"endpoint-to-c assignment unexpectedly ordered: "
            f"{r_from_hi} >= {r_from_lo}"
        )
    shift = -math.floor(r_from_hi)
    return ValidityInterval(cycle, r_from_hi + shift, r_from_lo + shift, tol)


def beta_period2_closed_form(c: float) -> float:
    """Closed form of beta on the q=2 period-2 validity interval."""
    lo, hi = PERIOD2_VALIDITY_Q2
    if not (lo - 1e-12 <= c <= hi + 1e-12):
        raise DomainError(
            f"c={c!r} outside the period-2 validity interval [{lo}, {hi}]"
        )
    prod = math.cos(math.pi * (1.0 / 3.0 + c)) * math.cos(math.pi * (2.0 / 3.0 + c))
    return math.log(2.0) + 0.5 * math.log(abs(prod))


# The c values of the reference beta/gamma table (q = 2).
DEFAULT_TABLE2_FRACTIONS: tuple[Fraction, ...] = tuple(
    Fraction(n, d) for n, d in [
        (1, 2), (1, 3), (1, 4), (1, 5), (2, 5), (2, 7), (3, 7), (3, 8),
        (2, 9), (4, 9), (3, 10), (2, 11), (3, 11), (4, 11), (5, 11), (5, 12),
        (3, 13), (4, 13), (5, 13), (6, 13), (3, 14), (5, 14), (7, 15),
        (7, 16), (3, 17), (4, 17), (5, 17), (6, 17), (7, 17), (8, 17),
        (5, 18), (7, 18), (4, 19), (5, 19), (6, 19), (7, 19), (8, 19),
        (9, 19), (7, 20), (9, 20), (4, 21), (5, 21), (8, 21), (5, 22),
        (7, 22), (9, 22), (5, 23), (6, 23), (7, 23), (8, 23), (9, 23),
        (10, 23), (11, 23), (5, 24), (7, 24), (11, 24), (6, 25), (7, 25),
        (8, 25), (9, 25), (11, 25), (12, 25),
    ]
)


@dataclass(frozen=True)
class Table1Row:
    period: int
    rotation: Fraction
    window_lo: Fraction
    window_hi: Fraction
    c_lo: float | None
    c_hi: float | None
    status: str  # OK or ERROR: <message>


@dataclass(frozen=True)
class Table2Row:
    c_label: str
    c: float
    beta: float | None
    gamma: float | None
    period: int | None
    status: str  # OK, SKIPPED, or ERROR: <message>


def _validity_row(args) -> Table1Row:
    q, cycle, tol = args
    win = lambda_window(cycle)
    try:
        vi = validity_interval(q, cycle, tol)
        return Table1Row(cycle.period, cycle.rotation, win.lo, win.hi,
                         vi.c_lo, vi.c_hi, "OK")
    except Exception as exc:  # per-row errors are collected, not fatal
        return Table1Row(cycle.period, cycle.rotation, win.lo, win.hi,
                         None, None, f"ERROR: {exc}")


def _table2_row(args) -> Table2Row:
    q, c_value, max_period = args
    label = str(c_value)
    c = float(c_value) % 1.0
    try:
        res = gelfond_exponent(PotentialParams(q, c), max_period)
    except Exception as exc:
        return Table2Row(label, c, None, None, None, f"ERROR: {exc}")
    if isinstance(res, GelfondCertificate):
        return Table2Row(label, c, res.beta, res.gamma, res.cycle.period, "OK")
    return Table2Row(label, c, None, None, None, "SKIPPED")


def _pmap(fn, items, threads):
    if not threads or threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def validity_table(q: int = 2, max_period: int = DEFAULT_MAX_PERIOD, *,
                   validity_tol: float = DEFAULT_VALIDITY_TOL,
                   threads: int | None = None,
                   min_period: int = 2) -> list[Table1Row]:
    """One validity-interval row per cycle (periods min_period..max_period)."""
    cycles = [cy for cy in enumerate_cycles(q, max_period)
              if cy.period >= min_period]
    return _pmap(_validity_row, [(q, cy, validity_tol) for cy in cycles],
                 threads)


def exponent_table(q: int = 2, max_period: int = DEFAULT_MAX_PERIOD,
                   c_list=None, *,
                   threads: int | None = None) -> list[Table2Row]:
    """One certified beta/gamma row per requested c."""
    if c_list is None:
        c_list = DEFAULT_TABLE2_FRACTIONS if q == 2 else []
    return _pmap(_table2_row, [(q, cv, max_period) for cv in c_list], threads)


def tables(q: int = 2, max_period: int = DEFAULT_MAX_PERIOD,
           c_list=None, *, validity_tol: float = DEFAULT_VALIDITY_TOL,
           threads: int | None = None,
           min_period: int = 2) -> tuple[list[Table1Row], list[Table2Row]]:
    """Validity-interval rows (one per cycle) and beta/gamma rows per c."""
    rows1 = validity_table(q, max_period, validity_tol=validity_tol,
                           threads=threads, min_period=min_period)
    rows2 = exponent_table(q, max_period, c_list, threads=threads)
    return rows1, rows2


@dataclass(frozen=True)
class CurvePoint:
    c: float
    beta: float | None
    gamma: float | None
    period: int | None
    status: str  # OK, GAP, or ERROR: <message>


def _curve_point(args) -> CurvePoint:
    q, c, max_period = args
    try:
        res = gelfond_exponent(PotentialParams(q, c), max_period)
    except Exception as exc:
        return CurvePoint(c, None, None, None, f"ERROR: {exc}")
    if isinstance(res, GelfondCertificate):
        return CurvePoint(c, res.beta, res.gamma, res.cycle.period, "OK")
    return CurvePoint(c, None, None, None, "GAP")


def beta_curve(q: int = 2, max_period: int = DEFAULT_MAX_PERIOD,
               resolution: int = 256, *,
               threads: int | None = None) -> list[CurvePoint]:
    """Certified (c, beta, gamma, period) across a uniform c grid; gaps flagged."""
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    cs = [i / resolution for i in range(resolution)]
    return _pmap(_curve_point, [(q, c, max_period) for c in cs], threads)
