"""Sturmian cycles of x -> q*x mod 1 and rotation numbers of the truncated map.

A cycle with rotation p/m (lowest terms) and base digit a is generated by the
mechanical digit word a_j = a + floor(j*p/m) - floor((j-1)*p/m); the seed
point is the base-q value of that word divided by q^m - 1, and the orbit is
computed in exact integer arithmetic (Python ints are unbounded, so no width
policy applies).  Every such cycle fits in a closed arc of length 1/q, and
the arcs [lam, lam+1/q] containing it are exactly those with lam in the
window [s_max - 1/q, s_min].

The truncated circle map equals x -> q*x on the arc and is constant outside;
its rotation number, computed from a monotone degree-one lift, identifies
which cycle (if any) carries the invariant measure of a given arc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class SturmianCycle:
    """Periodic orbit inside a closed arc of length 1/q.

    points are sorted, exact, and permuted by T: s -> q*s mod 1.
    """

    q: int
    period: int
    rotation: Fraction
    base_digit: int
    points: tuple[Fraction, ...]

    @property
    def s_min(self) -> Fraction:
        return self.points[0]

    @property
    def s_max(self) -> Fraction:
        return self.points[-1]

    def validate(self) -> None:
        q = self.q
        pts = set(self.points)
        if len(pts) != self.period:
            raise ValueError("points are not distinct")
        for s in self.points:
            if not (0 <= s < 1):
                raise ValueError(f"point {s} outside [0,1)")
            if (q * s) % 1 not in pts:
                raise ValueError(f"T does not permute the points (at {s})")
        if self.s_max - self.s_min > Fraction(1, q):
            raise ValueError("support wider than 1/q")

    def __str__(self):
        pts = ",".join(str(p) for p in self.points)
        return f"period-{self.period} cycle {{{pts}}} (rotation {self.rotation})"


@dataclass(frozen=True)
class LambdaWindow:
    """Arc-base window [lo, hi]; lo = s_max - 1/q may be negative (lifted)."""

    lo: Fraction
    hi: Fraction

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains_mod1(self, x: float, tol: float = 1e-12) -> bool:
        d = (x - float(self.lo)) % 1.0
        return d <= float(self.length) + tol or d >= 1.0 - tol


def build_cycle(q: int, base_digit: int, rotation: Fraction) -> SturmianCycle:
    """Construct the cycle for one (base digit, rotation) pair.

    rotation must be 0 (fixed point a/(q-1)) or a fraction p/m in (0,1) in
    lowest terms; the resulting orbit has exact period m.
    """
    if not 0 <= base_digit <= q - 2:
        raise ValueError(f"base digit must be in 0..q-2, got {base_digit}")
    p, m = rotation.numerator, rotation.denominator
    if not (0 <= p < m or (p == 0 and m == 1)):
        raise ValueError(f"rotation must lie in [0,1), got {rotation}")
    digits = [base_digit + (j * p) // m - ((j - 1) * p) // m for j in range(1, m + 1)]
    num = 0
    for d in digits:
        num = num * q + d
    den = q ** m - 1
    if den == 0:
        raise ValueError("q must be >= 2")
    nums = [num]
    for _ in range(m - 1):
        nums.append((nums[-1] * q) % den)
    if len(set(nums)) != m:
        raise ValueError(f"orbit of rotation {rotation} is not primitive")
    points = tuple(sorted(Fraction(k, den) for k in nums))
    cyc = SturmianCycle(q=q, period=m, rotation=Fraction(p, m) if m > 1 else Fraction(0),
                        base_digit=base_digit, points=points)
    cyc.validate()
    return cyc


def enumerate_cycles(q: int, max_period: int) -> list[SturmianCycle]:
    """All cycles with period 1..max_period, deduplicated and sorted.

    Period-1 entries are the fixed points k/(q-1) for k = 0..q-2.
    """
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    out = []
    seen = set()
    for a in range(q - 1):
        for m in range(1, max_period + 1):
            ps = [0] if m == 1 else [p for p in range(1, m) if math.gcd(p, m) == 1]
            for p in ps:
                cyc = build_cycle(q, a, Fraction(p, m) if m > 1 else Fraction(0))
                if cyc.points in seen:
                    continue
                seen.add(cyc.points)
                out.append(cyc)
    out.sort(key=lambda cy: (cy.period, cy.rotation, cy.base_digit))
    return out


def lambda_window(cycle: SturmianCycle) -> LambdaWindow:
    """Exact window of arc bases whose arc contains the cycle support."""
    return LambdaWindow(lo=cycle.s_max - Fraction(1, cycle.q), hi=cycle.s_min)


def truncated_map_lift(q: int, lam: float, x: float) -> float:
    """Monotone degree-one lift of the truncated map.

    On [lam, lam+1/q] the lift is q*x; on the rest of the period it is the
    plateau q*lam+1; it extends by lift(x+1) = lift(x)+1.  With this
    normalization the rotation number satisfies rho(lam+1) = rho(lam)+q-1.
    """
    m = math.floor(x - lam)
    u = x - m
    return m + min(q * u, q * lam + 1.0)


@dataclass(frozen=True)
class RationalRotation:
    """Certified rational rotation, witnessed by a cycle inside the arc."""

    value: Fraction
    cycle: SturmianCycle


@dataclass(frozen=True)
class IrrationalRotation:
    """Uncertified estimate; the honest outcome when no cycle confirms."""

    value: float
    uncertainty: float


@dataclass(frozen=True)
class IrrationalFlag:
    """Marker that the invariant measure of the arc is not represented."""

    estimate: IrrationalRotation


def _lift_orbit_estimate(q: int, lam: float, iterations: int) -> float:
    x0 = lam % 1.0
    x = x0
    for _ in range(iterations):
        x = truncated_map_lift(q, lam % 1.0, x)
    return (x - x0) / iterations


def rotation_number(q: int, lam: float, iterations: int = 10_000,
                    max_denominator: int = 64):
    """Rotation number of the truncated map for the arc based at lam.

    Returns RationalRotation when the best bounded-denominator approximation
    of the orbit estimate is unambiguous within the uncertainty 2/iterations
    and the matching cycle actually sits inside the arc; otherwise an
    IrrationalRotation estimate.
    """
    if iterations < 1_000:
        raise ValueError("iterations must be >= 1000")
    for attempt in range(2):
        its = iterations * (10 ** attempt)
        est = _lift_orbit_estimate(q, lam, its)
        unc = 2.0 / its
        cand = Fraction(est).limit_denominator(max_denominator)
        lo = Fraction(est - unc).limit_denominator(max_denominator)
        hi = Fraction(est + unc).limit_denominator(max_denominator)
        if lo == hi == cand:
            break
    else:
        return IrrationalRotation(est, unc)
    if abs(cand - est) > unc:
        return IrrationalRotation(est, unc)
    a = cand.numerator // cand.denominator
    frac = cand - a
    if frac == 0:
        a = a % (q - 1) if a == q - 1 else a  # lam near 1-1/q sees digit q-1
    if not (0 <= a <= q - 2):
        return IrrationalRotation(est, unc)
    cycle = build_cycle(q, a, frac)
    if lambda_window(cycle).contains_mod1(lam):
        return RationalRotation(cand, cycle)
    return IrrationalRotation(est, unc)


def measure_support(q: int, lam: float, max_period: int,
                    iterations: int = 10_000):
    """Support of the invariant measure on the arc based at lam.

    Returns the certified SturmianCycle when the rotation number is rational
    with denominator <= max_period, else an IrrationalFlag.
    """
    rot = rotation_number(q, lam, iterations=iterations,
                          max_denominator=max_period)
    if isinstance(rot, RationalRotation):
        return rot.cycle
    return IrrationalFlag(rot)


def rotation_staircase(q: int, points: int, iterations: int = 20_000,
                       max_denominator: int = 64):
    """Rows (lam, estimate, certified rotation or None) over a uniform grid.

    The estimate column is the raw lift-orbit quotient with a single fixed
    iteration count, which is nondecreasing in lam; the certified column
    carries the exact rational where the cycle confirmation succeeds.
    """
    import numpy as np

    lams = np.arange(points) / points
    x = lams.copy()
    x0 = x.copy()
    plateau = q * lams + 1.0
    for _ in range(iterations):
        m = np.floor(x - lams)
        u = x - m
        x = m + np.minimum(q * u, plateau)
    est = (x - x0) / iterations
    rows = []
    for lam, e in zip(lams.tolist(), est.tolist()):
        cand = Fraction(e).limit_denominator(max_denominator)
        cert = None
        if abs(cand - e) <= 2.0 / iterations:
            a = cand.numerator // cand.denominator
            frac = cand - a
            if frac == 0 and a == q - 1:
                a = 0
            if 0 <= a <= q - 2:
                cycle = build_cycle(q, a, frac)
                if lambda_window(cycle).contains_mod1(lam):
                    cert = cand
        rows.append((lam, e, cert))
    return rows
