"""Log-amplitude potential driving the maximization.

The central object is the 1-periodic amplitude

    amplitude(x) = |sin(pi*q*(x+c)) / sin(pi*(x+c))|

for an integer base q >= 2 and a phase parameter c in [0,1).  Its logarithm
(the potential) reaches log q at x = -c (mod 1), has q-1 logarithmic
singularities at x = -c + k/q (k not divisible by q), and is strictly concave
between adjacent singularities.  Everything downstream (balance integrals,
certificates, sup-norm fits) evaluates through this module so that the
parameter translation f_c(x) = f_0(x+c) holds bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering

import numpy as np

from .errors import SingularityError

# Circle-distance thresholds, in circle units.
REMOVABLE_TOL = 1e-12     # x+c this close to an integer counts as the maximum
ZERO_TOL = 1e-12          # x+c this close to a zero of the amplitude counts as 0
SINGULARITY_GUARD = 1e-9  # default guard for derivative evaluation
_SERIES_CUTOFF = 1e-4     # below this |x+c mod 1| the derivative formulas cancel


@dataclass(frozen=True)
class PotentialParams:
    """Base q >= 2 and phase c in [0,1)."""

    q: int
    c: float

    def __post_init__(self):
        if not isinstance(self.q, int) or self.q < 2:
            raise ValueError(f"q must be an integer >= 2, got {self.q!r}")
        if not (0.0 <= self.c < 1.0):
            raise ValueError(f"c must lie in [0,1), got {self.c!r}")


@total_ordering
class ExtendedReal:
    """A real number or the distinguished NEG_INFINITY state.

    NEG_INFINITY compares strictly below every finite value, so comparisons
    are total; it is a dedicated state rather than float('-inf') so that
    serialization stays unambiguous.
    """

    __slots__ = ("_value",)

    def __init__(self, value=None):
        self._value = None if value is None else float(value)

    @property
    def is_neg_infinity(self) -> bool:
        return self._value is None

    @property
    def value(self):
        """The finite value, or None for NEG_INFINITY."""
        return self._value

    def __float__(self) -> float:
        return float("-inf") if self._value is None else self._value

    def _key(self, other):
        if isinstance(other, ExtendedReal):
            return float(other)
        if isinstance(other, (int, float)):
            return float(other)
        return NotImplemented

    def __eq__(self, other):
        key = self._key(other)
        if key is NotImplemented:
            return NotImplemented
        return float(self) == key

    def __lt__(self, other):
        key = self._key(other)
        if key is NotImplemented:
            return NotImplemented
        return float(self) < key

    def __hash__(self):
        return hash(float(self))

    def __repr__(self):
        return "NEG_INFINITY" if self._value is None else f"ExtendedReal({self._value!r})"


NEG_INFINITY = ExtendedReal(None)

_PI = math.pi


def _amp(q: int, u: float) -> float:
    """Amplitude |sin(pi*q*u)/sin(pi*u)| with removable points patched."""
    ur = u - round(u)
    if abs(ur) <= REMOVABLE_TOL:
        return float(q)
    v = q * ur
    vr = v - round(v)
    if abs(vr) <= q * ZERO_TOL:
        return 0.0
    return abs(math.sin(_PI * vr) / math.sin(_PI * ur))


def _f(q: int, u: float) -> float:
    """log amplitude as a plain float, -inf at the zeros."""
    a = _amp(q, u)
    if a == 0.0:
        return float("-inf")
    return math.log(a)


def _fp(q: int, u: float, guard: float = SINGULARITY_GUARD) -> float:
    """Derivative of the log amplitude; series branch near the maximum."""
    ur = u - round(u)
    if abs(ur) < _SERIES_CUTOFF:
        z = _PI * ur
        return _PI * (z * (1 - q * q) / 3.0 + z ** 3 * (1 - q ** 4) / 45.0)
    v = q * ur
    vr = v - round(v)
    if abs(vr) < q * guard:
        raise SingularityError(
            f"derivative requested within {guard} of a singularity (u={u!r})"
        )
    return _PI * (q / math.tan(_PI * vr) - 1.0 / math.tan(_PI * ur))


def _fpp(q: int, u: float, guard: float = SINGULARITY_GUARD) -> float:
    """Second derivative of the log amplitude, strictly negative."""
    ur = u - round(u)
    if abs(ur) < _SERIES_CUTOFF:
        z = _PI * ur
        return _PI * _PI * ((1 - q * q) / 3.0 + z * z * (1 - q ** 4) / 15.0)
    v = q * ur
    vr = v - round(v)
    if abs(vr) < q * guard:
        raise SingularityError(
            f"second derivative requested within {guard} of a singularity (u={u!r})"
        )
    su = math.sin(_PI * ur)
    sv = math.sin(_PI * vr)
    return _PI * _PI * (1.0 / (su * su) - q * q / (sv * sv))


def amplitude(params: PotentialParams, x: float) -> float:
    """|sin(pi*q*(x+c)) / sin(pi*(x+c))|, total on the reals.

    Returns the limit value q at the removable points x+c in Z and exactly
    0.0 within ZERO_TOL of the amplitude zeros.
    """
    return _amp(params.q, x + params.c)


def potential(params: PotentialParams, x: float) -> ExtendedReal:
    """log(amplitude), NEG_INFINITY exactly where the amplitude vanishes."""
    val = _f(params.q, x + params.c)
    if val == float("-inf"):
        return NEG_INFINITY
    return ExtendedReal(val)


def potential_derivative(params: PotentialParams, x: float,
                         guard: float = SINGULARITY_GUARD) -> float:
    """First derivative of the potential at x.

    Raises SingularityError when x+c is within `guard` (circle units) of a
    logarithmic singularity.  The value is 0 at the maximum x = -c.
    """
    return _fp(params.q, x + params.c, guard)


def potential_second_derivative(params: PotentialParams, x: float,
                                guard: float = SINGULARITY_GUARD) -> float:
    """Second derivative of the potential, < 0 away from singularities."""
    return _fpp(params.q, x + params.c, guard)


def amplitude_array(q: int, c: float, x: np.ndarray) -> np.ndarray:
    """Vectorized amplitude; no guards, removable points patched to q."""
    u = np.asarray(x, dtype=float) + c
    ur = u - np.round(u)
    vr = q * ur - np.round(q * ur)
    removable = np.abs(ur) <= REMOVABLE_TOL
    den = np.abs(np.sin(np.pi * ur))
    num = np.abs(np.sin(np.pi * vr))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = num / den
    out = np.where(removable, float(q), out)
    out = np.where(~removable & (np.abs(vr) <= q * ZERO_TOL), 0.0, out)
    return out


def potential_array(q: int, c: float, x: np.ndarray) -> np.ndarray:
    """Vectorized log amplitude; returns -inf at the zeros (no exceptions)."""
    a = amplitude_array(q, c, x)
    with np.errstate(divide="ignore"):
        return np.log(a)


def potential_derivative_array(q: int, c: float, x: np.ndarray) -> np.ndarray:
    """Vectorized derivative of the potential; no singularity guard.

    Callers must keep arguments away from the logarithmic singularities;
    near the maximum the series branch avoids the cot cancellation.
    """
    u = np.asarray(x, dtype=float) + c
    ur = u - np.round(u)
    vr = q * ur - np.round(q * ur)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.pi * (q / np.tan(np.pi * vr) - 1.0 / np.tan(np.pi * ur))
    z = np.pi * ur
    series = np.pi * (z * (1 - q * q) / 3.0 + z ** 3 * (1 - q ** 4) / 45.0)
    return np.where(np.abs(ur) < _SERIES_CUTOFF, series, direct)
