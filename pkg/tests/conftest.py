"""Shared oracles and fixtures.

The oracles here deliberately avoid the code paths they check: derivatives
are cross-checked by central finite differences of the potential, and the
balance integral by midpoint quadrature of f' weighted with a first-exit
time computed by forward orbit iteration (no inverse-branch machinery).
"""

import random

import numpy as np
import pytest


def central_diff(fn, x: float, h: float) -> float:
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


def forward_exit_times(q: int, lam: float, xs: np.ndarray,
                       cap: int = 45) -> np.ndarray:
    """First-exit counts e(x) = inf{k >= 0 : T^k x outside [lam, lam+1/q)}."""
    lam_mod = lam % 1.0
    e = np.zeros(len(xs), dtype=np.int64)
    y = np.asarray(xs, dtype=float) % 1.0
    alive = np.ones(len(xs), dtype=bool)
    for _ in range(cap):
        alive = alive & ((y - lam_mod) % 1.0 < 1.0 / q)
        if not alive.any():
            break
        e += alive
        y = (q * y) % 1.0
    return e


def balance_quadrature_oracle(q: int, c: float, lam: float, depth: int = 45,
                              n: int = 1_000_000) -> float:
    """Midpoint quadrature of f_c' * e over the base arc (independent path)."""
    lam_mod = lam % 1.0
    xs = lam_mod + (np.arange(n) + 0.5) / n / q
    e = forward_exit_times(q, lam, xs, cap=depth)
    u = xs + c
    ur = u - np.round(u)
    vr = q * ur - np.round(q * ur)
    fp = np.pi * (q / np.tan(np.pi * vr) - 1.0 / np.tan(np.pi * ur))
    return float(np.mean(fp * e) / q)


@pytest.fixture
def rng():
    return random.Random(20260810)
