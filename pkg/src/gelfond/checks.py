"""Finite-grid confirmations of the inequality bounds behind the certificates.

Three families: the centering bound on where the balanced arc sits, two
negativity grids for composite bounds controlling points reached by 1/q
shifts of the arc, and a direct probe that the transfer-corrected potential
is constant on the certified arc and strictly smaller outside.  These are
numerical confirmations with explicit margins, not proofs; the margins double
as regression baselines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .certify import GelfondCertificate, find_balance_point
from .errors import GuardError
from .potential import (PotentialParams, _f, _fp,
                        potential_derivative_array)

BOUNDARY_OFFSET = 1e-6  # pull grids off the open-domain edges


@dataclass(frozen=True)
class GridReport:
    """Worst value of a scanned quantity, with the point attaining it."""

    grid_spec: dict
    worst_value: float
    worst_point: tuple
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": 1,
            "grid_spec": self.grid_spec,
            "worst_value": self.worst_value,
            "worst_point": list(self.worst_point),
            "passed": self.passed,
            "details": self.details,
        }


def centering_bound_check(q: int, c_grid, **pipeline_kwargs) -> GridReport:
    """Check 3/(8q) < theta < 5/(8q) for theta = lam* + 1/q + c, q >= 3.

    theta measures where the balanced arc's right endpoint sits relative to
    the potential maximum; the bound says the arc is nearly centered.
    """
    if q < 3:
        raise ValueError("the centering bound applies to q >= 3")
    lo = 3.0 / (8.0 * q)
    hi = 5.0 / (8.0 * q)
    worst = math.inf
    worst_point = None
    thetas = []
    for c in c_grid:
        lam = find_balance_point(PotentialParams(q, float(c) % 1.0),
                                 **pipeline_kwargs)
        theta = lam + 1.0 / q + (float(c) % 1.0)
        theta -= math.floor(theta)  # lifted lam has lam+c in (-1/q, 0)
        margin = min(theta - lo, hi - theta)
        thetas.append(theta)
        if margin < worst:
            worst = margin
            worst_point = (float(c), theta)
    return GridReport(
        grid_spec={"q": q, "c_grid": [float(c) for c in c_grid],
                   "bound": [lo, hi]},
        worst_value=worst,
        worst_point=worst_point,
        passed=worst > 0.0,
        details={"thetas": thetas},
    )


def inner_shift_negativity_grid(q: int, t_steps: int = 200,
                                s_steps: int = 200) -> GridReport:
    """Grid maximum of A(s) + B(t,s) on t in (3/8q, 5/8q), 0 < s <= 1/q - t.

    A(s) = log(sin(pi s) / sin(pi (1/q + s))),
    B(t,s) = log q - f(t) - f'(t) (1/q - t - s)/(q-1), f the base potential.
    Negativity bounds the shifted points whose base point lies inside the arc.
    """
    if q < 3:
        raise ValueError("the inner-shift grid applies to q >= 3")
    off = BOUNDARY_OFFSET
    one_q = 1.0 / q
    log_q = math.log(q)
    worst = -math.inf
    worst_point = None
    ts = np.linspace(3.0 / (8 * q) + off, 5.0 / (8 * q) - off, t_steps)
    for t in ts:
        f_t = _f(q, t)
        fp_t = _fp(q, t)
        s = np.linspace(off, one_q - t, s_steps)
        a_vals = np.log(np.sin(np.pi * s) / np.sin(np.pi * (one_q + s)))
        b_vals = log_q - f_t - fp_t * (one_q - t - s) / (q - 1)
        h = a_vals + b_vals
        j = int(np.argmax(h))
        if h[j] > worst:
            worst = float(h[j])
            worst_point = (float(t), float(s[j]))
    return GridReport(
        grid_spec={"q": q, "t_steps": t_steps, "s_steps": s_steps,
                   "offset": off},
        worst_value=worst,
        worst_point=worst_point,
        passed=worst < 0.0,
    )


def outer_shift_negativity_grid(q: int, t_steps: int = 200,
                                s_steps: int = 200) -> GridReport:
    """Grid maximum of U(s) + V(t,s) on t in (3/8q, 5/8q), t <= s < 1/q.

    U(s) = log(sin(pi (1/q - s)) / sin(pi (1/q + s))),
    V(t,s) = log q - f(t) + f(1/q - t - (s-t)/(q-1)) - f(1/q - t)
             - f'(t) (s-t)/(q-1).
    Negativity bounds the shifted points whose base point lies past the arc.
    """
    if q < 4:
        raise ValueError("the outer-shift grid applies to q >= 4")
    off = BOUNDARY_OFFSET
    one_q = 1.0 / q
    log_q = math.log(q)
    worst = -math.inf
    worst_point = None
    ts = np.linspace(3.0 / (8 * q) + off, 5.0 / (8 * q) - off, t_steps)
    for t in ts:
        f_t = _f(q, t)
        fp_t = _fp(q, t)
        f_qt = _f(q, one_q - t)
        s = np.linspace(t, one_q - off, s_steps)
        u_vals = np.log(np.sin(np.pi * (one_q - s)) / np.sin(np.pi * (one_q + s)))
        inner = one_q - t - (s - t) / (q - 1)
        f_inner = np.array([_f(q, float(w)) for w in inner])
        v_vals = log_q - f_t + f_inner - f_qt - fp_t * (s - t) / (q - 1)
        g = u_vals + v_vals
        j = int(np.argmax(g))
        if g[j] > worst:
            worst = float(g[j])
            worst_point = (float(t), float(s[j]))
    return GridReport(
        grid_spec={"q": q, "t_steps": t_steps, "s_steps": s_steps,
                   "offset": off},
        worst_value=worst,
        worst_point=worst_point,
        passed=worst < 0.0,
    )


_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _tau_point(q: int, lam_mod: float, x: float) -> float:
    return lam_mod + ((x - q * lam_mod) % 1.0) / q


def _transfer_derivative(q: int, c: float, lam_mod: float, x: float,
                         depth: int) -> float:
    """Truncated series sum_{n>=1} f_c'(tau^n x) / q^n."""
    acc = 0.0
    w = 1.0
    y = x
    for _ in range(depth):
        y = _tau_point(q, lam_mod, y)
        w /= q
        acc += w * _fp(q, y + c)
    return acc


def _transfer_derivative_array(q: int, c: float, lam_mod: float,
                               x: np.ndarray, depth: int) -> np.ndarray:
    acc = np.zeros_like(x)
    w = 1.0
    y = np.asarray(x, dtype=float)
    for _ in range(depth):
        y = lam_mod + ((y - q * lam_mod) % 1.0) / q
        w /= q
        acc += w * potential_derivative_array(q, c, y)
    return acc


def _cumulative_transfer_integral(q: int, c: float, lam_mod: float,
                                  positions: np.ndarray, depth: int,
                                  breaks: list[float],
                                  max_panel: float = 0.005):
    """Integrals of the transfer derivative from the arc base to each
    position (arc-length coordinates in [0, 1)), in one Gauss-Legendre sweep.

    Panels split at the requested positions and at the forward orbit of the
    branch cut (the only interior discontinuities of the truncated series).
    """
    cuts = {0.0}
    for p in positions:
        cuts.add(float(p))
    for br in breaks:
        t = (br - lam_mod) % 1.0
        if 0.0 < t < 1.0:
            cuts.add(t)
    grid = sorted(cuts)
    cum = {0.0: 0.0}
    total = 0.0
    for lo, hi in zip(grid, grid[1:]):
        n_sub = max(1, int(math.ceil((hi - lo) / max_panel)))
        edges = np.linspace(lo, hi, n_sub + 1)
        mids = 0.5 * (edges[:-1] + edges[1:])
        halves = 0.5 * (edges[1:] - edges[:-1])
        pts = (mids[:, None] + halves[:, None] * _GAUSS_NODES[None, :])
        vals = _transfer_derivative_array(q, c, lam_mod,
                                          lam_mod + pts.ravel(), depth)
        vals = vals.reshape(pts.shape)
        total += float(np.sum(halves * (vals @ _GAUSS_WEIGHTS)))
        cum[hi] = total
    return cum


def sturmian_condition_probe(params: PotentialParams,
                             certificate: GelfondCertificate,
                             samples: int = 50, depth: int = 30, *,
                             boundary_margin: float = 0.01,
                             inside_tol: float = 1e-4,
                             outside_margin: float = 1e-3) -> GridReport:
    """Probe F = f_c + psi - psi o T against beta on and off the arc.

    psi differences are quadratures of the truncated transfer-derivative
    series from the arc base (psi itself is only defined up to a constant).
    F should be constant (= beta) on the arc and strictly below beta outside;
    samples keep boundary_margin away from the arc endpoints and from the
    potential singularities.
    """
    q, c = params.q, params.c
    lam = certificate.lambda_star
    lam_mod = lam % 1.0
    beta = certificate.beta
    one_q = 1.0 / q

    cut = (q * lam_mod) % 1.0
    breaks = []
    y = cut
    for _ in range(depth + 1):
        breaks.append(y)
        y = (q * y) % 1.0

    singulars = [(-c + k / q) % 1.0 for k in range(1, q)]
    inside_x = [(lam_mod + float(t)) % 1.0
                for t in np.linspace(boundary_margin, one_q - boundary_margin,
                                     samples)]
    outside_x = []
    for t in np.linspace(boundary_margin, 1.0 - one_q - boundary_margin,
                         samples):
        x = (lam_mod + one_q + float(t)) % 1.0
        if any(abs((x - s + 0.5) % 1.0 - 0.5) < boundary_margin
               for s in singulars):
            continue
        outside_x.append(x)
    if not inside_x:
        raise GuardError("no interior samples survive the boundary margin")

    # one cumulative sweep covers every psi difference needed: arcs of the
    # samples and of their forward images
    arcs = set()
    for x in inside_x + outside_x:
        arcs.add((x - lam_mod) % 1.0)
        arcs.add(((q * x) % 1.0 - lam_mod) % 1.0)
    cum = _cumulative_transfer_integral(q, c, lam_mod,
                                        np.array(sorted(arcs)), depth, breaks)

    def big_f(x_mod: float) -> float:
        arc = (x_mod - lam_mod) % 1.0
        arc_t = ((q * x_mod) % 1.0 - lam_mod) % 1.0
        return _f(q, x_mod + c) + cum[arc] - cum[arc_t]

    inside_resid = 0.0
    inside_worst = None
    for x in inside_x:
        r = abs(big_f(x) - beta)
        if r > inside_resid:
            inside_resid = r
            inside_worst = x

    outside_worst = -math.inf
    outside_point = None
    for x in outside_x:
        d = big_f(x) - beta
        if d > outside_worst:
            outside_worst = d
            outside_point = x
    passed = inside_resid <= inside_tol and outside_worst < -outside_margin
    return GridReport(
        grid_spec={"q": q, "c": c, "samples": samples, "depth": depth,
                   "boundary_margin": boundary_margin},
        worst_value=outside_worst,
        worst_point=(outside_point,),
        passed=passed,
        details={"inside_residual": inside_resid,
                 "inside_worst_x": inside_worst,
                 "inside_tol": inside_tol,
                 "outside_margin": outside_margin},
    )
