"""Command-line surface: certificates, tables, curves, verification suites.

Output is deterministic: fixed column orders, 15-significant-digit reals,
rationals as num/den, no timestamps.  Worker processes (``--threads``) feed
an order-preserving map, so parallel runs emit identical bytes.

Exit codes: 0 success, 1 partial/other failure, 2 nonperiodic report,
3 guard violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, fields
from fractions import Fraction

from .certify import (DEFAULT_LAMBDA_TOL, DEFAULT_MAX_PERIOD,
                      DEFAULT_VALIDITY_TOL, GelfondCertificate,
                      NonPeriodicReport, beta_curve, exponent_table,
                      gelfond_exponent, validity_table)
from .checks import (centering_bound_check, inner_shift_negativity_grid,
                     outer_shift_negativity_grid, sturmian_condition_probe)
from .circle import DEFAULT_TARGET_ERR, DEPTH_CAP, exit_time_profile
from .errors import GelfondError, GuardError
from .potential import PotentialParams
from .series import (modulus_product, multiplicativity_check,
                     polynomial_profile, polynomial_sum, sup_exponent_fit)
from .sturmian import enumerate_cycles, lambda_window, rotation_staircase

CONFIG_ENV_VAR = "GELFOND_CONFIG"


@dataclass
class RunConfig:
    """Defaults shared by the subcommands; flags override config-file values."""

    q: int = 2
    max_period: int = DEFAULT_MAX_PERIOD
    v_target_err: float = DEFAULT_TARGET_ERR
    bisect_tol: float = DEFAULT_LAMBDA_TOL
    validity_tol: float = DEFAULT_VALIDITY_TOL
    depth_cap: int = DEPTH_CAP
    grid_size: int = 1024
    threads: int = 0  # 0 means all available cores
    output: str = ""  # empty means stdout
    format: str = "csv"

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("q must be >= 2")
        for name in ("v_target_err", "bisect_tol", "validity_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


def load_config(path: str | None) -> dict:
    """Parse a key=value config file; unknown keys are rejected."""
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return {}
    known = {f.name: f.type for f in fields(RunConfig)}
    out = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {raw.rstrip()}")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in known:
                raise ValueError(f"unknown config key: {key}")
            caster = {"int": int, "float": float, "str": str}[known[key]]
            out[key] = caster(val)
    return out


def fmt(x: float) -> str:
    """Reals as 15 significant digits, matching the reference tables."""
    return f"{x:.15g}"


def frac(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def parse_c(text: str) -> float:
    """Accept a float or a num/den fraction for the phase parameter."""
    if "/" in text:
        return float(Fraction(text)) % 1.0
    return float(text) % 1.0


def _writer(path: str):
    if path:
        return open(path, "w", newline="", encoding="utf-8")
    return sys.stdout


def _emit_rows(path: str, header: list[str], rows) -> None:
    fh = _writer(path)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    finally:
        if fh is not sys.stdout:
            fh.close()


def _threads(args) -> int:
    n = args.threads
    if n == 0:
        n = os.cpu_count() or 1
    return n


def cmd_gelfond(args) -> int:
    params = PotentialParams(args.q, parse_c(args.c))
    try:
        res = gelfond_exponent(params, args.max_period, tol=args.bisect_tol,
                               target_err=args.v_target_err,
                               depth_cap=args.depth_cap)
    except GuardError as exc:
        if args.json:
            print(json.dumps({"schema_version": 1, "status": "guard_error",
                              "reason": str(exc)}, sort_keys=True))
        else:
            print(f"guard error: {exc}", file=sys.stderr)
        return 3
    if isinstance(res, NonPeriodicReport):
        if args.json:
            print(json.dumps(res.to_json_dict(), sort_keys=True))
        else:
            print(f"nonperiodic: {res.reason}")
            print(f"lambda_star = {fmt(res.lambda_star % 1.0)}")
            rot = res.rotation
            if rot is not None and hasattr(rot, "uncertainty"):
                print(f"rotation estimate = {fmt(rot.value)} "
                      f"+- {fmt(rot.uncertainty)}")
            elif rot is not None:
                print(f"rotation = {rot.value}")
        return 2
    assert isinstance(res, GelfondCertificate)
    if args.json:
        print(json.dumps(res.to_json_dict(), sort_keys=True))
        return 0
    cyc = res.cycle
    print(f"beta  = {fmt(res.beta)}")
    print(f"gamma = {fmt(res.gamma)}")
    print(f"cycle = period {cyc.period}, rotation {cyc.rotation}, "
          f"points {{{', '.join(frac(p) for p in cyc.points)}}}")
    print(f"lambda_star = {fmt(res.lambda_star % 1.0)}")
    print(f"v({fmt(res.lambda1 % 1.0)}) = {fmt(res.v1.value)} "
          f"+- {fmt(res.v1.err_bound)}")
    print(f"v({fmt(res.lambda2 % 1.0)}) = {fmt(res.v2.value)} "
          f"+- {fmt(res.v2.err_bound)}")
    return 0


def cmd_cycles(args) -> int:
    rows = []
    for cy in enumerate_cycles(args.q, args.max_period):
        if cy.period < args.min_period:
            continue
        win = lambda_window(cy)
        rows.append([args.q, cy.period, cy.rotation.numerator,
                     cy.rotation.denominator, cy.base_digit,
                     frac(cy.s_min), frac(cy.s_max),
                     frac(win.lo), frac(win.hi)])
    _emit_rows(args.output, ["q", "period", "rotation_num", "rotation_den",
                             "base_digit", "s_min", "s_max", "window_lo",
                             "window_hi"], rows)
    return 0


def cmd_validity(args) -> int:
    rows1 = validity_table(args.q, args.max_period,
                           validity_tol=args.validity_tol,
                           threads=_threads(args))
    if args.period is not None:
        rows1 = [r for r in rows1 if r.period == args.period]
    out = []
    failed = 0
    for r in rows1:
        if r.status != "OK":
            failed += 1
            out.append([r.period, frac(r.rotation), frac(r.window_lo),
                        frac(r.window_hi), "", "", r.status])
        else:
            out.append([r.period, frac(r.rotation), frac(r.window_lo),
                        frac(r.window_hi), fmt(r.c_lo), fmt(r.c_hi), "OK"])
    _emit_rows(args.output, ["period", "rotation", "window_lo", "window_hi",
                             "c_lo", "c_hi", "status"], out)
    return 1 if failed else 0


def cmd_table2(args) -> int:
    c_list = None
    if args.c_list:
        with open(args.c_list, encoding="utf-8") as fh:
            c_list = [Fraction(line.strip()) for line in fh if line.strip()]
    rows2 = exponent_table(args.q, args.max_period, c_list=c_list,
                           threads=_threads(args))
    out = []
    failed = 0
    for r in rows2:
        if r.status == "OK":
            out.append([r.c_label, fmt(r.beta), fmt(r.gamma), r.period, "OK"])
        else:
            if r.status.startswith("ERROR"):
                failed += 1
            out.append([r.c_label, "", "", "", r.status])
    _emit_rows(args.output, ["c", "beta", "gamma", "period", "status"], out)
    return 1 if failed else 0


def _svg_curve(points, path: str) -> None:
    """Self-contained SVG of gamma(c): axes plus one polyline per OK run."""
    width, height = 840, 560
    mx, my = 60, 40
    pw, ph = width - 2 * mx, height - 2 * my
    y_lo, y_hi = 0.5, 1.0

    def sx(c):
        return mx + pw * c

    def sy(g):
        return my + ph * (y_hi - g) / (y_hi - y_lo)

    segs: list[list[tuple[float, float]]] = [[]]
    for pt in points:
        if pt.status == "OK":
            segs[-1].append((sx(pt.c), sy(min(max(pt.gamma, y_lo), y_hi))))
        elif segs[-1]:
            segs.append([])
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{mx}" y1="{my + ph}" x2="{mx + pw}" y2="{my + ph}" '
        'stroke="black"/>',
        f'<line x1="{mx}" y1="{my}" x2="{mx}" y2="{my + ph}" stroke="black"/>',
    ]
    for i in range(6):
        c = i / 5
        lines.append(f'<text x="{sx(c):.1f}" y="{my + ph + 20}" '
                     f'font-size="12" text-anchor="middle">{c:.1f}</text>')
    for i in range(6):
        gv = y_lo + (y_hi - y_lo) * i / 5
        lines.append(f'<text x="{mx - 8}" y="{sy(gv):.1f}" font-size="12" '
                     f'text-anchor="end">{gv:.1f}</text>')
    for seg in segs:
        if len(seg) < 2:
            continue
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in seg)
        lines.append(f'<polyline points="{pts}" fill="none" stroke="navy" '
                     'stroke-width="1"/>')
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_beta_curve(args) -> int:
    points = beta_curve(args.q, args.max_period, args.resolution,
                        threads=_threads(args))
    out = []
    for pt in points:
        if pt.status == "OK":
            out.append([fmt(pt.c), fmt(pt.beta), fmt(pt.gamma), pt.period,
                        "OK"])
        else:
            out.append([fmt(pt.c), "", "", "", pt.status])
    _emit_rows(args.output, ["c", "beta", "gamma", "period", "status"], out)
    if args.svg:
        _svg_curve(points, args.svg)
    return 0


def cmd_staircase(args) -> int:
    rows = rotation_staircase(args.q, args.points, iterations=args.iterations,
                              max_denominator=args.max_period)
    out = []
    for lam, est, cert in rows:
        if cert is None:
            out.append([fmt(lam), fmt(est), "", ""])
        else:
            out.append([fmt(lam), fmt(est), cert.numerator, cert.denominator])
    _emit_rows(args.output, ["lambda", "rho_estimate", "rho_num", "rho_den"],
               out)
    return 0


def cmd_profile(args) -> int:
    prof = exit_time_profile(args.q, parse_c(args.lam), args.depth,
                             args.grid_size)
    _emit_rows(args.output, ["x", "e"], [[fmt(x), e] for x, e in prof])
    return 0


def cmd_verify(args) -> int:
    import random

    rng = random.Random(args.seed)
    params = PotentialParams(args.q, parse_c(args.c))
    q, c = params.q, params.c
    ok = True

    worst = 0.0
    for _ in range(args.samples):
        x = rng.random()
        n = rng.randint(1, args.n_max)
        direct = abs(polynomial_sum(params, q ** n, x))
        prod = modulus_product(params, n, x)
        err = abs(direct - prod) / max(1.0, direct, prod)
        worst = max(worst, err)
    line_ok = worst <= 1e-10
    ok &= line_ok
    print(f"product identity: worst rel err {worst:.3e} "
          f"[{'PASS' if line_ok else 'FAIL'}]")

    bad = 0
    for _ in range(args.samples):
        t = rng.randint(1, 6)
        a = rng.randint(1, 50)
        b = rng.randint(0, q ** t - 1)
        if not multiplicativity_check(params, a, t, b, x=rng.random()):
            bad += 1
    line_ok = bad == 0
    ok &= line_ok
    print(f"multiplicativity: {bad} failures / {args.samples} "
          f"[{'PASS' if line_ok else 'FAIL'}]")

    worst = 0.0
    for _ in range(args.samples):
        x = rng.random()
        n = rng.randint(1, args.n_max)
        p1 = modulus_product(params, n, x)
        p2 = modulus_product(PotentialParams(q, (1.0 - c) % 1.0), n,
                             (1.0 - x) % 1.0)
        worst = max(worst, abs(p1 - p2) / max(1.0, p1, p2))
    line_ok = worst <= 1e-10
    ok &= line_ok
    print(f"mirror symmetry: worst rel err {worst:.3e} "
          f"[{'PASS' if line_ok else 'FAIL'}]")

    res = gelfond_exponent(params, args.max_period)
    if isinstance(res, GelfondCertificate):
        fit = sup_exponent_fit(params, args.n_max, args.grid_size, res.beta)
        if args.fit_csv:
            _emit_rows(args.fit_csv, ["n", "gamma_n", "excess_n", "argmax_x"],
                       [[r.n, fmt(r.gamma_n), fmt(r.excess_n), fmt(r.argmax_x)]
                        for r in fit])
        floor_ok = all(r.gamma_n >= res.gamma - 0.02 for r in fit)
        ok &= floor_ok
        print(f"exponent floor gamma_n >= gamma - 0.02: "
              f"[{'PASS' if floor_ok else 'FAIL'}]")
    else:
        print("exponent fit skipped: no certificate at this c")

    if args.sigma_csv:
        prof = polynomial_profile(params, q ** min(args.n_max, 12),
                                  args.grid_size)
        _emit_rows(args.sigma_csv, ["x", "abs_sigma"],
                   [[fmt(x), fmt(v)] for x, v in prof])

    print("verify:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def cmd_checks(args) -> int:
    reports = {}
    if args.q >= 3:
        grid = [0.05 + 0.9 * i / (args.c_points - 1)
                for i in range(args.c_points)]
        reports["centering"] = centering_bound_check(args.q, grid)
        reports["inner_shift"] = inner_shift_negativity_grid(
            args.q, args.grid_size, args.grid_size)
    if args.q >= 4:
        reports["outer_shift"] = outer_shift_negativity_grid(
            args.q, args.grid_size, args.grid_size)
    if args.probe_c is not None:
        params = PotentialParams(args.q, parse_c(args.probe_c))
        cert = gelfond_exponent(params, args.max_period)
        if isinstance(cert, GelfondCertificate):
            reports["condition_probe"] = sturmian_condition_probe(
                params, cert, samples=args.samples, depth=args.depth)
        else:
            print(f"probe skipped: no certificate at c={args.probe_c}")
    ok = True
    for name, rep in reports.items():
        ok &= rep.passed
        print(f"{name}: worst {fmt(rep.worst_value)} at {rep.worst_point} "
              f"[{'PASS' if rep.passed else 'FAIL'}]")
        if args.json_dir:
            os.makedirs(args.json_dir, exist_ok=True)
            with open(os.path.join(args.json_dir, f"{name}.json"), "w",
                      encoding="utf-8") as fh:
                json.dump(rep.to_json_dict(), fh, sort_keys=True, indent=2)
    return 0 if ok else 1


def build_parser(defaults: RunConfig) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gelfond",
        description="Certified Gelfond exponents of generalized Thue-Morse "
                    "polynomials",
    )
    parser.add_argument("--config", help="key=value config file "
                        f"(or ${CONFIG_ENV_VAR})")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, threads=False):
        p.add_argument("--q", type=int, default=defaults.q)
        p.add_argument("--max-period", type=int, dest="max_period",
                       default=defaults.max_period)
        p.add_argument("-o", "--output", default=defaults.output,
                       help="output file (default stdout)")
        if threads:
            p.add_argument("--threads", type=int, default=defaults.threads,
                           help="worker processes, 0 = all cores")

    p = sub.add_parser("gelfond", help="certify beta(c) and gamma(c)")
    p.add_argument("--q", type=int, default=defaults.q)
    p.add_argument("--c", required=True, help="phase in [0,1) or num/den")
    p.add_argument("--max-period", type=int, dest="max_period",
                   default=defaults.max_period)
    p.add_argument("--bisect-tol", type=float, dest="bisect_tol",
                   default=defaults.bisect_tol)
    p.add_argument("--target-err", type=float, dest="v_target_err",
                   default=defaults.v_target_err)
    p.add_argument("--depth-cap", type=int, dest="depth_cap",
                   default=defaults.depth_cap)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_gelfond)

    p = sub.add_parser("cycles", help="enumerate Sturmian cycles as CSV")
    common(p)
    p.add_argument("--min-period", type=int, dest="min_period", default=2,
                   help="2 matches the reference cycle table; 1 adds the "
                        "fixed points")
    p.set_defaults(fn=cmd_cycles)

    p = sub.add_parser("validity", help="validity intervals per cycle as CSV")
    common(p, threads=True)
    p.add_argument("--period", type=int, default=None,
                   help="restrict to one period")
    p.add_argument("--tol", type=float, dest="validity_tol",
                   default=defaults.validity_tol)
    p.set_defaults(fn=cmd_validity)

    p = sub.add_parser("table2", help="beta/gamma per c as CSV")
    common(p, threads=True)
    p.add_argument("--c-list", dest="c_list",
                   help="file with one c (num/den) per line; default is the "
                        "reference list")
    p.set_defaults(fn=cmd_table2)

    p = sub.add_parser("beta-curve", help="certified curve over a c grid")
    common(p, threads=True)
    p.add_argument("--resolution", type=int, default=256)
    p.add_argument("--svg", help="also write a vector plot of gamma(c)")
    p.set_defaults(fn=cmd_beta_curve)

    p = sub.add_parser("staircase", help="rotation-number staircase as CSV")
    common(p)
    p.add_argument("--points", type=int, default=2048)
    p.add_argument("--iterations", type=int, default=20000)
    p.set_defaults(fn=cmd_staircase)

    p = sub.add_parser("profile", help="first-exit time profile as CSV")
    common(p)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--depth", type=int, default=30)
    p.add_argument("--grid", type=int, dest="grid_size",
                   default=defaults.grid_size)
    p.set_defaults(fn=cmd_profile)

    p = sub.add_parser("verify", help="polynomial-side verification suite")
    common(p)
    p.add_argument("--c", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--n-max", type=int, dest="n_max", default=8)
    p.add_argument("--grid", type=int, dest="grid_size",
                   default=defaults.grid_size)
    p.add_argument("--fit-csv", dest="fit_csv",
                   help="write the exponent-fit rows here")
    p.add_argument("--sigma-csv", dest="sigma_csv",
                   help="write the |partial sum| profile here")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("checks", help="inequality grids and condition probe")
    common(p)
    p.add_argument("--grid", type=int, dest="grid_size", default=200)
    p.add_argument("--c-points", type=int, dest="c_points", default=8)
    p.add_argument("--probe-c", dest="probe_c", default=None)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--depth", type=int, default=30)
    p.add_argument("--json-dir", dest="json_dir",
                   help="write GridReport JSON files here")
    p.set_defaults(fn=cmd_checks)

    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    config_path = None
    if "--config" in argv:
        config_path = argv[argv.index("--config") + 1]
    try:
        defaults = RunConfig(**load_config(config_path))
    except (OSError, ValueError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    parser = build_parser(defaults)
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except GuardError as exc:
        print(f"guard error: {exc}", file=sys.stderr)
        return 3
    except GelfondError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
