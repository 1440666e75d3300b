"""Command-line interface.

Subcommands cover basis dumps, kernel tables, the spectral/principal-value
Riesz comparison, the exact identity suite, kernel bound scans, weighted
norm-ratio scans, and the boundary-function limit.  Grid and curve data go
to CSV, structured reports to JSON; diagnostics go to stderr.  Identical
configurations (including the seed) produce byte-identical artifacts at
any thread count.

Exit codes: 0 success, 1 an enabled assertion failed (a JSON witness is
printed to stderr), 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import combinat, kernels, operators, verify
from .basis import BasisTag, analyze, synthesize
from .kernels import KernelSpec
from .specfun import AlphaParam

__all__ = ["main"]


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _csv(rows, header) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(v)) if isinstance(v, float) else str(v)
                              for v in row))
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _fail(witness: dict) -> int:
    sys.stderr.write(_json_text({"assertion-failure": witness}))
    return 1


def _float_list(text: str) -> list:
    return [float(v) for v in text.split(",") if v.strip()]


def _basis_tag(family: str, alpha) -> BasisTag:
    if family == "hermite":
        return BasisTag("hermite")
    return BasisTag("laguerre-phi", AlphaParam(alpha))


def _default_bump(family: str, args) -> operators.SmoothFunction | None:
    center = args.bump_center
    radius = args.bump_radius
    if center is None:
        center = 0.0 if family == "hermite" else 1.25
    if radius is None:
        radius = 1.0 if family == "hermite" else 0.75
    return operators.bump(center, radius)


def _cubic_spline(xs: np.ndarray, ys: np.ndarray):
    """Natural cubic spline through sorted samples, zero outside the range."""
    n = len(xs)
    h = np.diff(xs)
    rhs = np.zeros(n)
    rhs[1:-1] = 6.0 * ((ys[2:] - ys[1:-1]) / h[1:]
                       - (ys[1:-1] - ys[:-2]) / h[:-1])
    mat = np.zeros((n, n))
    mat[0, 0] = mat[-1, -1] = 1.0
    for i in range(1, n - 1):
        mat[i, i - 1] = h[i - 1]
        mat[i, i] = 2.0 * (h[i - 1] + h[i])
        mat[i, i + 1] = h[i]
    mom = np.linalg.solve(mat, rhs)

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        inside = (x >= xs[0]) & (x <= xs[-1])
        xi = np.clip(np.searchsorted(xs, x, side="right") - 1, 0, n - 2)
        lo, hi = xs[xi], xs[xi + 1]
        dl, dh = x - lo, hi - x
        hh = hi - lo
        val = (mom[xi] * dh**3 + mom[xi + 1] * dl**3) / (6.0 * hh) \
            + (ys[xi] / hh - mom[xi] * hh / 6.0) * dh \
            + (ys[xi + 1] / hh - mom[xi + 1] * hh / 6.0) * dl
        out[inside] = val[inside]
        return out

    return evaluate


def _load_sampled_function(path: str):
    data = np.genfromtxt(path, delimiter=",", names=True)
    xs = np.asarray(data["x"], dtype=float)
    ys = np.asarray(data["f"], dtype=float)
    order = np.argsort(xs)
    xs, ys = xs[order], ys[order]
    fn = _cubic_spline(xs, ys)
    fn.support = (float(xs[0]), float(xs[-1]))
    return fn


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_basis(args) -> int:
    tag = _basis_tag(args.family, args.alpha)
    if args.mode == "samples":
        if args.family == "hermite":
            lo = -args.xmax if args.xmin is None else args.xmin
            xs = np.linspace(lo, args.xmax, args.points)
        else:
            lo = 1e-3 if args.xmin is None else args.xmin
            xs = np.linspace(lo, args.xmax, args.points)
        from .basis import hermite_fn_table, phi_table
        table = (hermite_fn_table(args.n, xs) if args.family == "hermite"
                 else phi_table(args.n, tag.alpha, xs))
        rows = [(float(x), float(v)) for x, v in zip(xs, table[args.n])]
        _write_text(args.out, _csv(rows, ["x", "f"]))
        return 0
    f = _default_bump(args.family, args)
    coeffs = analyze(f, tag, args.n)
    rows = [(n, float(c)) for n, c in enumerate(coeffs.coeffs)]
    _write_text(args.out, _csv(rows, ["n", "c_n"]))
    return 0


def _cmd_kernel_table(args) -> int:
    spec = KernelSpec(args.family, k=args.k, l=args.l, gamma=args.gamma,
                      alpha=args.alpha if "laguerre" in args.family else None)
    xs = _float_list(args.x)
    ys = _float_list(args.y)
    rows = []
    for x in xs:
        for y in ys:
            value, est = kernels.kernel_value(spec, x, y, t=args.t)
            rows.append((spec.family, spec.k, spec.l if spec.l is not None else "",
                         spec.alpha if spec.alpha is not None else "",
                         args.t if args.t is not None else spec.gamma or "",
                         float(x), float(y), float(value), float(est)))
    header = ["family", "k", "l", "alpha", "t_or_gamma", "x", "y", "value",
              "est_err"]
    if args.format == "json":
        _write_text(args.out, _json_text([dict(zip(header, r)) for r in rows]))
    else:
        _write_text(args.out, _csv(rows, header))
    return 0


def _cmd_riesz(args) -> int:
    if args.input_csv:
        f = _load_sampled_function(args.input_csv)
    else:
        f = _default_bump(args.family, args)
    alpha = 0.0 if args.family == "hermite" else float(args.alpha)
    a, b = f.support
    pad = 0.12 * (b - a)
    pts = np.linspace(a + pad, b - pad, args.points)
    tag = _basis_tag(args.family, alpha)
    coeffs = analyze(f, tag, args.nmax)
    if args.family == "hermite":
        out = operators.riesz_spectral_hermite(args.k, coeffs)

        def spectral(x):
            return float(synthesize(out, x))

        spec = KernelSpec("hermite-riesz", k=args.k)
    else:
        def spectral(x):
            return float(operators.riesz_apply_laguerre_spectral(
                args.k, alpha, coeffs, x, tail_tol=np.inf))

        spec = KernelSpec("laguerre-riesz", k=args.k, alpha=alpha)
    rows = []
    worst = 0.0
    for x in pts:
        pv = operators.pv_apply(spec, f, float(x), eps0=args.eps_start,
                                ratio=args.eps_ratio, stages=args.stages)
        sval = spectral(float(x))
        diff = abs(sval - pv.total)
        worst = max(worst, diff)
        rows.append((float(x), sval, pv.extrapolated, pv.wk_correction,
                     diff, pv.err_estimate))
    _write_text(args.out, _csv(rows, ["x", "spectral", "pv", "wk_term",
                                      "abs_diff", "err_est"]))
    if args.max_abs_diff is not None and worst > args.max_abs_diff:
        return _fail({"check": "riesz spectral vs principal value",
                      "worst_abs_diff": worst, "allowed": args.max_abs_diff})
    return 0


def _cmd_identities(args) -> int:
    entries = combinat.identities_report(jmax_a=args.jmax,
                                         jmax_n1=args.jmax_n1,
                                         nmax_23=args.nmax, qmax_23=args.qmax)
    _write_text(args.out, _json_text(entries))
    bad = [e for e in entries if e["status"] != "exact-pass"]
    if bad:
        return _fail({"check": "exact identities", "failures": bad})
    return 0


def _cmd_scan_bounds(args) -> int:
    if args.statement == "prop31-l-table":
        report = verify.check_prop31(args.k, args.l if args.l is not None
                                     else args.k, levels=args.levels,
                                     threads=args.threads)
    else:
        report = verify.check_prop33(args.statement, args.k, args.alpha,
                                     nx=args.nx, ny=args.ny,
                                     levels=args.levels,
                                     threads=args.threads)
    _write_text(args.out, _json_text(report.to_dict()))
    if not report.stable:
        return _fail({"check": "bound scan stability",
                      "report": report.to_dict()})
    return 0


def _cmd_lp_scan(args) -> int:
    report = verify.lp_scan(args.k, args.alpha, args.p, args.delta,
                            args.family_size, seed=args.seed,
                            threads=args.threads)
    _write_text(args.out, _json_text(report.to_dict()))
    if report.in_range and not all(np.isfinite(report.ratios)):
        return _fail({"check": "lp scan finiteness",
                      "report": report.to_dict()})
    return 0


def _cmd_phi_limit(args) -> int:
    report = operators.phi_limit(args.k, eps0=args.eps_start,
                                 ratio=args.eps_ratio, stages=args.stages)
    _write_text(args.out, _json_text(report))
    if abs(report["extrapolated"] - report["closed_form"]) > args.tol:
        return _fail({"check": "phi limit", "report": report})
    return 0


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rieszlag",
        description="Riesz transforms for Hermite and Laguerre expansions")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--out", default="-", help="output path ('-' = stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int,
                       default=max(1, os.cpu_count() or 1))

    p = sub.add_parser("basis", help="dump basis function samples or bump coefficients")
    common(p)
    p.add_argument("--family", choices=["hermite", "laguerre"], required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--mode", choices=["samples", "coeffs"], default="samples")
    p.add_argument("--xmin", type=float, default=None)
    p.add_argument("--xmax", type=float, default=8.0)
    p.add_argument("--points", type=int, default=400)
    p.add_argument("--bump-center", type=float, default=None)
    p.add_argument("--bump-radius", type=float, default=None)
    p.set_defaults(handler=_cmd_basis)

    p = sub.add_parser("kernel-table", help="evaluate kernels on a grid")
    common(p)
    p.add_argument("--family", required=True,
                   choices=["hermite-heat", "laguerre-heat", "hermite-frac",
                            "hermite-riesz", "laguerre-riesz"])
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--x", required=True, help="comma-separated x values")
    p.add_argument("--y", required=True, help="comma-separated y values")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(handler=_cmd_kernel_table)

    p = sub.add_parser("riesz", help="spectral vs principal-value comparison")
    common(p)
    p.add_argument("--family", choices=["hermite", "laguerre"], required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", default="0.0",
                   help="Laguerre type parameter; ignored for hermite")
    p.add_argument("--input-csv", default=None,
                   help="columns x,f; compactly supported samples")
    p.add_argument("--points", type=int, default=5)
    p.add_argument("--eps-start", type=float, default=0.1)
    p.add_argument("--eps-ratio", type=float, default=0.5)
    p.add_argument("--stages", type=int, default=10)
    p.add_argument("--nmax", type=int, default=1200)
    p.add_argument("--bump-center", type=float, default=None)
    p.add_argument("--bump-radius", type=float, default=None)
    p.add_argument("--max-abs-diff", type=float, default=None,
                   help="exit 1 if any |spectral - pv| exceeds this")
    p.set_defaults(handler=_cmd_riesz)

    p = sub.add_parser("identities", help="exact rational identity suite")
    common(p)
    p.add_argument("--jmax", type=int, default=15)
    p.add_argument("--jmax-n1", type=int, default=12)
    p.add_argument("--nmax", type=int, default=8)
    p.add_argument("--qmax", type=int, default=8)
    p.set_defaults(handler=_cmd_identities)

    p = sub.add_parser("scan-bounds", help="kernel bound region scans")
    common(p)
    p.add_argument("--statement", choices=list(verify.STATEMENTS),
                   required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--nx", type=int, default=8)
    p.add_argument("--ny", type=int, default=6)
    p.add_argument("--levels", type=int, default=2)
    p.set_defaults(handler=_cmd_scan_bounds)

    p = sub.add_parser("lp-scan", help="weighted norm ratio scan")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--family-size", type=int, default=20)
    p.set_defaults(handler=_cmd_lp_scan)

    p = sub.add_parser("phi-limit", help="boundary function epsilon-limit")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps-start", type=float, default=0.1)
    p.add_argument("--eps-ratio", type=float, default=0.5)
    p.add_argument("--stages", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-4)
    p.set_defaults(handler=_cmd_phi_limit)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, OverflowError, FileNotFoundError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
