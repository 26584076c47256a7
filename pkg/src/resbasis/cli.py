"""Command-line front end: ``resbasis modes|verify|fit|sweep``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
failure.  Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .basis import (
    FunctionalParams,
    compute_basis,
    el_residual,
    eval_mu,
    mode_record,
    natural_bc,
    p0_modes,
    solve_mode,
)
from .candidates import (
    ShrinkFitSpec,
    ThermoelasticSpec,
    load_sampled_field,
    shrinkfit_field,
    thermoelastic_field,
)
from .errors import ConvergenceError, ResbasisError
from .fields import ShellGeometry
from .fitting import DEFAULT_WINDOW, fit, reconstruct
from .quadrature import QuadratureSpec, energy, energy_inner, l2_inner

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
RECON_NS = (3, 10, 100)
RECON_HEADER = "n,r,target_par,target_perp,approx_par,approx_perp"


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    return f"{float(x) + 0.0:.12g}"  # + 0.0 folds -0 into 0


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# ---------------------------------------------------------------------------
# shared flag handling


def _common(parser: argparse.ArgumentParser, weight: bool = True):
    parser.add_argument("--ri", type=float, default=0.5, help="inner radius")
    parser.add_argument("--ro", type=float, default=1.0, help="outer radius")
    parser.add_argument("--abs-tol", type=float, default=1e-12)
    parser.add_argument("--rel-tol", type=float, default=1e-12)
    parser.add_argument("--strict", action="store_true", help="require the open strip")
    if weight:
        parser.add_argument("--norm-weight", choices=("r2", "paper"), default="r2")


def _geometry(args) -> ShellGeometry:
    try:
        return ShellGeometry(args.ri, args.ro)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _spec(args) -> QuadratureSpec:
    try:
        return QuadratureSpec(args.abs_tol, args.rel_tol, weight=getattr(args, "norm_weight", "r2"))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _params(args, p=None) -> FunctionalParams:
    return FunctionalParams(args.p if p is None else p, args.k, args.strict)


# ---------------------------------------------------------------------------
# modes


def cmd_modes(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    if args.samples is not None and args.samples < 2:
        raise UsageError("--samples must be at least 2")
    params, geometry, spec = _params(args), _geometry(args), _spec(args)
    modes = compute_basis(params, args.n, geometry, spec)
    records = [mode_record(m, spec) for m in modes]
    _write(args.out_json, json.dumps(records, indent=2) + "\n")
    if args.out_csv:
        radii = np.linspace(geometry.r_inner, geometry.r_outer, args.samples or 101)
        lines = ["n,r,s_par,s_perp,mu"]
        for m in modes:
            s_par, s_perp = m.evaluate(radii)
            mu = m.mu(radii)
            for row in zip(radii, s_par, s_perp, mu):
                lines.append(f"{m.index_n}," + ",".join(_fmt(v) for v in row))
        _write(args.out_csv, "\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def verification_table(params, n, geometry, spec, tol):
    """Rows ``(name, value, limit)`` for the invariant suite."""
    modes = compute_basis(params, n, geometry, spec)
    fields = [m.field for m in modes]
    lam = np.array([m.lam for m in modes])
    gram = np.array([[l2_inner(a, b, spec) for b in fields] for a in fields])
    off = gram - np.diag(np.diag(gram))
    rows = [
        ("gram_diagonal_max_dev", float(np.max(np.abs(np.diag(gram) - 1.0))), tol),
        ("gram_offdiagonal_max", float(np.max(np.abs(off))) if n > 1 else 0.0, tol),
    ]
    energies = np.array([energy(f, params.p, spec) for f in fields])
    rows.append(("lambda_2E_rel_max", float(np.max(np.abs(2 * energies - lam) / lam)), tol))
    if n > 1:
        a_off = max(
            abs(energy_inner(fields[i], fields[j], params.p, spec))
            for i in range(n)
            for j in range(i + 1, n)
        )
        rows.append(("energy_offdiagonal_rel", a_off / lam.max(), tol))
    w = geometry.width
    radii = np.linspace(geometry.r_inner + 0.01 * w, geometry.r_outer - 0.01 * w, 50)
    el = max(max(np.max(np.abs(e)) for e in el_residual(m, radii)) / m.lam for m in modes)
    rows.append(("el_residual_rel_max", float(el), tol))
    ends = np.array([geometry.r_inner, geometry.r_outer])
    bc = max(float(np.max(np.abs(m.evaluate(ends)[0]))) for m in modes)
    rows.append(("boundary_s_par_max", bc, tol))
    dense = np.linspace(geometry.r_inner, geometry.r_outer, 400)
    nbc = 0.0
    for m in modes:
        scale = float(np.max(np.abs(dense * m.derivatives(dense, 2)[2])))
        nbc = max(nbc, float(np.max(np.abs(natural_bc(m.constants, params.p, geometry, ends)))) / scale)
    rows.append(("natural_bc_rel_max", nbc, tol))
    return rows


def cmd_verify(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be at least 1 (nothing to verify)")
    params, geometry, spec = _params(args), _geometry(args), _spec(args)
    if spec.weight != "r2":
        print("note: orthonormality only holds under the r2 weight", file=sys.stderr)
    rows = verification_table(params, args.n, geometry, spec, args.tol)
    ok = True
    print(f"{'check':<26} {'value':>12} {'limit':>10}  result")
    for name, value, limit in rows:
        passed = value < limit
        ok &= passed
        print(f"{name:<26} {value:12.3e} {limit:10.1e}  {'PASS' if passed else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# fit


def _parse_breakpoints(text):
    if not text:
        return ()
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise UsageError(f"bad --breakpoints list {text!r}") from exc


def _canonical_csv(text: str) -> str:
    """Accept the reconstruction CSV by keeping the target columns of its first block."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != RECON_HEADER:
        return text
    rows = [ln.split(",") for ln in lines[1:]]
    first = rows[0][0] if rows else None
    out = ["r,s_par,s_perp"]
    out += [",".join(row[1:4]) for row in rows if row[0] == first]
    return "\n".join(out) + "\n"


def _target(args, geometry):
    if args.field == "thermoelastic":
        spec = ThermoelasticSpec(
            kappa=2.8 if args.kappa is None else args.kappa,
            mu=args.mu,
            alpha=args.alpha,
            c=args.c,
            geometry=geometry,
        )
        return thermoelastic_field(spec)
    if args.field == "shrinkfit":
        spec = ShrinkFitSpec(
            kappa=3.0 if args.kappa is None else args.kappa,
            mu=args.mu,
            r_m=args.rm,
            delta=args.delta,
            geometry=geometry,
        )
        return shrinkfit_field(spec)
    if not args.input:
        raise UsageError("--field csv needs --input PATH")
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from exc
    return load_sampled_field(_canonical_csv(text), geometry, _parse_breakpoints(args.breakpoints))


def _recon_path(args):
    if args.out_csv:
        return args.out_csv
    if args.out in (None, "-"):
        return None
    out = Path(args.out)
    return str(out.with_name(out.stem + "_reconstruction.csv"))


def cmd_fit(args) -> int:
    if args.n_max < 1:
        raise UsageError("--n-max must be at least 1")
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    params, geometry, spec = _params(args), _geometry(args), _spec(args)
    try:
        window = tuple(int(v) for v in args.window.split(","))
        assert len(window) == 2 and 1 <= window[0] <= window[1]
    except (ValueError, AssertionError) as exc:
        raise UsageError(f"bad --window {args.window!r}") from exc
    try:
        target = _target(args, geometry)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    modes = compute_basis(params, args.n_max, geometry, spec)
    report = fit(target, params, args.n_max, spec, window, modes)
    _write(args.out, json.dumps(report.to_json(), indent=2) + "\n")

    path = _recon_path(args)
    if path:
        radii = np.linspace(geometry.r_inner, geometry.r_outer, args.samples)
        for b in target.breakpoints:
            radii = radii[np.abs(radii - b) > 1e-12 * geometry.width]
        t_par, t_perp = target.s_par(radii), target.s_perp(radii)
        lines = [RECON_HEADER]
        for n in (n for n in RECON_NS if n <= args.n_max):
            a_par, a_perp = reconstruct(modes, report.coefficients, n, radii)
            for row in zip(radii, t_par, t_perp, a_par, a_perp):
                lines.append(f"{n}," + ",".join(_fmt(v) for v in row))
        _write(path, "\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep


def _p_grid(args):
    if args.p_steps < 1:
        raise UsageError("--p-steps must be at least 1")
    if args.p_min > args.p_max:
        raise UsageError("--p-min must not exceed --p-max")
    for p in (args.p_min, args.p_max):
        FunctionalParams(p, args.k, args.strict)
    if args.p_steps == 1:
        return np.array([args.p_min])
    return np.linspace(args.p_min, args.p_max, args.p_steps)


def cmd_sweep(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    if args.r_steps < 2:
        raise UsageError("--r-steps must be at least 2")
    geometry = _geometry(args)
    spec = _spec(args)
    grid = _p_grid(args)
    p0_modes(args.n, geometry, spec)
    if args.what == "omega":
        lines = ["p,n,omega"]
        for p in grid:
            for n in range(1, args.n + 1):
                lines.append(f"{_fmt(p)},{n},{_fmt(solve_mode(n, float(p), geometry, spec).omega)}")
    else:
        radii = np.linspace(geometry.r_inner, geometry.r_outer, args.r_steps)
        lines = ["p,r,mu"]
        for p in grid:
            params = FunctionalParams(float(p), args.k, args.strict)
            constants = solve_mode(args.n, float(p), geometry, spec)
            mu = eval_mu(constants, params, geometry, radii)
            lines += [f"{_fmt(p)},{_fmt(r)},{_fmt(v)}" for r, v in zip(radii, mu)]
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="resbasis", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("modes", help="compute basis modes")
    m.add_argument("--p", type=float, required=True)
    m.add_argument("--k", type=float, required=True)
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--samples", type=int, default=None, help="radii per mode in the CSV")
    m.add_argument("--out-json", default="-")
    m.add_argument("--out-csv", default=None)
    _common(m)
    m.set_defaults(func=cmd_modes)

    v = sub.add_parser("verify", help="run the invariant suite")
    v.add_argument("--p", type=float, required=True)
    v.add_argument("--k", type=float, required=True)
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--tol", type=float, default=1e-6)
    _common(v)
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fit", help="expand a candidate field in the basis")
    f.add_argument("--field", choices=("thermoelastic", "shrinkfit", "csv"), required=True)
    f.add_argument("--p", type=float, required=True)
    f.add_argument("--k", type=float, required=True)
    f.add_argument("--n-max", type=int, required=True)
    f.add_argument("--rm", type=float, default=0.75)
    f.add_argument("--delta", type=float, default=0.01)
    f.add_argument("--kappa", type=float, default=None, help="default 2.8 thermoelastic, 3 shrink-fit")
    f.add_argument("--mu", type=float, default=1.0)
    f.add_argument("--alpha", type=float, default=1.75e-2)
    f.add_argument("--c", type=float, default=1.0 / 9.0)
    f.add_argument("--input", default=None)
    f.add_argument("--breakpoints", default=None, help="comma-separated interior radii")
    f.add_argument("--window", default=f"{DEFAULT_WINDOW[0]},{DEFAULT_WINDOW[1]}")
    f.add_argument("--samples", type=int, default=1001, help="radii in the reconstruction CSV")
    f.add_argument("--out", default="-")
    f.add_argument("--out-csv", default=None)
    _common(f)
    f.set_defaults(func=cmd_fit)

    s = sub.add_parser("sweep", help="omega or mu over a range of p")
    s.add_argument("--what", choices=("omega", "mu"), required=True)
    s.add_argument("--p-min", type=float, required=True)
    s.add_argument("--p-max", type=float, required=True)
    s.add_argument("--p-steps", type=int, required=True)
    s.add_argument("--k", type=float, default=0.0)
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--r-steps", type=int, default=51)
    s.add_argument("--out", default="-")
    _common(s)
    s.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"resbasis: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"resbasis: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ResbasisError as exc:
        print(f"resbasis: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
