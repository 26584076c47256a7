"""Benchmark residual stress fields: thermoelastic, shrink-fit, and sampled."""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import EquilibriumWarning, SchemaError
from .fields import RadialField, RadialProfile, ShellGeometry

CSV_HEADER = ("r", "s_par", "s_perp")


class _Laurent:
    """``sum_j a_j r^e_j`` with analytic derivatives."""

    def __init__(self, coeffs: Sequence[float], exponents: Sequence[int]):
        self.a = np.asarray(coeffs, dtype=float)
        self.e = np.asarray(exponents, dtype=float)

    def __call__(self, r, order: int = 0):
        r = np.asarray(r, dtype=float)
        a, e = self.a.copy(), self.e.copy()
        for _ in range(order):
            a, e = a * e, e - 1.0
        return sum(aj * r**ej for aj, ej in zip(a, e))

    def profile(self, width: float) -> RadialProfile:
        return RadialProfile(self, lambda r: self(r, 1), lambda r: self(r, 2), (), width)


# ---------------------------------------------------------------------------
# thermoelastic


@dataclass(frozen=True)
class ThermoelasticSpec:
    """Shell heated by the linear temperature difference ``T = c r / r_o``."""

    kappa: float = 2.8
    mu: float = 1.0
    alpha: float = 1.75e-2
    c: float = 1.0 / 9.0
    geometry: ShellGeometry = field(default_factory=ShellGeometry)

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        if self.c == 0:
            raise ValueError("c must be nonzero")

    @property
    def amplitude(self) -> float:
        """``9 c alpha kappa mu / ((3 kappa + 4 mu) r_o (r_i^2 + r_i r_o + r_o^2))``."""
        ri, ro = self.geometry.r_inner, self.geometry.r_outer
        return (
            9.0 * self.c * self.alpha * self.kappa * self.mu
            / ((3.0 * self.kappa + 4.0 * self.mu) * ro * (ri * ri + ri * ro + ro * ro))
        )

    def temperature(self, r):
        return self.c * np.asarray(r, dtype=float) / self.geometry.r_outer

    def temperature_slope(self) -> float:
        return self.c / self.geometry.r_outer


def _thermo_laurents(spec: ThermoelasticSpec):
    ri, ro = spec.geometry.r_inner, spec.geometry.r_outer
    s2 = ri * ri + ri * ro + ro * ro
    s3 = ri**3 + ri * ri * ro + ri * ro * ro + ro**3
    # (r - ri)(ro - r)(ri^2 ro^2 + r ri ro (ri + ro) + r^2 s2), ascending powers
    quad = np.polynomial.Polynomial([ri * ri * ro * ro, ri * ro * (ri + ro), s2])
    num = np.polynomial.Polynomial([-ri, 1.0]) * np.polynomial.Polynomial([ro, -1.0]) * quad
    K = spec.amplitude
    coeffs = K * num.coef
    par = _Laurent(coeffs, np.arange(coeffs.size) - 3)
    perp = _Laurent(
        0.5 * K * np.array([ri**3 * ro**3, 2.0 * s3, -3.0 * s2]), [-3, 0, 1]
    )
    return par, perp


def thermoelastic_field(spec: ThermoelasticSpec = ThermoelasticSpec()) -> RadialField:
    par, perp = _thermo_laurents(spec)
    w = spec.geometry.width
    return RadialField(par.profile(w), perp.profile(w), spec.geometry)


def thermoelastic_governing_residual(spec: ThermoelasticSpec, r):
    """``r S'' + 4 S' + 36 alpha kappa mu T' / (3 kappa + 4 mu)`` for ``S = Sigma_par``."""
    par, _ = _thermo_laurents(spec)
    r = spec.geometry.check(r)
    rhs = (
        -36.0 * spec.alpha * spec.kappa * spec.mu * spec.temperature_slope()
        / (3.0 * spec.kappa + 4.0 * spec.mu)
    )
    return r * par(r, 2) + 4.0 * par(r, 1) - rhs


# ---------------------------------------------------------------------------
# shrink fit


@dataclass(frozen=True)
class ShrinkFitSpec:
    """Two shells of one material assembled with radial interference ``delta``."""

    kappa: float = 3.0
    mu: float = 1.0
    r_m: float = 0.75
    delta: float = 0.01
    geometry: ShellGeometry = field(default_factory=ShellGeometry)

    def __post_init__(self):
        g = self.geometry
        if not g.r_inner < self.r_m < g.r_outer:
            raise ValueError(
                f"interface radius must satisfy r_inner < r_m < r_outer, got {self.r_m}"
            )
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if not (self.kappa > 0 and self.mu > 0):
            raise ValueError("moduli must be positive")


def shrinkfit_pressure(spec: ShrinkFitSpec = ShrinkFitSpec()) -> float:
    """Interface pressure ``p0`` enforcing the interference ``delta``."""
    ri, ro, rm = spec.geometry.r_inner, spec.geometry.r_outer, spec.r_m
    k, m = spec.kappa, spec.mu
    return (
        12.0 * spec.delta * k * m * (ro**3 - rm**3) * (rm**3 - ri**3)
        / ((3.0 * k + 4.0 * m) * rm**4 * (ro**3 - ri**3))
    )


def _shrink_laurents(spec: ShrinkFitSpec):
    ri, ro, rm = spec.geometry.r_inner, spec.geometry.r_outer, spec.r_m
    p0 = shrinkfit_pressure(spec)
    a_in = p0 / (1.0 / ri**3 - 1.0 / rm**3)
    a_out = p0 / (1.0 / rm**3 - 1.0 / ro**3)
    par_in = _Laurent([-a_in / ri**3, a_in], [0, -3])
    par_out = _Laurent([-a_out, a_out / ro**3], [-3, 0])
    perp_in = _Laurent([-a_in / ri**3, -0.5 * a_in], [0, -3])
    perp_out = _Laurent([a_out / ro**3, 0.5 * a_out], [0, -3])
    return (par_in, par_out), (perp_in, perp_out)


def _piecewise(inner: _Laurent, outer: _Laurent, r_m: float, width: float) -> RadialProfile:
    def pick(order):
        def f(r):
            r = np.asarray(r, dtype=float)
            return np.where(r < r_m, inner(r, order), outer(r, order))

        return f

    return RadialProfile(pick(0), pick(1), pick(2), (r_m,), width)


def shrinkfit_field(spec: ShrinkFitSpec = ShrinkFitSpec()) -> RadialField:
    """Piecewise field with a transverse-stress jump at ``r_m``."""
    (pi, po), (ti, to) = _shrink_laurents(spec)
    w = spec.geometry.width
    return RadialField(
        _piecewise(pi, po, spec.r_m, w), _piecewise(ti, to, spec.r_m, w), spec.geometry
    )


def shrinkfit_sides(spec: ShrinkFitSpec, r):
    """Inner and outer closed forms evaluated at ``r`` regardless of side.

    Returns ``((par_in, par_out), (perp_in, perp_out))``; used for one-sided
    limits at the interface.
    """
    (pi, po), (ti, to) = _shrink_laurents(spec)
    return (pi(r), po(r)), (ti(r), to(r))


def shrinkfit_jump(spec: ShrinkFitSpec = ShrinkFitSpec()) -> float:
    """``Sigma_perp_out(r_m) - Sigma_perp_in(r_m)``."""
    _, (t_in, t_out) = shrinkfit_sides(spec, spec.r_m)
    return float(t_out - t_in)


# ---------------------------------------------------------------------------
# sampled input


def _parse_csv(text: str):
    rows = list(csv.reader(io.StringIO(text)))
    rows = [row for row in rows if row and any(cell.strip() for cell in row)]
    if not rows:
        raise SchemaError("empty CSV input")
    header = tuple(cell.strip() for cell in rows[0])
    if header != CSV_HEADER:
        raise SchemaError(f"expected header {','.join(CSV_HEADER)!r}, got {','.join(header)!r}")
    try:
        data = np.array([[float(cell) for cell in row] for row in rows[1:]], dtype=float)
    except ValueError as exc:
        raise SchemaError(f"non-numeric value in CSV: {exc}") from exc
    if data.ndim != 2 or data.shape[1] != 3:
        raise SchemaError("every row needs exactly three values")
    if not np.all(np.isfinite(data)):
        raise SchemaError("CSV contains non-finite values")
    return data[:, 0], data[:, 1], data[:, 2]


class _SegmentSpline:
    """One cubic spline per segment; ``pieces`` are index ranges into the samples."""

    def __init__(self, r, values, breakpoints, pieces):
        self.breakpoints = np.asarray(breakpoints, dtype=float)
        self.splines = []
        for lo, hi in pieces:
            if hi - lo < 2:
                raise SchemaError(
                    f"segment [{r[lo]}, {r[hi - 1]}] holds fewer than two samples"
                )
            self.splines.append(CubicSpline(r[lo:hi], values[lo:hi]))

    def __call__(self, r, order=0):
        r = np.asarray(r, dtype=float)
        seg = np.searchsorted(self.breakpoints, r, side="right")
        out = np.empty_like(r)
        for i, spline in enumerate(self.splines):
            mask = seg == i
            if np.any(mask):
                out[mask] = spline(r[mask], order)
        return out

    def profile(self, width):
        return RadialProfile(
            self, lambda r: self(r, 1), lambda r: self(r, 2), tuple(self.breakpoints), width
        )


def _segment_pieces(r, bps, tol):
    """Split sample indices at the breakpoints.

    Radii must increase strictly, except that a breakpoint may appear twice:
    the first row is the inner one-sided value, the second the outer one.
    """
    at_bp = lambda x: any(abs(x - b) <= tol for b in bps)  # noqa: E731
    steps = np.diff(r)
    for i, d in enumerate(steps):
        if d < 0 or (d == 0 and not at_bp(r[i])):
            raise SchemaError("radii must be strictly increasing")
    pieces, start = [], 0
    for b in bps:
        hits = np.flatnonzero(np.abs(r - b) <= tol)
        if hits.size == 1:
            raise SchemaError(
                f"sample at breakpoint {b} is ambiguous; give both one-sided values "
                "on two rows or omit it"
            )
        if hits.size > 2:
            raise SchemaError(f"breakpoint {b} is listed more than twice")
        if hits.size == 2:
            pieces.append((start, hits[0] + 1))
            start = hits[1]
        else:
            split = int(np.searchsorted(r, b))
            pieces.append((start, split))
            start = split
    pieces.append((start, r.size))
    return pieces


def load_sampled_field(
    text: str,
    geometry: ShellGeometry = ShellGeometry(),
    breakpoints: Sequence[float] = (),
) -> RadialField:
    """Spline-interpolated field from CSV text with header ``r,s_par,s_perp``.

    Each smooth segment between breakpoints gets its own cubic spline.  A
    breakpoint radius may be listed twice (inner value, then outer value).  A
    warning (not an error) is issued if the samples are visibly not a residual
    stress field.
    """
    r, s_par, s_perp = _parse_csv(text)
    if r.size < 2:
        raise SchemaError("need at least two samples")
    tol = 1e-12 * geometry.width
    bps = tuple(sorted(float(b) for b in breakpoints))
    for b in bps:
        if not geometry.r_inner < b < geometry.r_outer:
            raise SchemaError(f"breakpoint {b} not strictly inside the shell")
    if abs(r[0] - geometry.r_inner) > tol or abs(r[-1] - geometry.r_outer) > tol:
        raise SchemaError(
            f"samples span [{r[0]}, {r[-1]}], not the shell "
            f"[{geometry.r_inner}, {geometry.r_outer}]"
        )
    pieces = _segment_pieces(r, bps, tol)
    # snap the end samples onto the shell so evaluation at the radii is exact
    r = r.copy()
    r[0], r[-1] = geometry.r_inner, geometry.r_outer

    par = _SegmentSpline(r, s_par, bps, pieces)
    perp = _SegmentSpline(r, s_perp, bps, pieces)
    field_ = RadialField(par.profile(geometry.width), perp.profile(geometry.width), geometry)

    scale = max(np.max(np.abs(s_par)), np.max(np.abs(s_perp)))
    if scale > 0:
        interior = np.ones_like(r, dtype=bool)
        for b in bps:
            interior &= np.abs(r - b) > tol
        rr = r[interior]
        resid = par(rr, 1) + 2.0 * (par(rr) - perp(rr)) / rr
        # spline derivatives of coarse samples are only good to about a percent
        limit = 1e-2 * scale / geometry.width
        if np.max(np.abs(resid)) > limit:
            warnings.warn(
                f"sampled field violates equilibrium: max residual "
                f"{np.max(np.abs(resid)):.3e} exceeds {limit:.3e}",
                EquilibriumWarning,
                stacklevel=2,
            )
        if max(abs(s_par[0]), abs(s_par[-1])) > 1e-3 * scale:
            warnings.warn(
                "sampled field has nonzero radial stress at the shell boundary",
                EquilibriumWarning,
                stacklevel=2,
            )
    return field_


def sample_field_csv(field_: RadialField, radii) -> str:
    """CSV text in the ingestion schema, 12 significant digits."""
    radii = np.asarray(radii, dtype=float)
    lines = [",".join(CSV_HEADER)]
    for r, a, b in zip(radii, field_.s_par(radii), field_.s_perp(radii)):
        lines.append(f"{r:.12g},{a:.12g},{b:.12g}")
    return "\n".join(lines) + "\n"
