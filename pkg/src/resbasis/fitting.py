"""Orthogonal expansion of a target field in a mode basis."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .basis import BasisMode, FunctionalParams, check_compatible, compute_basis
from .errors import GeometryMismatchError, NonpositiveValueError
from .fields import RadialField, ShellGeometry
from .quadrature import DEFAULT_SPEC, QuadratureSpec, gauss_grid, l2_inner, oscillation_panels, radial_weight

DEFAULT_WINDOW = (20, 100)
MIN_WINDOW = 10


def _check_target(target: RadialField, modes: Sequence[BasisMode]):
    check_compatible(modes)
    if modes and modes[0].geometry != target.geometry:
        raise GeometryMismatchError("target and modes live on different shells")


def project(target: RadialField, modes: Sequence[BasisMode], spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """``b_N = <target, S_N>``, one adaptive integral per mode."""
    _check_target(target, modes)
    return np.array([l2_inner(target, m.field, spec) for m in modes])


class _Samples:
    """Target and partial sums on one fixed grid fine enough for every mode."""

    def __init__(self, target: RadialField, modes, spec: QuadratureSpec):
        g = target.geometry
        omega_max = max(m.omega for m in modes)
        panels = max(spec.base_panels, 2 * oscillation_panels(omega_max, g))
        self.r, w = gauss_grid(g, target.breakpoints, panels, spec.nodes_per_panel)
        self.w = 4.0 * np.pi * w * radial_weight(self.r, spec.weight)
        r = self.r
        self.t_par, self.t_perp = target.s_par(r), target.s_perp(r)
        self.smooth = target.is_smooth
        if self.smooth:
            self.t_dpar, self.t_dperp = target.s_par.d1(r), target.s_perp.d1(r)
        derivs = np.array([m.derivatives(r, 2) for m in modes])
        s, d1, d2 = derivs[:, 0], derivs[:, 1], derivs[:, 2]
        self.m_par = s
        self.m_perp = s + 0.5 * r * d1
        self.m_dpar = d1
        self.m_dperp = 1.5 * d1 + 0.5 * r * d2


def error_curves(
    target: RadialField,
    modes: Sequence[BasisMode],
    coefficients,
    spec: QuadratureSpec = DEFAULT_SPEC,
):
    """Relative L2 and H1 errors of the ``n``-term sums, ``n = 1..len(modes)``.

    The errors are integrated directly from ``target - sum_{N<=n} b_N S_N``
    rather than through Parseval.  The H1 curve is ``None`` for targets
    with breakpoints.
    """
    _check_target(target, modes)
    b = np.asarray(coefficients, dtype=float)
    if b.size != len(modes):
        raise ValueError("one coefficient per mode is required")
    s = _Samples(target, modes, spec)
    a_par = np.cumsum(b[:, None] * s.m_par, axis=0)
    a_perp = np.cumsum(b[:, None] * s.m_perp, axis=0)
    dp, dt = s.t_par - a_par, s.t_perp - a_perp
    l2 = (dp**2 + 2.0 * dt**2) @ s.w
    ref = (s.t_par**2 + 2.0 * s.t_perp**2) @ s.w
    e_l2 = np.sqrt(l2 / ref)
    if not s.smooth:
        return e_l2, None
    g_par = s.t_dpar - np.cumsum(b[:, None] * s.m_dpar, axis=0)
    g_perp = s.t_dperp - np.cumsum(b[:, None] * s.m_dperp, axis=0)
    h1 = l2 + 2.0 * (g_par**2 + g_perp**2) @ s.w
    ref_h1 = ref + 2.0 * (s.t_dpar**2 + s.t_dperp**2) @ s.w
    return e_l2, np.sqrt(h1 / ref_h1)


def _loglog_slope(index, values) -> float:
    index = np.asarray(index, dtype=float)
    values = np.asarray(values, dtype=float)
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise NonpositiveValueError("log-log slope needs positive finite values")
    slope, _ = np.polyfit(np.log(index), np.log(values), 1)
    return float(slope)


def decay_slope(series, window: tuple = DEFAULT_WINDOW) -> float:
    """Least-squares slope of ``log v_n`` against ``log n``.

    ``series[0]`` is ``v_1``; ``window = (lo, hi)`` is an inclusive range of
    1-based indices with at least ten entries.
    """
    lo, hi = int(window[0]), int(window[1])
    if lo < 1 or hi - lo + 1 < MIN_WINDOW:
        raise ValueError(f"window {window} must start at >= 1 and hold at least {MIN_WINDOW} points")
    series = np.asarray(series, dtype=float)
    if hi > series.size:
        raise ValueError(f"window {window} exceeds series length {series.size}")
    n = np.arange(lo, hi + 1)
    return _loglog_slope(n, series[lo - 1 : hi])


def coefficient_slopes(coefficients, window: tuple = DEFAULT_WINDOW) -> dict:
    """Slopes of ``|b_N|`` over odd and even ``N`` inside ``window``.

    A subsequence containing an exact zero yields ``None``.
    """
    b = np.abs(np.asarray(coefficients, dtype=float))
    lo, hi = int(window[0]), min(int(window[1]), b.size)
    out = {}
    for name, parity in (("b_odd", 1), ("b_even", 0)):
        n = np.array([i for i in range(lo, hi + 1) if i % 2 == parity])
        try:
            out[name] = _loglog_slope(n, b[n - 1]) if n.size >= 2 else None
        except NonpositiveValueError:
            out[name] = None
    return out


@dataclass
class FitReport:
    params: FunctionalParams
    n_max: int
    coefficients: np.ndarray
    e_l2: np.ndarray
    e_h1: Optional[np.ndarray]
    slopes: dict = field(default_factory=dict)
    window: tuple = DEFAULT_WINDOW
    norm_weight: str = "r2"

    def to_json(self) -> dict:
        def floats(a):
            return None if a is None else [float(v) for v in a]

        return {
            "p": self.params.p,
            "k": self.params.k,
            "norm_weight": self.norm_weight,
            "n_max": self.n_max,
            "coefficients": floats(self.coefficients),
            "e_l2": floats(self.e_l2),
            "e_h1": floats(self.e_h1),
            "slopes": dict(self.slopes),
            "window": list(self.window),
        }


def fit(
    target: RadialField,
    params: FunctionalParams,
    n_max: int,
    spec: QuadratureSpec = DEFAULT_SPEC,
    window: tuple = DEFAULT_WINDOW,
    modes: Optional[Sequence[BasisMode]] = None,
) -> FitReport:
    """Project ``target`` on modes ``1..n_max`` and summarise the error decay.

    Slopes are ``None`` when the window (clipped to ``n_max``) holds fewer
    than ten points.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    modes = modes if modes is not None else compute_basis(params, n_max, target.geometry, spec)
    b = project(target, modes, spec)
    e_l2, e_h1 = error_curves(target, modes, b, spec)
    lo, hi = int(window[0]), min(int(window[1]), n_max)
    slopes = {"e_l2": None, "e_h1": None, "b_odd": None, "b_even": None}
    if hi - lo + 1 >= MIN_WINDOW:
        win = (lo, hi)
        slopes["e_l2"] = _safe_slope(e_l2, win)
        slopes["e_h1"] = None if e_h1 is None else _safe_slope(e_h1, win)
        slopes.update(coefficient_slopes(b, win))
    return FitReport(params, n_max, b, e_l2, e_h1, slopes, (lo, hi), spec.weight)


def _safe_slope(series, window):
    try:
        return decay_slope(series, window)
    except NonpositiveValueError:
        return None


def reconstruct(modes: Sequence[BasisMode], coefficients, n: int, r):
    """``(S_par, S_perp)`` of the ``n``-term sum at radii ``r``."""
    r = np.asarray(r, dtype=float)
    par = np.zeros_like(r)
    perp = np.zeros_like(r)
    for m, b in zip(modes[:n], coefficients[:n]):
        a, t = m.evaluate(r)
        par += b * a
        perp += b * t
    return par, perp


def gibbs_overshoot(
    target: RadialField,
    modes: Sequence[BasisMode],
    coefficients,
    n: int,
    r_jump: float,
    halfwidth: float = 0.05,
    samples: int = 2001,
) -> float:
    """Largest excursion of the ``n``-term ``S_perp`` beyond the jump at ``r_jump``.

    On the high side of the jump it is measured above the outer value, on the
    low side below the inner value (signs follow the jump direction).
    """
    g: ShellGeometry = target.geometry
    eps = 1e-9 * g.width
    left = np.linspace(max(g.r_inner, r_jump - halfwidth), r_jump - eps, samples)
    right = np.linspace(r_jump + eps, min(g.r_outer, r_jump + halfwidth), samples)
    jump = float(target.s_perp(r_jump + eps) - target.s_perp(r_jump - eps))
    sign = 1.0 if jump >= 0 else -1.0
    _, approx_l = reconstruct(modes, coefficients, n, left)
    _, approx_r = reconstruct(modes, coefficients, n, right)
    over_r = sign * (approx_r - target.s_perp(right))
    over_l = sign * (target.s_perp(left) - approx_l)
    return float(max(over_r.max(), over_l.max()))
