"""Integrals, inner products and norms on the spherical shell.

Integration is composite Gauss-Legendre with global panel doubling.  Every
integrand may be vector valued: ``f(r)`` returns an array whose last axis
matches ``r`` and convergence is required componentwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, DiscontinuousFieldError
from .fields import RadialField, ShellGeometry

WEIGHT_MODES = ("r2", "paper")
WEIGHT_ALIASES = {"paper-literal": "paper"}
NORM_TARGET = 1.0 / (4.0 * np.pi)
PANEL_BUDGET = 2**14


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy and layout of the composite rule.

    ``weight`` selects the radial weight of the shell inner product:
    ``"r2"`` uses the volume element ``r^2 dr``, ``"paper"`` drops it.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    base_panels: int = 8
    nodes_per_panel: int = 16
    weight: str = "r2"

    def __post_init__(self):
        object.__setattr__(self, "weight", WEIGHT_ALIASES.get(self.weight, self.weight))
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.base_panels < 1:
            raise ValueError("base_panels must be >= 1")
        if self.nodes_per_panel < 2:
            raise ValueError("nodes_per_panel must be >= 2")
        if self.weight not in WEIGHT_MODES:
            raise ValueError(f"weight must be one of {WEIGHT_MODES}, got {self.weight!r}")


DEFAULT_SPEC = QuadratureSpec()


@lru_cache(maxsize=None)
def _legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _segments(geometry: ShellGeometry, breakpoints: Sequence[float]):
    edges = [geometry.r_inner, *sorted(breakpoints), geometry.r_outer]
    return list(zip(edges[:-1], edges[1:]))


def gauss_grid(
    geometry: ShellGeometry,
    breakpoints: Sequence[float] = (),
    panels: int = 8,
    nodes_per_panel: int = 16,
):
    """Nodes and weights of a fixed composite rule, ``panels`` per segment."""
    x, w = _legendre(nodes_per_panel)
    nodes, weights = [], []
    for a, b in _segments(geometry, breakpoints):
        edges = np.linspace(a, b, panels + 1)
        half = 0.5 * np.diff(edges)[:, None]
        mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
        nodes.append((mid + half * x).ravel())
        weights.append((half * w).ravel())
    return np.concatenate(nodes), np.concatenate(weights)


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    geometry: ShellGeometry,
    breakpoints: Sequence[float] = (),
    spec: QuadratureSpec = DEFAULT_SPEC,
    min_panels: int = 1,
    max_panels: int = PANEL_BUDGET,
) -> np.ndarray | float:
    """Integrate ``f`` over ``[r_inner, r_outer]``, split at ``breakpoints``.

    The panel count per segment starts at ``max(base_panels, min_panels)`` and
    doubles until two successive estimates differ by less than
    ``max(abs_tol, rel_tol * |I|)``.  A round-off floor proportional to the
    integral of ``|f|`` keeps cancelling integrands from refining forever.
    """
    panels = max(spec.base_panels, min_panels)
    prev = None
    while panels <= max_panels:
        r, w = gauss_grid(geometry, breakpoints, panels, spec.nodes_per_panel)
        vals = np.asarray(f(r), dtype=float)
        est = vals @ w
        if prev is not None:
            mag = np.abs(vals) @ w
            tol = np.maximum(
                np.maximum(spec.abs_tol, spec.rel_tol * np.abs(est)),
                64.0 * np.finfo(float).eps * mag,
            )
            if np.all(np.abs(est - prev) <= tol):
                return est if est.ndim else float(est)
        prev = est
        panels *= 2
    raise ConvergenceError(
        f"quadrature did not converge within {max_panels} panels per segment"
    )


def radial_weight(r: np.ndarray, weight: str) -> np.ndarray:
    if weight == "r2":
        return r * r
    if weight == "paper":
        return np.ones_like(r)
    raise ValueError(f"unknown weight mode {weight!r}")


def oscillation_panels(omega: float, geometry: ShellGeometry) -> int:
    """Panels needed so that each spans well under half an oscillation."""
    n_half_waves = int(np.ceil(omega * geometry.width / np.pi))
    return 4 * max(n_half_waves, 1)


def _panels_for(*fields) -> int:
    return max(getattr(f, "min_panels", 1) for f in fields)


def l2_inner(a: RadialField, b: RadialField, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``int_R A . B dv = 4 pi int (A_par B_par + 2 A_perp B_perp) w(r) dr``."""
    a._check_same_geometry(b)

    def integrand(r):
        return (a.s_par(r) * b.s_par(r) + 2.0 * a.s_perp(r) * b.s_perp(r)) * radial_weight(
            r, spec.weight
        )

    bps = tuple(sorted(set(a.breakpoints) | set(b.breakpoints)))
    return 4.0 * np.pi * integrate(
        integrand, a.geometry, bps, spec, min_panels=_panels_for(a, b)
    )


def l2_norm(a: RadialField, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    return float(np.sqrt(l2_inner(a, a, spec)))


def _require_smooth(*fields):
    for f in fields:
        if not f.is_smooth:
            raise DiscontinuousFieldError(
                "field has breakpoints; its gradient is not square integrable"
            )


def h1_error_sq(diff: RadialField, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``int_R (|D|^2 + |Grad D|^2) dv`` for a divergence-free field ``D``."""
    _require_smooth(diff)

    def integrand(r):
        val = diff.s_par(r) ** 2 + 2.0 * diff.s_perp(r) ** 2
        grad = 2.0 * (diff.s_par.d1(r) ** 2 + diff.s_perp.d1(r) ** 2)
        return (val + grad) * radial_weight(r, spec.weight)

    return 4.0 * np.pi * integrate(
        integrand, diff.geometry, (), spec, min_panels=_panels_for(diff)
    )


def energy_density(dpar: np.ndarray, dperp: np.ndarray, p: float) -> np.ndarray:
    """Integrand of the reduced functional for divergence-free fields.

    ``|Grad tr S|^2 / 2 + p Grad S . (Grad S)^T`` with the second term
    reduced to ``3 S_par'^2 / 2 - 2 S_par' S_perp'``.
    """
    return 0.5 * (dpar + 2.0 * dperp) ** 2 + p * (1.5 * dpar**2 - 2.0 * dpar * dperp)


def energy(field_: RadialField, p: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    _require_smooth(field_)

    def integrand(r):
        return energy_density(field_.s_par.d1(r), field_.s_perp.d1(r), p) * radial_weight(
            r, spec.weight
        )

    return 0.5 * 4.0 * np.pi * integrate(
        integrand, field_.geometry, (), spec, min_panels=_panels_for(field_)
    )


def energy_inner(
    a: RadialField, b: RadialField, p: float, spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """Polarised energy ``E(a+b) - E(a) - E(b)``, evaluated as one bilinear integral."""
    a._check_same_geometry(b)
    _require_smooth(a, b)

    def integrand(r):
        ap, at = a.s_par.d1(r), a.s_perp.d1(r)
        bp, bt = b.s_par.d1(r), b.s_perp.d1(r)
        form = (ap + 2.0 * at) * (bp + 2.0 * bt) + p * (
            3.0 * ap * bp - 2.0 * (ap * bt + at * bp)
        )
        return form * radial_weight(r, spec.weight)

    return 0.5 * 4.0 * np.pi * integrate(
        integrand, a.geometry, (), spec, min_panels=_panels_for(a, b)
    )
