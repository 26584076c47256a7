"""Spherically symmetric stress fields and their radial calculus.

A spherically symmetric symmetric tensor field on a shell is fully described
by two radial profiles: the radial component ``S_par`` and the transverse
component ``S_perp``.  All evaluators in this module are vectorised over
``r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BreakpointError, DomainError, GeometryMismatchError

ArrayFn = Callable[[np.ndarray], np.ndarray]

# relative steps for difference fallbacks, scaled by the shell width
FD_REL_STEP = 1e-6
FD2_REL_STEP = 1e-4


@dataclass(frozen=True)
class ShellGeometry:
    r_inner: float = 0.5
    r_outer: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.r_inner < self.r_outer):
            raise ValueError(
                f"shell requires 0 < r_inner < r_outer, got "
                f"r_inner={self.r_inner}, r_outer={self.r_outer}"
            )

    @property
    def width(self) -> float:
        return self.r_outer - self.r_inner

    def contains(self, r, tol: float = 1e-12) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        slack = tol * self.width
        return (r >= self.r_inner - slack) & (r <= self.r_outer + slack)

    def check(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if not np.all(self.contains(r)):
            raise DomainError(
                f"radius outside shell [{self.r_inner}, {self.r_outer}]"
            )
        return r


def _central_difference(fn: ArrayFn, h: float) -> ArrayFn:
    def deriv(r):
        r = np.asarray(r, dtype=float)
        return (fn(r + h) - fn(r - h)) / (2.0 * h)

    return deriv


@dataclass(frozen=True)
class RadialProfile:
    """A scalar function of radius with optional analytic derivatives.

    Missing derivatives fall back to central differences with step
    ``FD_REL_STEP * width`` (a wider step for a second difference of the
    values); ``width`` must then be supplied.
    """

    value: ArrayFn
    derivative: Optional[ArrayFn] = None
    second_derivative: Optional[ArrayFn] = None
    breakpoints: tuple = ()
    width: float = 1.0

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bps)

    def __call__(self, r) -> np.ndarray:
        return np.asarray(self.value(np.asarray(r, dtype=float)), dtype=float)

    @property
    def _h(self) -> float:
        return FD_REL_STEP * self.width

    def d1(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if self.derivative is not None:
            return np.asarray(self.derivative(r), dtype=float)
        return _central_difference(self, self._h)(r)

    def d2(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if self.second_derivative is not None:
            return np.asarray(self.second_derivative(r), dtype=float)
        if self.derivative is not None:
            return _central_difference(self.d1, self._h)(r)
        # nested central differences at the first-derivative step lose ~eps/h^2
        h = FD2_REL_STEP * self.width
        return (self(r + h) - 2.0 * self(r) + self(r - h)) / (h * h)

    def scaled(self, a: float) -> "RadialProfile":
        return RadialProfile(
            lambda r: a * self(r),
            lambda r: a * self.d1(r),
            lambda r: a * self.d2(r),
            self.breakpoints,
            self.width,
        )

    def __add__(self, other: "RadialProfile") -> "RadialProfile":
        return RadialProfile(
            lambda r: self(r) + other(r),
            lambda r: self.d1(r) + other.d1(r),
            lambda r: self.d2(r) + other.d2(r),
            _merge_breakpoints(self.breakpoints, other.breakpoints),
            self.width,
        )

    def __sub__(self, other: "RadialProfile") -> "RadialProfile":
        return self + other.scaled(-1.0)


def zero_profile(width: float = 1.0) -> RadialProfile:
    z = lambda r: np.zeros_like(np.asarray(r, dtype=float))  # noqa: E731
    return RadialProfile(z, z, z, (), width)


def _merge_breakpoints(a: Sequence[float], b: Sequence[float]) -> tuple:
    return tuple(sorted(set(a) | set(b)))


@dataclass(frozen=True)
class RadialField:
    s_par: RadialProfile
    s_perp: RadialProfile
    geometry: ShellGeometry = field(default_factory=ShellGeometry)
    # quadrature hint: oscillatory fields ask for at least this many panels
    min_panels: int = 1

    def __post_init__(self):
        g = self.geometry
        for b in self.breakpoints:
            if not (g.r_inner < b < g.r_outer):
                raise ValueError(f"breakpoint {b} not strictly inside the shell")

    @property
    def breakpoints(self) -> tuple:
        return _merge_breakpoints(self.s_par.breakpoints, self.s_perp.breakpoints)

    @property
    def is_smooth(self) -> bool:
        return not self.breakpoints

    def _check_same_geometry(self, other: "RadialField"):
        if self.geometry != other.geometry:
            raise GeometryMismatchError(
                f"fields live on different shells: {self.geometry} vs {other.geometry}"
            )

    def scaled(self, a: float) -> "RadialField":
        return RadialField(
            self.s_par.scaled(a), self.s_perp.scaled(a), self.geometry, self.min_panels
        )

    def __add__(self, other: "RadialField") -> "RadialField":
        self._check_same_geometry(other)
        return RadialField(
            self.s_par + other.s_par,
            self.s_perp + other.s_perp,
            self.geometry,
            max(self.min_panels, other.min_panels),
        )

    def __sub__(self, other: "RadialField") -> "RadialField":
        return self + other.scaled(-1.0)

    def __mul__(self, a: float) -> "RadialField":
        return self.scaled(float(a))

    __rmul__ = __mul__


def zero_field(geometry: ShellGeometry | None = None) -> RadialField:
    geometry = geometry or ShellGeometry()
    z = zero_profile(geometry.width)
    return RadialField(z, z, geometry)


def _check_point(field_: RadialField, r) -> np.ndarray:
    r = field_.geometry.check(r)
    tol = 1e-12 * field_.geometry.width
    for b in field_.breakpoints:
        if np.any(np.abs(r - b) <= tol):
            raise BreakpointError(f"r={b} is a declared discontinuity")
    return r


def equilibrium_residual(field_: RadialField, r) -> np.ndarray:
    """Radial component of ``Div S``: ``S_par' + 2 (S_par - S_perp) / r``."""
    r = _check_point(field_, r)
    return field_.s_par.d1(r) + 2.0 * (field_.s_par(r) - field_.s_perp(r)) / r


def perp_from_par(s_par: RadialProfile) -> RadialProfile:
    """Transverse profile that makes ``(s_par, S_perp)`` divergence free.

    ``S_perp = S_par + r S_par' / 2``.  Its derivative needs ``S_par''``,
    which comes from ``s_par`` (analytic if supplied).
    """

    def value(r):
        return s_par(r) + 0.5 * r * s_par.d1(r)

    def deriv(r):
        return 1.5 * s_par.d1(r) + 0.5 * r * s_par.d2(r)

    return RadialProfile(value, deriv, None, s_par.breakpoints, s_par.width)


def gradient_norm_sq(field_: RadialField, r) -> np.ndarray:
    """``|Grad S|^2`` for a divergence-free field: ``2 (S_par'^2 + S_perp'^2)``."""
    r = _check_point(field_, r)
    return 2.0 * (field_.s_par.d1(r) ** 2 + field_.s_perp.d1(r) ** 2)


def gradient_norm_sq_full(field_: RadialField, r) -> np.ndarray:
    """``|Grad S|^2`` without using equilibrium.

    ``S_par'^2 + 2 S_perp'^2 + (2 (S_par - S_perp) / r)^2``.
    """
    r = _check_point(field_, r)
    a, b = field_.s_par(r), field_.s_perp(r)
    return (
        field_.s_par.d1(r) ** 2
        + 2.0 * field_.s_perp.d1(r) ** 2
        + (2.0 * (a - b) / r) ** 2
    )


def trace(field_: RadialField, r) -> np.ndarray:
    r = field_.geometry.check(r)
    return field_.s_par(r) + 2.0 * field_.s_perp(r)


def field_from_par(
    value: ArrayFn,
    derivative: ArrayFn,
    second_derivative: ArrayFn,
    geometry: ShellGeometry,
    breakpoints: tuple = (),
    min_panels: int = 1,
) -> RadialField:
    """Equilibrated field generated by a radial profile with known derivatives."""
    s_par = RadialProfile(value, derivative, second_derivative, breakpoints, geometry.width)
    return RadialField(s_par, perp_from_par(s_par), geometry, min_panels)
