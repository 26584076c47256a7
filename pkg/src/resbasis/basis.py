"""Spherically symmetric extremizer modes.

Each mode has a closed-form radial component

    S_par(r) = c0 / (w^3 r^3) * (c1 + c4 r^3 / r_o^3 + g(r)),
    g(r) = (c2 w r + c3) cos(w r) - (c2 - c3 w r) sin(w r),

and the transverse component follows from equilibrium.  The constants
``c0..c4`` and ``w`` are found by Newton's method at ``p = 0`` and then
carried to other ``p`` by predictor-corrector continuation.  They never
depend on ``k``.  Only the Lagrange multiplier ``mu`` does.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    ConvergenceError,
    DuplicateRootError,
    MixedParameterError,
    ParameterError,
    SingularJacobianError,
)
from .fields import RadialField, ShellGeometry, field_from_par
from .quadrature import (
    DEFAULT_SPEC,
    NORM_TARGET,
    QuadratureSpec,
    energy,
    gauss_grid,
    oscillation_panels,
    radial_weight,
)

P_MAX = 5.0

NEWTON_TOL = 1e-12
NEWTON_ACCEPT = 1e-10
NEWTON_MAX_ITER = 100
NEWTON_MAX_HALVINGS = 30
FD_REL_STEP = 1e-7
DUPLICATE_TOL = 1e-6
MAX_RESEEDS = 5
COND_LIMIT = 1e12

CONT_INITIAL_STEP = 0.05
CONT_MAX_STEP = 0.5
CONT_MIN_STEP = 1e-6
# a corrector this quick lets the step grow
CONT_FAST_ITERS = 4
# continuation results are cached on this grid of p values
ANCHOR_SPACING = 0.5


# ---------------------------------------------------------------------------
# parameters and constants


@dataclass(frozen=True)
class FunctionalParams:
    """Strip coordinates ``p = beta + gamma`` and ``k = 2 beta - gamma``.

    The closed strip ``0 <= p <= 5, k >= 0`` is admitted by default; with
    ``strict=True`` the open strip is required.
    """

    p: float
    k: float = 0.0
    strict: bool = False

    def __post_init__(self):
        p, k = float(self.p), float(self.k)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "k", k)
        for name, value in (("p", p), ("k", k)):
            if not np.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value}")
        if self.strict:
            checks = ((p > 0, "p > 0"), (p < P_MAX, "p < 5"), (k > 0, "k > 0"))
        else:
            checks = ((p >= 0, "p ≥ 0"), (p <= P_MAX, "p ≤ 5"), (k >= 0, "k ≥ 0"))
        for ok, rule in checks:
            if not ok:
                raise ParameterError(
                    f"(p, k) = ({p:g}, {k:g}) is outside the admissible strip: "
                    f"requires {rule}"
                )

    @property
    def beta(self) -> float:
        return (self.p + self.k) / 3.0

    @property
    def gamma(self) -> float:
        return (2.0 * self.p - self.k) / 3.0

    @classmethod
    def from_beta_gamma(cls, beta: float, gamma: float, strict: bool = False):
        return cls(beta + gamma, 2.0 * beta - gamma, strict)


@dataclass(frozen=True)
class ModeConstants:
    index_n: int
    omega: float
    c0: float
    c1: float
    c2: float
    c3: float
    c4: float

    @property
    def c(self) -> tuple:
        return (self.c0, self.c1, self.c2, self.c3, self.c4)

    @property
    def lam(self) -> float:
        return self.omega * self.omega

    def as_vector(self) -> np.ndarray:
        return np.array([*self.c, self.omega])

    @classmethod
    def from_vector(cls, index_n: int, x) -> "ModeConstants":
        x = [float(v) for v in x]
        return cls(index_n, x[5], *x[:5])

    def negated(self) -> "ModeConstants":
        """Constants of ``-S``: only the overall amplitude flips."""
        return ModeConstants(self.index_n, self.omega, -self.c0, *self.c[1:])


# ---------------------------------------------------------------------------
# closed-form evaluation


def spar_derivatives(c, omega: float, r_outer: float, r, order: int = 1) -> np.ndarray:
    """``S_par`` and its first ``order`` derivatives, stacked on axis 0.

    Uses ``g' = w^2 r h`` with ``h = c3 cos(w r) - c2 sin(w r)``, so that
    ``g^(k) = w^2 (r h^(k-1) + (k-1) h^(k-2))``, and Leibniz on ``g r^-3``.
    """
    c0, c1, c2, c3, c4 = c
    r = np.asarray(r, dtype=float)
    wr = omega * r
    cos, sin = np.cos(wr), np.sin(wr)
    z = (c3 * cos - c2 * sin) + 1j * (c3 * sin + c2 * cos)
    h = [(z * (1j * omega) ** m).real for m in range(max(order, 1))]

    q = [c1 + (c2 * wr + c3) * cos - (c2 - c3 * wr) * sin]
    for k in range(1, order + 1):
        prev = (k - 1) * h[k - 2] if k >= 2 else 0.0
        q.append(omega**2 * (r * h[k - 1] + prev))
    inv = [(-1) ** n * factorial(n + 2) / 2 * r ** (-3 - n) for n in range(order + 1)]

    scale = c0 / omega**3
    out = np.empty((order + 1,) + r.shape)
    for n in range(order + 1):
        acc = sum(comb(n, j) * q[j] * inv[n - j] for j in range(n + 1))
        if n == 0:
            acc = acc + c4 / r_outer**3
        out[n] = scale * acc
    return out


def _spar_d01(c, omega, r_outer, r):
    """Fast path for ``S_par`` and ``S_par'`` only."""
    c0, c1, c2, c3, c4 = c
    wr = omega * r
    cos, sin = np.cos(wr), np.sin(wr)
    q0 = c1 + (c2 * wr + c3) * cos - (c2 - c3 * wr) * sin
    q1 = omega * wr * (c3 * cos - c2 * sin)
    inv3 = 1.0 / (r * r * r)
    scale = c0 / omega**3
    return scale * (q0 * inv3 + c4 / r_outer**3), scale * inv3 * (q1 - 3.0 * q0 / r)


def _g(c, omega, r):
    _, _, c2, c3, _ = c
    wr = omega * r
    return (c2 * wr + c3) * np.cos(wr) - (c2 - c3 * wr) * np.sin(wr)


def _g_prime(c, omega, r):
    _, _, c2, c3, _ = c
    wr = omega * r
    return omega**2 * r * (c3 * np.cos(wr) - c2 * np.sin(wr))


def eval_mode(constants: ModeConstants, params, geometry: ShellGeometry, r):
    """``(S_par, S_perp)`` at ``r``; ``params`` is accepted for symmetry with ``eval_mu``."""
    r = geometry.check(r)
    d = spar_derivatives(constants.c, constants.omega, geometry.r_outer, r, 1)
    return d[0], d[0] + 0.5 * r * d[1]


def eval_mu(constants: ModeConstants, params: FunctionalParams, geometry: ShellGeometry, r):
    """Lagrange multiplier ``mu(r)``.

    ``mu = -(c0 / (2 w r^2)) (c1 - 2 c4 r^3 / r_o^3 + (1 - beta) g(r))``.
    """
    r = geometry.check(r)
    c0, c1, _, _, c4 = constants.c
    w = constants.omega
    algebraic = c1 - 2.0 * c4 * r**3 / geometry.r_outer**3
    return -c0 / (2.0 * w * r**2) * (algebraic + (1.0 - params.beta) * _g(constants.c, w, r))


def eval_mu_prime(constants, params, geometry, r):
    r = geometry.check(r)
    c0, c1, _, _, c4 = constants.c
    w = constants.omega
    g, dg = _g(constants.c, w, r), _g_prime(constants.c, w, r)
    inner = -2.0 * c1 / r**3 - 2.0 * c4 / geometry.r_outer**3
    inner = inner + (1.0 - params.beta) * (dg / r**2 - 2.0 * g / r**3)
    return -c0 / (2.0 * w) * inner


def mu_f1(constants: ModeConstants, geometry: ShellGeometry, r):
    """Coefficient of ``k`` in ``mu = k f1 + f2``."""
    r = geometry.check(r)
    w = constants.omega
    return constants.c0 * _g(constants.c, w, r) / (6.0 * w * r**2)


def mu_f2(constants: ModeConstants, p: float, geometry: ShellGeometry, r):
    r = geometry.check(r)
    c0, c1, _, _, c4 = constants.c
    w = constants.omega
    algebraic = -c0 / (w * r**2) * (0.5 * c1 - c4 * r**3 / geometry.r_outer**3)
    return algebraic + (p - 3.0) * mu_f1(constants, geometry, r)


def natural_bc(constants: ModeConstants, p: float, geometry: ShellGeometry, r):
    """``r S_par'' - (p - 4) S_par'``, which vanishes at both radii for a mode."""
    r = geometry.check(r)
    d = spar_derivatives(constants.c, constants.omega, geometry.r_outer, r, 2)
    return r * d[2] - (p - 4.0) * d[1]


# ---------------------------------------------------------------------------
# modes as fields


@dataclass(frozen=True)
class BasisMode:
    constants: ModeConstants
    params: FunctionalParams
    geometry: ShellGeometry
    weight: str = "r2"

    @property
    def index_n(self) -> int:
        return self.constants.index_n

    @property
    def omega(self) -> float:
        return self.constants.omega

    @property
    def lam(self) -> float:
        return self.constants.lam

    @property
    def field(self) -> RadialField:
        c, w, ro = self.constants.c, self.constants.omega, self.geometry.r_outer
        return field_from_par(
            lambda r: spar_derivatives(c, w, ro, r, 0)[0],
            lambda r: spar_derivatives(c, w, ro, r, 1)[1],
            lambda r: spar_derivatives(c, w, ro, r, 2)[2],
            self.geometry,
            min_panels=oscillation_panels(w, self.geometry),
        )

    def derivatives(self, r, order: int = 1) -> np.ndarray:
        return spar_derivatives(
            self.constants.c, self.constants.omega, self.geometry.r_outer, r, order
        )

    def evaluate(self, r):
        return eval_mode(self.constants, self.params, self.geometry, r)

    def mu(self, r):
        return eval_mu(self.constants, self.params, self.geometry, r)


def el_residual(mode: BasisMode, r):
    """Left-minus-right residuals of the two reduced Euler-Lagrange equations."""
    geometry = mode.geometry
    r = geometry.check(r)
    beta, lam = mode.params.beta, mode.lam
    s, d1, d2, d3 = mode.derivatives(r, 3)
    t = s + 0.5 * r * d1
    t1 = 1.5 * d1 + 0.5 * r * d2
    t2 = 2.0 * d2 + 0.5 * r * d3
    mu = eval_mu(mode.constants, mode.params, geometry, r)
    dmu = eval_mu_prime(mode.constants, mode.params, geometry, r)

    trace_part = -0.5 * (1.0 - beta) * (d2 + 2.0 * t2 + 2.0 * (d1 + 2.0 * t1) / r)
    first = trace_part - beta * (d2 + 2.0 * d1 / r - 4.0 * (s - t) / r**2) + dmu - lam * s
    second = trace_part - beta * (t2 + 2.0 * t1 / r + 2.0 * (s - t) / r**2) + mu / r - lam * t
    return first, second


# ---------------------------------------------------------------------------
# residual system


def norm_grid_panels(omega: float, geometry: ShellGeometry, spec: QuadratureSpec) -> int:
    """Panels for the normalisation integral inside Newton solves.

    One panel per half-wave of a slightly raised frequency, so the grid stays
    adequate while omega moves during a solve.  With 16 nodes the Gauss error
    on such a panel is far below round-off.
    """
    waves = int(np.ceil(1.25 * abs(omega) * geometry.width / np.pi)) + 1
    return max(spec.base_panels, waves)


class _NormGrid:
    """Fixed Gauss-Legendre grid for the normalisation integral of one solve."""

    def __init__(self, omega: float, geometry: ShellGeometry, spec: QuadratureSpec):
        self.panels = norm_grid_panels(omega, geometry, spec)
        panels = self.panels
        self.r, w = gauss_grid(geometry, (), panels, spec.nodes_per_panel)
        self.w = w * radial_weight(self.r, spec.weight)


def _residual(x, p, geometry: ShellGeometry, grid: _NormGrid) -> np.ndarray:
    c, omega = x[:5], x[5]
    ri, ro = geometry.r_inner, geometry.r_outer
    radii = np.array([ri, ro])
    e0, e1 = _spar_d01(c, omega, ro, radii)
    nb = c[0] * radii / omega * (c[1] / radii**3 + c[4] / ro**3) - p * e1
    s, d1 = _spar_d01(c, omega, ro, grid.r)
    t = s + 0.5 * grid.r * d1
    norm = (s * s + 2.0 * t * t) @ grid.w
    return np.array(
        [e0[0], e0[1], nb[0], nb[1], norm - NORM_TARGET, float(np.dot(c[1:], c[1:])) - 1.0]
    )


def residual_system(
    x, params: FunctionalParams, geometry: ShellGeometry, spec: QuadratureSpec = DEFAULT_SPEC
) -> np.ndarray:
    """Six residuals at ``x = (c0, c1, c2, c3, c4, omega)``.

    ``[S_par(r_i), S_par(r_o), NB(r_i), NB(r_o), norm - 1/(4 pi), sum c_i^2 - 1]``
    with ``NB(r) = (c0 r / w)(c1 / r^3 + c4 / r_o^3) - p S_par'(r)`` and the norm
    ``int (S_par^2 + 2 S_perp^2) w(r) dr`` in the weight mode of ``spec``.
    """
    x = np.asarray(x, dtype=float)
    if not x[5] > 0:
        raise ValueError("omega must be positive")
    p = params.p if isinstance(params, FunctionalParams) else float(params)
    return _residual(x, p, geometry, _NormGrid(x[5], geometry, spec))


# ---------------------------------------------------------------------------
# Newton


def fd_jacobian(fun: Callable, x: np.ndarray, rel_step: float = FD_REL_STEP) -> np.ndarray:
    """Central-difference Jacobian with step ``rel_step * max(1, |x_i|)``."""
    x = np.asarray(x, dtype=float)
    cols = []
    for i in range(x.size):
        h = rel_step * max(1.0, abs(x[i]))
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        cols.append((fun(xp) - fun(xm)) / (2.0 * h))
    return np.column_stack(cols)


@dataclass
class NewtonResult:
    x: np.ndarray
    residual: float
    iterations: int
    jacobian: Optional[np.ndarray] = None


def newton(
    fun: Callable,
    x0,
    jac: Optional[Callable] = None,
    tol: float = NEWTON_TOL,
    accept: float = NEWTON_ACCEPT,
    max_iter: int = NEWTON_MAX_ITER,
    jac0: Optional[np.ndarray] = None,
    refresh: float = 0.0,
) -> NewtonResult:
    """Damped Newton iteration on ``fun(x) = 0`` in the sup-norm.

    The step is halved up to 30 times until the residual decreases.  The
    Jacobian is refreshed whenever the last step reduced the residual by
    less than the factor ``refresh``; the default refreshes every step.
    """
    jac = jac or (lambda y: fd_jacobian(fun, y))
    x = np.array(x0, dtype=float)
    f = fun(x)
    norm = float(np.max(np.abs(f)))
    J, ratio = jac0, 1.0
    for it in range(max_iter):
        if norm <= tol:
            return NewtonResult(x, norm, it, J)
        if J is None or ratio > refresh:
            J = jac(x)
        try:
            dx = np.linalg.solve(J, -f)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobianError("singular Jacobian in Newton step") from exc
        t = 1.0
        for _ in range(NEWTON_MAX_HALVINGS + 1):
            xn = x + t * dx
            fn = fun(xn)
            nn = float(np.max(np.abs(fn)))
            if np.isfinite(nn) and nn < norm:
                break
            t *= 0.5
        else:
            break
        ratio = nn / norm
        x, f, norm = xn, fn, nn
    if norm <= accept:
        return NewtonResult(x, norm, max_iter, J)
    raise ConvergenceError(f"Newton stalled at residual {norm:.3e}")


# ---------------------------------------------------------------------------
# p = 0


def _p0_residual(y, geometry, grid):
    c0, c2, c3, omega = y
    full = _residual(np.array([c0, 0.0, c2, c3, 0.0, omega]), 0.0, geometry, grid)
    return full[[0, 1, 5, 4]]


def _fix_sign(x: np.ndarray) -> np.ndarray:
    """``c3 >= 0`` (via the representation symmetry) and then ``c0 > 0``."""
    x = x.copy()
    if x[3] < 0:
        x[:5] = -x[:5]
    if x[0] < 0:
        x[0] = -x[0]
    return x


def _solve_p0_from(omega0: float, index_n: int, geometry, spec) -> np.ndarray:
    grid = _NormGrid(omega0, geometry, spec)
    x = np.array([1.0, 0.0, 0.0, 1.0, 0.0, omega0])
    norm = _residual(x, 0.0, geometry, grid)[4] + NORM_TARGET
    c0 = np.sqrt(NORM_TARGET / norm)
    res = newton(lambda y: _p0_residual(y, geometry, grid), [c0, 0.0, 1.0, omega0])
    c0, c2, c3, omega = res.x
    if omega <= 0:
        raise ConvergenceError(f"mode {index_n}: Newton converged to omega={omega}")
    x = np.array([c0, 0.0, c2, c3, 0.0, omega])
    # re-evaluate on a grid built for the converged frequency
    final = _NormGrid(omega, geometry, spec)
    if abs(omega - omega0) > 0.25 * abs(omega0):
        res = newton(lambda y: _p0_residual(y, geometry, final), res.x)
        x = np.array([res.x[0], 0.0, res.x[1], res.x[2], 0.0, res.x[3]])
    return _fix_sign(x)


def solve_p0(
    index_n: int,
    geometry: ShellGeometry = ShellGeometry(),
    spec: QuadratureSpec = DEFAULT_SPEC,
    known: Sequence[float] = (),
) -> ModeConstants:
    """Mode ``index_n`` at ``p = 0`` (``c1 = c4 = 0``).

    ``known`` lists frequencies of modes already found; converging onto one of
    them triggers a re-seed of ``omega0`` by ``+-pi / (2 width)``.
    """
    if index_n < 1:
        raise ValueError("index_n must be >= 1")
    base = index_n * np.pi / geometry.width
    shift = np.pi / (2.0 * geometry.width)
    seeds = [base]
    for j in range(1, MAX_RESEEDS + 1):
        seeds.append(base + (j + 1) // 2 * shift * (1 if j % 2 else -1))
    last = None
    for omega0 in seeds:
        if omega0 <= 0:
            continue
        try:
            x = _solve_p0_from(omega0, index_n, geometry, spec)
        except ConvergenceError as exc:
            last = exc
            continue
        if any(abs(x[5] - w) <= DUPLICATE_TOL for w in known):
            last = DuplicateRootError(
                f"mode {index_n} converged onto a known frequency {x[5]:.10g}"
            )
            continue
        return ModeConstants.from_vector(index_n, x)
    raise last or ConvergenceError(f"mode {index_n} did not converge")


_P0_LOCK = threading.Lock()
_P0_CACHE: dict = {}


def p0_modes(n: int, geometry: ShellGeometry = ShellGeometry(), spec: QuadratureSpec = DEFAULT_SPEC):
    """The first ``n`` modes at ``p = 0``, ordered by increasing frequency."""
    with _P0_LOCK:
        found = _P0_CACHE.setdefault((geometry, spec), [])
        while len(found) < n:
            mode = solve_p0(len(found) + 1, geometry, spec, [m.omega for m in found])
            if found and mode.omega <= found[-1].omega:
                raise ConvergenceError(
                    f"mode {mode.index_n} has omega {mode.omega:.10g} below mode "
                    f"{found[-1].index_n}"
                )
            found.append(mode)
        return tuple(found[:n])


# ---------------------------------------------------------------------------
# continuation in p


def _check_p(p: float):
    if not 0.0 <= p <= P_MAX:
        rule = "p ≥ 0" if p < 0 else "p ≤ 5"
        raise ParameterError(f"p = {p:g} is outside the admissible strip: requires {rule}")


def continuation_matrices(x, p, geometry, spec, grid=None):
    """``M = dR/dx`` and ``b = -dR/dp`` by central differences."""
    grid = grid or _NormGrid(x[5], geometry, spec)
    M = fd_jacobian(lambda y: _residual(y, p, geometry, grid), x)
    h = FD_REL_STEP * max(1.0, abs(p))
    b = -(_residual(x, p + h, geometry, grid) - _residual(x, p - h, geometry, grid)) / (2 * h)
    return M, b


def continue_in_p(
    base: ModeConstants,
    p_target: float,
    geometry: ShellGeometry = ShellGeometry(),
    spec: QuadratureSpec = DEFAULT_SPEC,
    p_start: float = 0.0,
) -> ModeConstants:
    """Carry ``base`` (a solution at ``p_start``) along the branch to ``p_target``.

    Euler predictor from ``M v = b`` followed by a Newton corrector; the step
    starts at 0.05 and adapts to the corrector's behaviour.
    """
    _check_p(p_target)
    if p_target == p_start:
        return base
    x = base.as_vector()
    p = p_start
    direction = 1.0 if p_target > p_start else -1.0
    h = CONT_INITIAL_STEP
    jump_limit = 0.05 * np.pi / geometry.width
    while p != p_target:
        step = min(h, abs(p_target - p))
        p_next = p_target if step == abs(p_target - p) else p + direction * step
        grid = _NormGrid(x[5], geometry, spec)
        M, b = continuation_matrices(x, p, geometry, spec, grid)
        if np.linalg.cond(M) > COND_LIMIT:
            raise SingularJacobianError(
                f"continuation Jacobian is singular at p={p:.6g} (mode {base.index_n})"
            )
        x_pred = x + (p_next - p) * np.linalg.solve(M, b)
        fun = lambda y, q=p_next: _residual(y, q, geometry, grid)  # noqa: E731
        try:
            res = newton(fun, x_pred, jac0=M, refresh=0.1)
            ok = abs(res.x[5] - x_pred[5]) <= jump_limit and np.dot(res.x[:5], x[:5]) > 0
        except ConvergenceError:
            ok = False
        if not ok:
            h *= 0.5
            if h < CONT_MIN_STEP:
                raise ConvergenceError(
                    f"continuation of mode {base.index_n} stalled at p={p:.6g}"
                )
            continue
        x, p = res.x, p_next
        if res.iterations <= CONT_FAST_ITERS:
            h = min(2.0 * h, CONT_MAX_STEP)
    # polish if the final frequency calls for a different grid
    final = _NormGrid(x[5], geometry, spec)
    if final.panels != grid.panels:
        x = newton(lambda y: _residual(y, p_target, geometry, final), x).x
    return ModeConstants.from_vector(base.index_n, x)


@lru_cache(maxsize=None)
def _anchor(index_n: int, j: int, geometry: ShellGeometry, spec: QuadratureSpec) -> ModeConstants:
    if j == 0:
        return p0_modes(index_n, geometry, spec)[index_n - 1]
    prev = _anchor(index_n, j - 1, geometry, spec)
    return continue_in_p(prev, j * ANCHOR_SPACING, geometry, spec, (j - 1) * ANCHOR_SPACING)


@lru_cache(maxsize=None)
def solve_mode(
    index_n: int, p: float, geometry: ShellGeometry = ShellGeometry(), spec: QuadratureSpec = DEFAULT_SPEC
) -> ModeConstants:
    """Constants of mode ``index_n`` at ``p``.

    Continuation always runs through cached anchors at multiples of 0.5, so
    the result is independent of the order in which modes are requested.
    """
    _check_p(p)
    j = int(np.floor(p / ANCHOR_SPACING + 1e-12))
    anchor = _anchor(index_n, j, geometry, spec)
    return continue_in_p(anchor, p, geometry, spec, j * ANCHOR_SPACING)


def compute_basis(
    params: FunctionalParams,
    n: int,
    geometry: ShellGeometry = ShellGeometry(),
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> list:
    """Modes ``1..n`` at ``params``, ordered by increasing frequency."""
    if n < 1:
        raise ValueError("n must be >= 1")
    p0_modes(n, geometry, spec)
    modes = [
        BasisMode(solve_mode(i, params.p, geometry, spec), params, geometry, spec.weight)
        for i in range(1, n + 1)
    ]
    for a, b in zip(modes, modes[1:]):
        if not b.omega > a.omega:
            raise ConvergenceError(
                f"continuation broke mode ordering at p={params.p}: "
                f"omega_{a.index_n}={a.omega:.10g}, omega_{b.index_n}={b.omega:.10g}"
            )
    return modes


def check_compatible(modes: Sequence[BasisMode]):
    """Raise unless every mode shares parameters, geometry and weight mode."""
    if not modes:
        return
    first = modes[0]
    key = (first.params.p, first.params.k, first.geometry, first.weight)
    for m in modes[1:]:
        if (m.params.p, m.params.k, m.geometry, m.weight) != key:
            raise MixedParameterError(
                "modes mix parameter sets, geometries or weight modes"
            )


# ---------------------------------------------------------------------------
# records


def mode_record(mode: BasisMode, spec: QuadratureSpec = DEFAULT_SPEC) -> dict:
    """JSON-ready record with a fixed key order."""
    c = mode.constants
    return {
        "n": c.index_n,
        "p": mode.params.p,
        "k": mode.params.k,
        "r_inner": mode.geometry.r_inner,
        "r_outer": mode.geometry.r_outer,
        "omega": c.omega,
        "lambda": c.lam,
        "c": list(c.c),
        "energy": energy(mode.field, mode.params.p, spec),
        "norm_weight": mode.weight,
    }


def mode_from_record(record: dict) -> BasisMode:
    c = record["c"]
    constants = ModeConstants(int(record["n"]), float(record["omega"]), *map(float, c))
    params = FunctionalParams(record["p"], record["k"])
    geometry = ShellGeometry(record["r_inner"], record["r_outer"])
    return BasisMode(constants, params, geometry, record["norm_weight"])
