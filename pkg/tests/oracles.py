"""Independent reference computations used by the test suite.

Nothing here imports the solver internals: these oracles integrate the
governing ODE directly, or evaluate closed forms written out separately.
"""

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

R_I, R_O = 0.5, 1.0


def _rhs(lam):
    def f(r, y):
        s, d1, d2, d3 = y
        d4 = -8.0 * d3 / r - (8.0 / r**2 + lam) * d2 - (-8.0 / r**3 + 4.0 * lam / r) * d1
        return [d1, d2, d3, d4]

    return f


def shooting_determinant(omega, p, ri=R_I, ro=R_O):
    """Boundary determinant of the fourth-order ODE for S_par.

    Two fundamental solutions start at ``ri`` with ``S = 0`` and the natural
    condition ``r S'' = (p - 4) S'``; the determinant of their values of
    ``[S, r S'' - (p - 4) S']`` at ``ro`` vanishes at eigenfrequencies.
    """
    lam = omega * omega
    cols = []
    for d1, d3 in ((1.0, 0.0), (0.0, 1.0)):
        y0 = [0.0, d1, (p - 4.0) * d1 / ri, d3]
        sol = solve_ivp(_rhs(lam), (ri, ro), y0, method="DOP853", rtol=1e-13, atol=1e-15)
        s, e1, e2, _ = sol.y[:, -1]
        cols.append([s, ro * e2 - (p - 4.0) * e1])
    return np.linalg.det(np.array(cols).T)


def shooting_frequencies(p, omega_max, ri=R_I, ro=R_O, step=0.05):
    """All eigenfrequencies below ``omega_max`` found by scan plus bisection."""
    grid = np.arange(step, omega_max, step)
    vals = [shooting_determinant(w, p, ri, ro) for w in grid]
    roots = []
    for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
        if fa * fb < 0:
            roots.append(brentq(shooting_determinant, a, b, args=(p, ri, ro), xtol=1e-14))
    return np.array(roots)


def p0_determinant(omega, ri=R_I, ro=R_O):
    """At p = 0, S_par is linear in (c2, c3); both boundary zeros need a singular 2x2 system."""
    rows = []
    for r in (ri, ro):
        wr = omega * r
        rows.append([wr * np.cos(wr) - np.sin(wr), np.cos(wr) + wr * np.sin(wr)])
    return np.linalg.det(np.array(rows))


# -- amplitude/phase forms at p = 0 ---------------------------------------


def amplitude_phase_par(c, omega, r):
    """S_par = A sin(w r + theta); principal arcsin branch needs c3 w r - c2 >= 0."""
    c0, _, c2, c3, _ = c
    r = np.asarray(r, dtype=float)
    wr = omega * r
    amp = c0 * np.sqrt(1.0 + wr**2) / (omega**3 * r**3)
    theta = np.arcsin((c2 * wr + c3) / np.sqrt(1.0 + wr**2))
    return amp * np.sin(wr + theta)


def amplitude_phase_perp(c, omega, r):
    """S_perp = A cos(w r - theta).

    The cosine of the phase is ``(c3 (w^2 r^2 - 1) - c2 w r) / sqrt(Q)``;
    the principal arccos branch needs ``c2 (1 - w^2 r^2) - c3 w r >= 0``.
    """
    c0, _, c2, c3, _ = c
    r = np.asarray(r, dtype=float)
    wr = omega * r
    q = wr**4 - wr**2 + 1.0
    amp = c0 * np.sqrt(q) / (2.0 * omega**3 * r**3)
    theta = np.arccos((c3 * (wr**2 - 1.0) - c2 * wr) / np.sqrt(q))
    return amp * np.cos(wr - theta)


def perp_branch_ok(c, omega, r):
    _, _, c2, c3, _ = c
    wr = omega * np.asarray(r, dtype=float)
    return c2 * (1.0 - wr**2) - c3 * wr >= 0


def amplitude_phase_mu(c, omega, beta, r):
    """mu at p = 0: -(c0 (1 - beta) A_mu sin(w r + theta_mu)) / (2 w r^2)."""
    c0, _, c2, c3, _ = c
    r = np.asarray(r, dtype=float)
    wr = omega * r
    amp = np.sqrt((1.0 + wr**2) * (c2**2 + c3**2))
    theta = np.arcsin((c3 + c2 * wr) / amp)
    return -c0 * (1.0 - beta) * amp * np.sin(wr + theta) / (2.0 * omega * r**2)


def algebraic_mu(c, omega, r_outer, r):
    """mu on the beta = 1 line."""
    c0, c1, _, _, c4 = c
    r = np.asarray(r, dtype=float)
    return -c0 / (2.0 * omega * r**2) * (c1 - 2.0 * c4 * r**3 / r_outer**3)


# -- energy through the divergence theorem ---------------------------------


def energy_by_parts(derivs, p, ri=R_I, ro=R_O, nodes=400):
    """Boundary flux form of the energy of a divergence-free field.

    ``derivs(r)`` returns ``(S_par, S_par', S_par'')``.  The flux of
    ``(Grad S)^T [S]`` through the sphere of radius r is
    ``4 pi r^2 (S_par S_par' + 2 (S_par - S_perp) S_perp / r)``.
    """

    def parts(r):
        s, d1, d2 = derivs(r)
        t = s + 0.5 * r * d1
        return s, d1, t, 1.5 * d1 + 0.5 * r * d2

    def flux(r):
        s, d1, t, _ = parts(np.array([r]))
        return float(r * r * (s * d1 + 2.0 * (s - t) * t / r)[0])

    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(ri, ro, 33)
    vol = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        r = 0.5 * (a + b) + 0.5 * (b - a) * x
        _, d1, _, dt = parts(r)
        vol += 0.5 * (b - a) * np.sum(w * (d1 + 2.0 * dt) ** 2 * r * r)
    return 0.5 * p * 4.0 * np.pi * (flux(ro) - flux(ri)) + 0.25 * 4.0 * np.pi * vol


# -- candidates, written straight from the closed forms ---------------------


def thermo_par(r, kappa=2.8, mu=1.0, alpha=1.75e-2, c=1.0 / 9.0, ri=R_I, ro=R_O):
    num = 9 * c * alpha * kappa * mu * (r - ri) * (ro - r) * (
        ri**2 * ro**2 + r * ri * ro * (ri + ro) + r**2 * (ri**2 + ri * ro + ro**2)
    )
    return num / ((3 * kappa + 4 * mu) * ro * r**3 * (ri**2 + ri * ro + ro**2))


def thermo_perp(r, kappa=2.8, mu=1.0, alpha=1.75e-2, c=1.0 / 9.0, ri=R_I, ro=R_O):
    s2 = ri**2 + ri * ro + ro**2
    num = 9 * c * alpha * kappa * mu * (
        ri**3 * ro**3 - 3 * r**4 * s2 + 2 * r**3 * (ri**3 + ri**2 * ro + ri * ro**2 + ro**3)
    )
    return num / (2 * (3 * kappa + 4 * mu) * ro * r**3 * s2)


def shrink_displacements(p0, r, kappa=3.0, mu=1.0, rm=0.75, ri=R_I, ro=R_O):
    """Radial displacements of the inner and outer shells under interface pressure p0."""
    u_in = -p0 * rm**3 * (3 * ri**3 * kappa + 4 * r**3 * mu) / (12 * kappa * mu * r**2 * (rm**3 - ri**3))
    u_out = p0 * rm**3 * (3 * ro**3 * kappa + 4 * r**3 * mu) / (12 * kappa * mu * r**2 * (ro**3 - rm**3))
    return u_in, u_out


# -- continuation by pure ODE integration ------------------------------------


def continue_by_integration(base_vector, p_target, matrices, rtol=1e-11, atol=1e-13):
    """Integrate dx/dp = M^{-1} b from p = 0, with no corrector.

    ``matrices(x, p)`` returns ``(M, b)``.
    """

    def rhs(p, x):
        M, b = matrices(x, p)
        return np.linalg.solve(M, b)

    sol = solve_ivp(rhs, (0.0, p_target), base_vector, method="DOP853", rtol=rtol, atol=atol)
    return sol.y[:, -1]
