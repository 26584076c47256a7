import numpy as np
import pytest

import oracles
from resbasis.basis import (
    BasisMode,
    FunctionalParams,
    ModeConstants,
    check_compatible,
    compute_basis,
    continuation_matrices,
    continue_in_p,
    eval_mu,
    mode_from_record,
    mode_record,
    mu_f1,
    mu_f2,
    natural_bc,
    newton,
    p0_modes,
    residual_system,
    solve_mode,
    spar_derivatives,
)
from resbasis.errors import ConvergenceError, MixedParameterError, ParameterError
from resbasis.fields import ShellGeometry, equilibrium_residual
from resbasis.quadrature import DEFAULT_SPEC, QuadratureSpec, energy, l2_inner

GEOM = ShellGeometry()
R50 = np.linspace(0.5, 1.0, 50)


# -- parameters -------------------------------------------------------------


def test_strip_coordinates_round_trip():
    for beta, gamma in [(0, 0), (1, 0), (1, 1), (1, -1), (0.3, 0.5)]:
        prm = FunctionalParams.from_beta_gamma(beta, gamma)
        assert prm.beta == pytest.approx(beta)
        assert prm.gamma == pytest.approx(gamma)
    assert (FunctionalParams.from_beta_gamma(1, 1).p, FunctionalParams.from_beta_gamma(1, 1).k) == (2, 1)


@pytest.mark.parametrize("p,k,rule", [(6, 0, "p ≤ 5"), (-1, 0, "p ≥ 0"), (1, -0.5, "k ≥ 0")])
def test_out_of_strip_names_the_rule(p, k, rule):
    with pytest.raises(ParameterError, match=rule):
        FunctionalParams(p, k)


def test_strict_mode_excludes_the_boundary():
    FunctionalParams(0, 0)
    with pytest.raises(ParameterError, match="p > 0"):
        FunctionalParams(0, 1, strict=True)
    with pytest.raises(ParameterError, match="k > 0"):
        FunctionalParams(1, 0, strict=True)


def test_nonfinite_parameters_rejected():
    with pytest.raises(ParameterError):
        FunctionalParams(float("nan"))


# -- evaluation -------------------------------------------------------------


def test_derivatives_against_finite_differences():
    m = p0_modes(3)[2]
    h = 1e-5
    r = np.linspace(0.55, 0.95, 9)
    d = spar_derivatives(m.c, m.omega, 1.0, r, 3)
    for k in range(3):
        fd = (spar_derivatives(m.c, m.omega, 1.0, r + h, k)[k] - spar_derivatives(m.c, m.omega, 1.0, r - h, k)[k]) / (2 * h)
        assert np.allclose(d[k + 1], fd, rtol=1e-6, atol=1e-6 * np.max(np.abs(d[k + 1])))


def test_modes_are_divergence_free_and_boundary_traction_free():
    for m in compute_basis(FunctionalParams(2.5, 1), 4):
        f = m.field
        scale = np.max(np.abs(f.s_par(R50)))
        assert np.max(np.abs(equilibrium_residual(f, R50))) < 1e-10 * scale * m.omega
        s_ends = f.s_par(np.array([0.5, 1.0]))
        assert np.max(np.abs(s_ends)) < 1e-10 * scale
        nbc = natural_bc(m.constants, 2.5, GEOM, np.array([0.5, 1.0]))
        assert np.max(np.abs(nbc)) < 1e-8 * scale * m.omega**2


@pytest.mark.parametrize("n", [1, 2, 3, 4, 10])
def test_amplitude_phase_forms_at_p0(n):
    m = p0_modes(n)[n - 1]
    s_par, s_perp = BasisMode(m, FunctionalParams(0), GEOM).evaluate(R50)
    scale = np.max(np.abs(s_par))
    _, _, c2, c3, _ = m.c
    assert np.all(c3 * m.omega * R50 - c2 >= 0)
    assert np.allclose(oracles.amplitude_phase_par(m.c, m.omega, R50), s_par, atol=1e-12 * scale)
    ok = oracles.perp_branch_ok(m.c, m.omega, R50)
    assert ok.all()
    assert np.allclose(oracles.amplitude_phase_perp(m.c, m.omega, R50), s_perp, atol=1e-12 * scale)


@pytest.mark.parametrize("p,k", [(0, 0), (0, 1.5), (2, 4)])
def test_multiplier_forms_agree(p, k):
    m = solve_mode(2, p)
    prm = FunctionalParams(p, k)
    mu = eval_mu(m, prm, GEOM, R50)
    split = k * mu_f1(m, GEOM, R50) + mu_f2(m, p, GEOM, R50)
    assert np.allclose(mu, split, rtol=1e-12, atol=1e-12 * np.max(np.abs(mu)))
    if p == 0:
        ref = oracles.amplitude_phase_mu(m.c, m.omega, prm.beta, R50) + oracles.algebraic_mu(m.c, m.omega, 1.0, R50)
        assert np.allclose(mu, ref, atol=1e-10 * np.max(np.abs(mu)))


# -- p = 0 solve ------------------------------------------------------------


def test_p0_frequencies_are_roots_of_closed_form_determinant():
    for m in p0_modes(10):
        slope = abs(oracles.p0_determinant(m.omega + 1e-6) - oracles.p0_determinant(m.omega - 1e-6)) / 2e-6
        assert abs(oracles.p0_determinant(m.omega)) < 1e-9 * slope


def test_p0_sign_convention_and_ordering():
    modes = p0_modes(20)
    assert all(m.c3 >= 0 and m.c0 > 0 for m in modes)
    omegas = [m.omega for m in modes]
    assert np.all(np.diff(omegas) > 0)
    assert np.all(np.abs(np.diff(omegas) - np.pi / 0.5) < 0.3)


# -- continuation -----------------------------------------------------------


def test_continuation_matches_shooting_at_interior_p():
    ref = oracles.shooting_frequencies(2.5, 20.0, step=0.5)
    got = [solve_mode(n, 2.5).omega for n in (1, 2, 3)]
    assert np.allclose(got, ref[:3], atol=1e-8)


def test_continuation_matches_pure_ode_integration():
    base = p0_modes(2)[1]
    x = oracles.continue_by_integration(
        base.as_vector(),
        0.5,
        lambda y, q: continuation_matrices(y, q, GEOM, DEFAULT_SPEC),
        rtol=1e-9,
        atol=1e-10,
    )
    assert np.allclose(x, solve_mode(2, 0.5).as_vector(), atol=1e-7)


def test_continuation_is_reversible():
    up = solve_mode(3, 2.0)
    down = continue_in_p(up, 0.0, GEOM, DEFAULT_SPEC, p_start=2.0)
    assert np.allclose(down.as_vector(), p0_modes(3)[2].as_vector(), atol=1e-9)


def test_result_does_not_depend_on_request_order():
    a = solve_mode(4, 1.7)
    solve_mode.cache_clear()
    solve_mode(2, 3.1)
    b = solve_mode(4, 1.7)
    assert a.as_vector().tolist() == b.as_vector().tolist()


def test_residual_system_vanishes_at_solution():
    m = solve_mode(3, 4.2)
    res = residual_system(m.as_vector(), FunctionalParams(4.2), GEOM, DEFAULT_SPEC)
    assert np.max(np.abs(res)) < 1e-10


def test_energy_matches_divergence_theorem_form():
    for p in (0.0, 2.5, 5.0):
        m = compute_basis(FunctionalParams(p), 3)[2]
        ref = oracles.energy_by_parts(lambda r: m.derivatives(r, 2), p)
        assert energy(m.field, p) == pytest.approx(ref, rel=1e-10)


def test_continuation_rejects_out_of_strip_target():
    with pytest.raises(ParameterError, match="p ≤ 5"):
        solve_mode(1, 5.5)


def test_newton_reports_failure():
    with pytest.raises(ConvergenceError):
        newton(lambda x: np.array([x[0] ** 2 + 1.0]), np.array([0.5]), max_iter=5)


# -- records and compatibility ---------------------------------------------


def test_record_round_trip():
    m = compute_basis(FunctionalParams(1.5, 2), 3)[2]
    rec = mode_record(m)
    assert list(rec) == ["n", "p", "k", "r_inner", "r_outer", "omega", "lambda", "c", "energy", "norm_weight"]
    assert rec["energy"] == pytest.approx(rec["lambda"] / 2, rel=1e-9)
    back = mode_from_record(rec)
    assert back.constants == m.constants
    assert np.array_equal(back.evaluate(R50)[1], m.evaluate(R50)[1])


def test_mixed_modes_are_refused():
    a = compute_basis(FunctionalParams(0), 2)
    b = compute_basis(FunctionalParams(1), 2)
    with pytest.raises(MixedParameterError):
        check_compatible([a[0], b[1]])
    c = BasisMode(a[1].constants, a[1].params, a[1].geometry, "paper")
    with pytest.raises(MixedParameterError):
        check_compatible([a[0], c])


def test_flat_weight_normalises_but_does_not_orthogonalise():
    # orthogonality comes from the volume element; dropping r^2 keeps only the norm
    spec = QuadratureSpec(weight="paper")
    m = compute_basis(FunctionalParams(0), 2, GEOM, spec)
    assert l2_inner(m[1].field, m[1].field, spec) == pytest.approx(1.0, abs=1e-10)
    assert abs(l2_inner(m[0].field, m[1].field, spec)) > 1e-3


def test_negated_constants_flip_the_field():
    m = p0_modes(1)[0]
    a = BasisMode(m, FunctionalParams(0), GEOM).evaluate(R50)[0]
    b = BasisMode(m.negated(), FunctionalParams(0), GEOM).evaluate(R50)[0]
    assert np.allclose(a, -b)
    assert isinstance(m, ModeConstants)
