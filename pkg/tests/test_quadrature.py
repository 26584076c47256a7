import numpy as np
import pytest

from resbasis.errors import ConvergenceError, DiscontinuousFieldError
from resbasis.fields import RadialField, RadialProfile, ShellGeometry, field_from_par
from resbasis.quadrature import (
    NORM_TARGET,
    QuadratureSpec,
    energy,
    energy_inner,
    h1_error_sq,
    integrate,
    l2_inner,
    l2_norm,
)

GEOM = ShellGeometry()


def poly(a):
    ri, ro = GEOM.r_inner, GEOM.r_outer
    return field_from_par(
        lambda r: a * (r - ri) * (ro - r),
        lambda r: a * (ri + ro - 2 * r),
        lambda r: -2 * a + 0 * r,
        GEOM,
    )


def test_polynomial_is_exact():
    assert integrate(lambda r: r**5, GEOM) == pytest.approx((1 - 0.5**6) / 6, rel=1e-14)


def test_vector_integrand():
    out = integrate(lambda r: np.array([r, r * r]), GEOM)
    assert np.allclose(out, [(1 - 0.25) / 2, (1 - 0.125) / 3], rtol=1e-14)


def test_oscillatory_integrand_refines():
    w = 200.0
    exact = (np.sin(w) - np.sin(0.5 * w)) / w
    assert integrate(lambda r: np.cos(w * r), GEOM) == pytest.approx(exact, abs=1e-12)


def test_breakpoint_split_is_exact_for_steps():
    val = integrate(lambda r: np.where(r < 0.7, 1.0, 3.0), GEOM, breakpoints=(0.7,))
    assert val == pytest.approx(0.2 + 0.9, rel=1e-14)


def test_budget_exhaustion_raises():
    with pytest.raises(ConvergenceError):
        integrate(lambda r: np.sign(np.sin(1e4 * r)), GEOM, max_panels=64)


def test_spec_validation_and_alias():
    assert QuadratureSpec(weight="paper-literal").weight == "paper"
    with pytest.raises(ValueError):
        QuadratureSpec(weight="r3")
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=0)


def test_norm_target_matches_unit_volume_normalisation():
    assert 4 * np.pi * NORM_TARGET == pytest.approx(1.0)


def test_l2_of_constant_field():
    one = RadialProfile(lambda r: np.ones_like(r), lambda r: np.zeros_like(r), width=0.5)
    f = RadialField(one, one, GEOM)
    vol = 4 * np.pi * (1 - 0.125) / 3
    assert l2_norm(f) ** 2 == pytest.approx(3 * vol, rel=1e-13)
    flat = l2_norm(f, QuadratureSpec(weight="paper")) ** 2
    assert flat == pytest.approx(3 * 4 * np.pi * 0.5, rel=1e-13)


def test_energy_is_quadratic_and_polarises():
    a, b = poly(2.0), poly(-0.7) + poly(1.3).scaled(0.5)
    p = 2.5
    ea, eb, eab = energy(a, p), energy(b, p), energy(a + b, p)
    assert energy(a.scaled(3.0), p) == pytest.approx(9 * ea, rel=1e-12)
    assert energy_inner(a, b, p) == pytest.approx(eab - ea - eb, rel=1e-10, abs=1e-12)


def test_h1_refuses_discontinuous_fields():
    step = RadialProfile(lambda r: np.where(r < 0.7, 0.0, 1.0), breakpoints=(0.7,), width=0.5)
    f = RadialField(step, step, GEOM)
    with pytest.raises(DiscontinuousFieldError):
        h1_error_sq(f)
    with pytest.raises(DiscontinuousFieldError):
        energy(f, 1.0)


def test_h1_exceeds_l2():
    f = poly(3.0)
    assert h1_error_sq(f) > l2_inner(f, f)
