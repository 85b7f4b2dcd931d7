import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cylindex import models
from cylindex.errors import MatrixSizeMismatch, ValidationError
from cylindex.symbol_core import (
    Base,
    CospherePoint,
    OperatorSpec,
    PeriodicFunction,
    SemiPeriodicCoefficient,
    Side,
    boundary_operator,
    boundary_symbol,
    check_total_fredholm,
    check_uniform_ellipticity,
    evaluate_principal_symbol,
)

from conftest import random_periodic, random_spec

angles = st.floats(0, 2 * np.pi, allow_nan=False)


def _pt(theta, x, psi):
    return CospherePoint(theta, x, np.cos(psi), np.sin(psi))


@given(angles, angles, angles)
@settings(max_examples=30, deadline=None)
def test_dt_lambda_symbol_is_tau(theta, x, psi):
    spec = models.dt_lambda(Base.CIRCLE)
    pt = _pt(theta, x, psi)
    for side in Side:
        assert evaluate_principal_symbol(spec, side, pt)[0, 0] == pytest.approx(np.cos(psi), abs=1e-15)


def test_order_zero_constant_is_constant():
    c = np.array([[1.0, 2.0], [0.5j, -1.0]])
    spec = OperatorSpec(Base.CIRCLE, 2, 0, {(0, 0): SemiPeriodicCoefficient.same(PeriodicFunction.constant(c, 2))})
    for theta in np.linspace(0, 6, 5):
        np.testing.assert_array_equal(evaluate_principal_symbol(spec, "plus", _pt(theta, 1.0, 0.3)), c)


def test_dx_lambda_with_dt_gives_tau_plus_c_xi():
    c = {0: 0.5, 1: 0.25, -1: 0.25}  # c(x) = 0.5 + 0.5 cos x
    spec = models.dt_lambda(Base.CIRCLE) + models.dx_lambda(c)
    for theta, x, psi in [(0.1, 0.2, 0.3), (2.0, 4.0, 5.0), (0.0, np.pi, np.pi / 2)]:
        cx = 0.5 + 0.5 * np.cos(x)
        val = evaluate_principal_symbol(spec, "minus", _pt(theta, x, psi))[0, 0]
        assert val == pytest.approx(np.cos(psi) + cx * np.sin(psi), abs=1e-14)


def test_cosphere_point_invariant():
    with pytest.raises(ValidationError):
        CospherePoint(0.0, 0.0, 1.0, 0.1)


def test_periodic_function_is_periodic(rng):
    f = random_periodic(rng, 2, Base.CIRCLE, band=3)
    th = rng.uniform(0, 2 * np.pi, 20)
    x = rng.uniform(0, 2 * np.pi, 20)
    np.testing.assert_allclose(f(th, x), f(th + 2 * np.pi, x), atol=1e-12)
    np.testing.assert_allclose(f(th, x), f(th, x - 2 * np.pi), atol=1e-12)


def test_spec_validation():
    one = SemiPeriodicCoefficient.same(PeriodicFunction.constant(1.0, 1, Base.POINT))
    with pytest.raises(ValidationError):
        OperatorSpec(Base.POINT, 1, 1, {(0, 0): one})  # no top-order term
    with pytest.raises(ValidationError):
        OperatorSpec(Base.POINT, 1, 1, {(2, 0): one})
    with pytest.raises(ValidationError):
        OperatorSpec(Base.POINT, 1, 1, {(0, 1): one})
    with pytest.raises(MatrixSizeMismatch):
        OperatorSpec(Base.POINT, 2, 0, {(0, 0): one})
    with pytest.raises(ValidationError):
        PeriodicFunction(1, {(0, 1): 1.0}, Base.POINT)


def test_ellipticity_examples():
    elliptic, margin = check_uniform_ellipticity(models.dt_lambda(Base.POINT))
    assert elliptic and margin == pytest.approx(1.0)

    elliptic, margin = check_uniform_ellipticity(models.dt_lambda(Base.CIRCLE))
    assert not elliptic and margin < 1e-12

    # |tau + i xi| = 1 on the circle; brute-force minimization on a much finer grid agrees
    elliptic, margin = check_uniform_ellipticity(models.dbar_spec())
    psi = np.linspace(0, 2 * np.pi, 4001)
    assert elliptic
    assert margin == pytest.approx(np.abs(np.cos(psi) + 1j * np.sin(psi)).min(), abs=1e-12)
    assert margin == pytest.approx(1.0, abs=1e-12)


def test_ellipticity_grid_preconditions():
    with pytest.raises(ValidationError):
        check_uniform_ellipticity(models.dbar_spec(), grid=(4, 8, 16))
    with pytest.raises(ValidationError):
        check_uniform_ellipticity(models.dbar_spec(), grid=(8, 8, 8))


def test_boundary_symbol_examples():
    sym = boundary_symbol(models.dt_lambda(Base.POINT), "minus")
    assert sym(CospherePoint(1.3, 0.0, -1.0, 0.0))[0, 0] == -1.0
    sym3 = boundary_symbol(models.exponential(1, Base.CIRCLE), "plus")
    for theta in (0.0, 1.0, 2.5):
        assert sym3(_pt(theta, 0.7, 1.1))[0, 0] == pytest.approx(np.exp(1j * theta))

    spec = models.multiplication_by_t(2.0, -3.0)
    pt = CospherePoint(0.4, 0.0, 1.0, 0.0)
    assert boundary_symbol(spec, "plus")(pt)[0, 0] == -3.0
    assert boundary_symbol(spec, "minus")(pt)[0, 0] == 2.0


def test_boundary_symbol_matches_principal_symbol_exactly(rng):
    spec = random_spec(rng, k=2, N=2)
    for side in Side:
        sym = boundary_symbol(spec, side)
        for _ in range(10):
            pt = _pt(*rng.uniform(0, 2 * np.pi, 3))
            np.testing.assert_array_equal(sym(pt), evaluate_principal_symbol(spec, side, pt))


def test_principal_symbol_is_linear(rng):
    a, b = random_spec(rng), random_spec(rng)
    for _ in range(5):
        pt = _pt(*rng.uniform(0, 2 * np.pi, 3))
        lhs = evaluate_principal_symbol(a + b, "plus", pt)
        rhs = evaluate_principal_symbol(a, "plus", pt) + evaluate_principal_symbol(b, "plus", pt)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_lower_order_terms_do_not_touch_symbol(rng):
    spec = random_spec(rng, k=2, N=2)
    noise = SemiPeriodicCoefficient(
        plus=random_periodic(rng, 2, Base.CIRCLE), minus=random_periodic(rng, 2, Base.CIRCLE)
    )
    perturbed = spec.with_term(1, 0, noise).with_term(0, 0, noise)
    for side in Side:
        for _ in range(5):
            pt = _pt(*rng.uniform(0, 2 * np.pi, 3))
            np.testing.assert_array_equal(
                evaluate_principal_symbol(spec, side, pt), evaluate_principal_symbol(perturbed, side, pt)
            )


def test_conj_transpose_compatibility(rng):
    spec = random_spec(rng, k=3, N=1)
    adj = spec.conj_transpose()
    for side in Side:
        for _ in range(5):
            pt = _pt(*rng.uniform(0, 2 * np.pi, 3))
            np.testing.assert_allclose(
                evaluate_principal_symbol(adj, side, pt),
                evaluate_principal_symbol(spec, side, pt).conj().T,
                atol=1e-12,
            )


def test_swap_sides_swaps_symbols(rng):
    spec = random_spec(rng)
    pt = _pt(0.3, 0.2, 0.1)
    np.testing.assert_array_equal(
        evaluate_principal_symbol(spec.swap_sides(), "plus", pt), evaluate_principal_symbol(spec, "minus", pt)
    )
    assert not np.allclose(evaluate_principal_symbol(spec, "plus", pt), evaluate_principal_symbol(spec, "minus", pt))


def test_boundary_operator_examples():
    op = boundary_operator(models.dt_lambda(Base.POINT), "plus")
    assert op.N == 1 and set(op.terms) == {(1, 0)} and op.elliptic

    a4 = models.lambda_operator(Base.POINT)
    top = boundary_operator(a4, "plus", full_order=False)
    assert top.is_zero() and not top.elliptic
    full = boundary_operator(a4, "plus", full_order=True)
    assert not full.is_zero() and set(full.terms) == {(0, 0), (1, 0)}

    f = PeriodicFunction(1, {(1, 0): 0.5, (0, 0): 2.0}, Base.POINT)
    spec = OperatorSpec(Base.POINT, 1, 0, {(0, 0): SemiPeriodicCoefficient.same(f)})
    op0 = boundary_operator(spec, "minus")
    assert op0.N == 0 and op0.terms[(0, 0)] is f


def test_total_fredholm_examples():
    # D_theta (1 + D_theta^2)^{-1/2} kills constants: elliptic but not invertible
    assert check_uniform_ellipticity(models.dt_lambda(Base.POINT))[0]
    assert not check_total_fredholm(models.dt_lambda(Base.POINT))
    # shifted multiplier (m + 1/2 + i n) / sqrt(1 + m^2 + n^2) never vanishes on the lattice
    assert check_total_fredholm(models.dbar_spec(shift=0.5))
    assert check_total_fredholm(models.dbar_spec(shift=0.5, base=Base.POINT))
    # non-elliptic short-circuits
    assert not check_total_fredholm(models.dt_lambda(Base.CIRCLE))
