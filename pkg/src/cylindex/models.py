"""Ready-made specs: the six generator families, calibration operators, and
index +-1 / +-2 symbols on the two-torus."""

from __future__ import annotations

import numpy as np

from .symbol_core import (
    Base,
    OperatorSpec,
    PeriodicFunction,
    SemiPeriodicCoefficient,
    SymbolSpec,
    TrigSymbol,
)

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
I2 = np.eye(2, dtype=complex)


def _same(f: PeriodicFunction) -> SemiPeriodicCoefficient:
    return SemiPeriodicCoefficient.same(f)


# -- generator families (k = 1) ------------------------------------------------


def multiplication_by_x(coeffs: dict[int, complex]) -> OperatorSpec:
    """a(M_x), with a(x) = sum coeffs[q] e^{iqx}."""
    f = PeriodicFunction(1, {(0, q): c for q, c in coeffs.items()}, Base.CIRCLE)
    return OperatorSpec(Base.CIRCLE, 1, 0, {(0, 0): _same(f)})


def multiplication_by_t(b_minus: complex, b_plus: complex, base=Base.POINT) -> OperatorSpec:
    """b(M_t) with limits b(-inf), b(+inf)."""
    coef = SemiPeriodicCoefficient(
        plus=PeriodicFunction.constant(b_plus, 1, base), minus=PeriodicFunction.constant(b_minus, 1, base)
    )
    return OperatorSpec(base, 1, 0, {(0, 0): coef})


def exponential(j: int, base=Base.POINT) -> OperatorSpec:
    """e^{i j M_t}: its periodic limit is e^{i j theta} at both ends."""
    return OperatorSpec(base, 1, 0, {(0, 0): _same(PeriodicFunction(1, {(j, 0): 1.0}, base))})


def lambda_operator(base=Base.POINT) -> OperatorSpec:
    """Lambda = (1 - Delta)^{-1/2}: order 1 with vanishing top-order part."""
    zero = PeriodicFunction.zero(1, base)
    one = PeriodicFunction.constant(1.0, 1, base)
    return OperatorSpec(base, 1, 1, {(0, 0): _same(one), (1, 0): _same(zero)})


def dt_lambda(base=Base.POINT) -> OperatorSpec:
    """D_t Lambda, principal symbol tau."""
    return OperatorSpec(base, 1, 1, {(1, 0): _same(PeriodicFunction.constant(1.0, 1, base))})


def dx_lambda(c_coeffs: dict[int, complex]) -> OperatorSpec:
    """c(x) D_x Lambda on B = circle, principal symbol c(x) xi."""
    c = PeriodicFunction(1, {(0, q): v for q, v in c_coeffs.items()}, Base.CIRCLE)
    return OperatorSpec(Base.CIRCLE, 1, 1, {(0, 1): _same(c)})


def dbar_spec(shift: complex = 0.0, base=Base.CIRCLE) -> OperatorSpec:
    """(D_theta + i D_x + shift) Lambda, principal symbol tau + i xi."""
    one = PeriodicFunction.constant(1.0, 1, base)
    terms = {(1, 0): _same(one)}
    if base is Base.CIRCLE:
        terms[(0, 1)] = _same(PeriodicFunction.constant(1j, 1, base))
    if shift:
        terms[(0, 0)] = _same(PeriodicFunction.constant(shift, 1, base))
    return OperatorSpec(base, 1, 1, terms)


# -- calibration ---------------------------------------------------------------


def toeplitz_symbol(winding_minus: int = 0, winding_plus: int = 1) -> TrigSymbol:
    """Point-base symbol equal to e^{i w_- theta} at tau=-1 and e^{i w_+ theta} at tau=+1."""
    terms: dict[tuple[int, int, int], complex] = {}

    def add(key, v):
        terms[key] = terms.get(key, 0) + v

    # f = (f+ + f-)/2 + tau (f+ - f-)/2 and tau = e^{i psi} on the fiber points
    add((winding_plus, 0, 0), 0.5)
    add((winding_minus, 0, 0), 0.5)
    add((winding_plus, 0, 1), 0.5)
    add((winding_minus, 0, 1), -0.5)
    return TrigSymbol(1, {k: v for k, v in terms.items() if v != 0}, Base.POINT)


def calibration_spec() -> SymbolSpec:
    """a^- trivial; a^+ is 1 on the tau=-1 copy and z on the tau=+1 copy.  delta_1 = (0, -1)."""
    return SymbolSpec(
        Base.POINT, 1, plus=toeplitz_symbol(0, 1), minus=TrigSymbol.constant(1.0, 1, Base.POINT)
    )


# -- the two-torus ---------------------------------------------------------------


def lattice_degree_one_symbol(mass: float = 2.0) -> TrigSymbol:
    """a = d_3 I + i (d_0 s_1 + d_1 s_2 + d_2 s_3) with
    d = (sin theta, sin x, xi, mass + cos theta + cos x + tau).

    d never vanishes for mass not in {+-1, +-3}; for 1 < mass < 3 the map
    T^2 x S^1 -> R^4 minus 0 has degree one and the index is -1.
    """
    s1, s2, s3 = PAULI
    terms: dict[tuple[int, int, int], np.ndarray] = {
        (0, 0, 0): mass * I2,
        (1, 0, 0): 0.5 * I2 + 0.5 * s1,  # cos theta I + i sin theta s1
        (-1, 0, 0): 0.5 * I2 - 0.5 * s1,
        (0, 1, 0): 0.5 * I2 + 0.5 * s2,
        (0, -1, 0): 0.5 * I2 - 0.5 * s2,
        (0, 0, 1): 0.5 * I2 + 0.5 * s3,  # tau I + i xi s3
        (0, 0, -1): 0.5 * I2 - 0.5 * s3,
    }
    return TrigSymbol(2, terms, Base.CIRCLE)


def su2_degree_one(theta, x, tau, xi, mass: float = 2.0) -> np.ndarray:
    """The SU(2)-valued normalization of :func:`lattice_degree_one_symbol`."""
    theta, x, tau, xi = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (theta, x, tau, xi)))
    d = np.stack([np.sin(theta), np.sin(x), xi, mass + np.cos(theta) + np.cos(x) + tau])
    d = d / np.linalg.norm(d, axis=0)
    s1, s2, s3 = PAULI
    return (
        d[3][..., None, None] * I2
        + 1j * (d[0][..., None, None] * s1 + d[1][..., None, None] * s2 + d[2][..., None, None] * s3)
    )


def degree_one_symbol_spec(side: str = "plus", mass: float = 2.0) -> SymbolSpec:
    """2x2 semi-periodic symbol with the degree-one symbol at one end, identity at the other."""
    a = lattice_degree_one_symbol(mass)
    one = TrigSymbol.constant(I2, 2, Base.CIRCLE)
    if side == "plus":
        return SymbolSpec(Base.CIRCLE, 2, plus=a, minus=one)
    return SymbolSpec(Base.CIRCLE, 2, plus=one, minus=a)


def chern_field(mass: float) -> PeriodicFunction:
    """d(theta, x) . sigma with d = (sin theta, sin x, mass + cos theta + cos x)."""
    s1, s2, s3 = PAULI
    coeffs = {
        (0, 0): mass * s3,
        (1, 0): (s1 / 1j + s3) / 2,
        (-1, 0): (-s1 / 1j + s3) / 2,
        (0, 1): (s2 / 1j + s3) / 2,
        (0, -1): (-s2 / 1j + s3) / 2,
    }
    return PeriodicFunction(2, coeffs, Base.CIRCLE)


def twisted_dirac_spec(mass_plus: float = 1.0, mass_minus: float | None = None) -> OperatorSpec:
    """First-order 2x2 system D_theta + i (d . sigma) D_x on the cylinder over a circle.

    Principal symbol tau + i xi (d . sigma); elliptic whenever d never
    vanishes (mass not in {0, +-2}).  Its index is twice the Chern number of
    d / |d|, so +-2 for 0 < |mass| < 2.  ``mass_minus=None`` uses the
    trivial field d = (0, 0, 3) at t = -inf.
    """
    s3 = PAULI[2]
    one = PeriodicFunction.constant(I2, 2, Base.CIRCLE)
    plus = chern_field(mass_plus).scale(1j)
    minus = (
        PeriodicFunction.constant(3j * s3, 2, Base.CIRCLE)
        if mass_minus is None
        else chern_field(mass_minus).scale(1j)
    )
    return OperatorSpec(
        Base.CIRCLE,
        2,
        1,
        {(1, 0): SemiPeriodicCoefficient.same(one), (0, 1): SemiPeriodicCoefficient(plus=plus, minus=minus)},
    )
