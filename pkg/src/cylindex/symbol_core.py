"""Semi-periodic operator specifications and their principal symbols.

An :class:`OperatorSpec` describes ``A = L Lambda^N`` on the cylinder R x B
(B a point or a circle) through the periodic limits of its coefficients at
``t = -inf`` and ``t = +inf``.  Only those limits are stored, so everything
computed here (boundary symbols, boundary operators, the index pair) depends
on them alone.

A :class:`SymbolSpec` is the symbol-level counterpart: two arbitrary smooth
symbols on S*(S^1 x B), given as trigonometric polynomials in
``(theta, x, psi)`` with ``tau + i xi = exp(i psi)``.  Symbols of differential
operators are homogeneous polynomials in ``(tau, xi)`` and therefore satisfy
``a(-v) = (-1)^N a(v)``; that parity forces even indices on the torus and
zero indices over a point, so index +-1 examples need this second form.

Fiber convention: the cosphere fiber is parametrized by ``psi`` with
``(tau, xi) = (cos psi, sin psi)``.  For ``B = point`` the fiber reduces to
the two points ``tau = -1`` and ``tau = +1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import MatrixSizeMismatch, ValidationError

DEFAULT_GRID = (64, 64, 64)
DEFAULT_ELLIPTIC_TOL = 1e-8
DEFAULT_FREDHOLM_RADII = {"point": (32, 64), "circle": (12, 16)}


class Base(str, enum.Enum):
    POINT = "point"
    CIRCLE = "circle"

    @property
    def dim(self) -> int:
        """Dimension of S^1 x B, which is also the Fourier lattice dimension."""
        return 1 if self is Base.POINT else 2


class Side(str, enum.Enum):
    MINUS = "minus"
    PLUS = "plus"

    @property
    def other(self) -> "Side":
        return Side.PLUS if self is Side.MINUS else Side.MINUS


def _as_base(base) -> Base:
    return base if isinstance(base, Base) else Base(str(base).lower())


def _as_side(side) -> Side:
    return side if isinstance(side, Side) else Side(str(side).lower())


def _frozen_matrix(value, k: int) -> np.ndarray:
    arr = np.array(value, dtype=complex)
    if arr.ndim == 0:
        arr = arr * np.eye(k, dtype=complex)
    if arr.shape != (k, k):
        raise MatrixSizeMismatch(f"expected a {k}x{k} matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("coefficient matrix has non-finite entries")
    arr.setflags(write=False)
    return arr


class PeriodicFunction:
    """Matrix-valued trigonometric polynomial a(theta, x) = sum a_pq e^{i(p theta + q x)}.

    ``coeffs`` maps ``(p, q)`` to a k x k matrix (scalars are promoted to
    multiples of the identity).  For a point base every ``q`` must be 0.
    """

    __slots__ = ("k", "base", "_coeffs")

    def __init__(self, k: int, coeffs: Mapping[tuple[int, int], object], base=Base.CIRCLE):
        if int(k) != k or k < 1:
            raise ValidationError(f"matrix size must be a positive integer, got {k!r}")
        self.k = int(k)
        self.base = _as_base(base)
        store = {}
        for key, value in coeffs.items():
            p, q = (int(key[0]), int(key[1])) if isinstance(key, tuple) else (int(key), 0)
            if self.base is Base.POINT and q != 0:
                raise ValidationError("a point base admits no x-frequencies (q must be 0)")
            mat = _frozen_matrix(value, self.k)
            if (p, q) in store:
                mat = _frozen_matrix(store[(p, q)] + mat, self.k)
            store[(p, q)] = mat
        self._coeffs = dict(sorted(store.items()))

    @classmethod
    def constant(cls, value, k: int = 1, base=Base.CIRCLE) -> "PeriodicFunction":
        return cls(k, {(0, 0): value}, base)

    @classmethod
    def zero(cls, k: int = 1, base=Base.CIRCLE) -> "PeriodicFunction":
        return cls(k, {}, base)

    @property
    def coeffs(self) -> dict[tuple[int, int], np.ndarray]:
        return dict(self._coeffs)

    def coefficient(self, p: int, q: int = 0) -> np.ndarray:
        c = self._coeffs.get((p, q))
        return np.zeros((self.k, self.k), dtype=complex) if c is None else c

    @property
    def band(self) -> int:
        """Largest |frequency| with a nonzero coefficient (0 for the zero function)."""
        b = 0
        for (p, q), c in self._coeffs.items():
            if np.any(c != 0):
                b = max(b, abs(p), abs(q))
        return b

    def is_zero(self) -> bool:
        return all(not np.any(c) for c in self._coeffs.values())

    def __call__(self, theta, x=0.0) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        x = np.asarray(x, dtype=float)
        shape = np.broadcast_shapes(theta.shape, x.shape)
        out = np.zeros(shape + (self.k, self.k), dtype=complex)
        for (p, q), c in self._coeffs.items():
            phase = np.exp(1j * (p * theta + q * x))
            out += np.broadcast_to(phase, shape)[..., None, None] * c
        return out

    def __add__(self, other: "PeriodicFunction") -> "PeriodicFunction":
        _check_compatible(self, other)
        merged = {key: c.copy() for key, c in self._coeffs.items()}
        for key, c in other._coeffs.items():
            merged[key] = merged[key] + c if key in merged else c.copy()
        return PeriodicFunction(self.k, merged, self.base)

    def scale(self, factor) -> "PeriodicFunction":
        return PeriodicFunction(self.k, {key: factor * c for key, c in self._coeffs.items()}, self.base)

    def conj_transpose(self) -> "PeriodicFunction":
        """Pointwise conjugate transpose: coefficient (p, q) becomes conj(a_{-p,-q})^T."""
        return PeriodicFunction(
            self.k, {(-p, -q): c.conj().T for (p, q), c in self._coeffs.items()}, self.base
        )

    def __repr__(self) -> str:
        return f"PeriodicFunction(k={self.k}, base={self.base.value}, modes={list(self._coeffs)})"


def _check_compatible(a, b) -> None:
    if a.k != b.k:
        raise MatrixSizeMismatch(f"matrix sizes differ: {a.k} vs {b.k}")
    if a.base is not b.base:
        raise ValidationError(f"base manifolds differ: {a.base.value} vs {b.base.value}")


@dataclass(frozen=True)
class SemiPeriodicCoefficient:
    plus: PeriodicFunction
    minus: PeriodicFunction

    def __post_init__(self):
        _check_compatible(self.plus, self.minus)

    @classmethod
    def same(cls, f: PeriodicFunction) -> "SemiPeriodicCoefficient":
        return cls(plus=f, minus=f)

    def side(self, side) -> PeriodicFunction:
        return self.plus if _as_side(side) is Side.PLUS else self.minus

    @property
    def k(self) -> int:
        return self.plus.k


@dataclass(frozen=True)
class OperatorSpec:
    """``A = L Lambda^N`` with ``L = sum a_{j,alpha} D_t^j D_x^alpha`` (j + alpha <= N).

    ``terms`` maps ``(j, alpha)`` to the periodic limits of ``a_{j,alpha}``.
    """

    base: Base
    k: int
    N: int
    terms: Mapping[tuple[int, int], SemiPeriodicCoefficient] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "base", _as_base(self.base))
        if int(self.N) != self.N or self.N < 0:
            raise ValidationError(f"order N must be a nonnegative integer, got {self.N!r}")
        terms = {}
        for (j, alpha), coef in self.terms.items():
            j, alpha = int(j), int(alpha)
            if j < 0 or alpha < 0:
                raise ValidationError(f"negative derivative order in term {(j, alpha)}")
            if j + alpha > self.N:
                raise ValidationError(f"term {(j, alpha)} exceeds the declared order N={self.N}")
            if self.base is Base.POINT and alpha != 0:
                raise ValidationError("a point base has no x-derivatives (alpha must be 0)")
            if coef.k != self.k:
                raise MatrixSizeMismatch(f"term {(j, alpha)} has size {coef.k}, spec has k={self.k}")
            if coef.plus.base is not self.base:
                raise ValidationError(f"term {(j, alpha)} lives on a different base")
            terms[(j, alpha)] = coef
        if not any(j + a == self.N for j, a in terms):
            raise ValidationError(f"no term of top order N={self.N}: the declared order is wrong")
        object.__setattr__(self, "terms", dict(sorted(terms.items())))

    def top_terms(self) -> dict[tuple[int, int], SemiPeriodicCoefficient]:
        return {ja: c for ja, c in self.terms.items() if sum(ja) == self.N}

    def swap_sides(self) -> "OperatorSpec":
        terms = {ja: SemiPeriodicCoefficient(plus=c.minus, minus=c.plus) for ja, c in self.terms.items()}
        return OperatorSpec(self.base, self.k, self.N, terms)

    def conj_transpose(self) -> "OperatorSpec":
        """The coefficient family a_{j,alpha} -> a_{j,alpha}^*, i.e. the formal adjoint modulo lower order."""
        terms = {
            ja: SemiPeriodicCoefficient(plus=c.plus.conj_transpose(), minus=c.minus.conj_transpose())
            for ja, c in self.terms.items()
        }
        return OperatorSpec(self.base, self.k, self.N, terms)

    def with_term(self, j: int, alpha: int, coef: SemiPeriodicCoefficient) -> "OperatorSpec":
        """Return a copy with ``coef`` added to the (j, alpha) coefficient."""
        terms = dict(self.terms)
        if (j, alpha) in terms:
            old = terms[(j, alpha)]
            coef = SemiPeriodicCoefficient(plus=old.plus + coef.plus, minus=old.minus + coef.minus)
        terms[(j, alpha)] = coef
        return OperatorSpec(self.base, self.k, self.N, terms)

    def __add__(self, other: "OperatorSpec") -> "OperatorSpec":
        if (self.base, self.k, self.N) != (other.base, other.k, other.N):
            raise ValidationError("specs must share base, matrix size and order to be added")
        out = self
        for (j, a), c in other.terms.items():
            out = out.with_term(j, a, c)
        return out


class TrigSymbol:
    """Matrix trigonometric polynomial on S*(S^1 x B): sum c_pqr e^{i(p theta + q x + r psi)}.

    On the fiber, ``e^{i r psi} = (tau + i xi)^r``, so evaluation needs only
    ``(tau, xi)``.
    """

    __slots__ = ("k", "base", "_coeffs")

    def __init__(self, k: int, coeffs: Mapping[tuple[int, int, int], object], base=Base.CIRCLE):
        self.k = int(k)
        self.base = _as_base(base)
        store: dict[tuple[int, int, int], np.ndarray] = {}
        for (p, q, r), value in coeffs.items():
            p, q, r = int(p), int(q), int(r)
            if self.base is Base.POINT and q != 0:
                raise ValidationError("a point base admits no x-frequencies (q must be 0)")
            mat = _frozen_matrix(value, self.k)
            if (p, q, r) in store:
                mat = _frozen_matrix(store[(p, q, r)] + mat, self.k)
            store[(p, q, r)] = mat
        self._coeffs = dict(sorted(store.items()))

    @classmethod
    def constant(cls, value, k: int = 1, base=Base.CIRCLE) -> "TrigSymbol":
        return cls(k, {(0, 0, 0): value}, base)

    @property
    def coeffs(self) -> dict[tuple[int, int, int], np.ndarray]:
        return dict(self._coeffs)

    @property
    def band(self) -> int:
        b = 0
        for (p, q, _), c in self._coeffs.items():
            if np.any(c != 0):
                b = max(b, abs(p), abs(q))
        return b

    def evaluate(self, theta, x, tau, xi) -> np.ndarray:
        theta, x, tau, xi = (np.asarray(v, dtype=float) for v in (theta, x, tau, xi))
        shape = np.broadcast_shapes(theta.shape, x.shape, tau.shape, xi.shape)
        zeta = tau + 1j * xi
        out = np.zeros(shape + (self.k, self.k), dtype=complex)
        for (p, q, r), c in self._coeffs.items():
            w = np.exp(1j * (p * theta + q * x)) * _zeta_power(zeta, r)
            out += np.broadcast_to(w, shape)[..., None, None] * c
        return out

    def base_fourier(self, tau, xi) -> dict[tuple[int, int], np.ndarray]:
        """Fourier coefficients in (theta, x) at each fiber direction; values have shape (n_dir, k, k)."""
        zeta = np.asarray(tau, dtype=float) + 1j * np.asarray(xi, dtype=float)
        out: dict[tuple[int, int], np.ndarray] = {}
        for (p, q, r), c in self._coeffs.items():
            w = _zeta_power(zeta, r)[..., None, None] * c
            out[(p, q)] = out[(p, q)] + w if (p, q) in out else w
        return out

    def __mul__(self, other: "TrigSymbol") -> "TrigSymbol":
        """Pointwise matrix product."""
        _check_compatible(self, other)
        prod: dict[tuple[int, int, int], np.ndarray] = {}
        for (p1, q1, r1), c1 in self._coeffs.items():
            for (p2, q2, r2), c2 in other._coeffs.items():
                key = (p1 + p2, q1 + q2, r1 + r2)
                prod[key] = prod[key] + c1 @ c2 if key in prod else c1 @ c2
        return TrigSymbol(self.k, prod, self.base)

    def conj_transpose(self) -> "TrigSymbol":
        return TrigSymbol(
            self.k, {(-p, -q, -r): c.conj().T for (p, q, r), c in self._coeffs.items()}, self.base
        )

    def __repr__(self) -> str:
        return f"TrigSymbol(k={self.k}, base={self.base.value}, terms={len(self._coeffs)})"


def _zeta_power(zeta: np.ndarray, r: int) -> np.ndarray:
    # zeta lies on the unit circle, so negative powers are conjugate powers
    return zeta**r if r >= 0 else np.conj(zeta) ** (-r)


@dataclass(frozen=True)
class SymbolSpec:
    """Semi-periodic symbol given directly by its two restrictions f_- and f_+."""

    base: Base
    k: int
    plus: TrigSymbol
    minus: TrigSymbol

    def __post_init__(self):
        object.__setattr__(self, "base", _as_base(self.base))
        for s in (self.plus, self.minus):
            if s.k != self.k:
                raise MatrixSizeMismatch(f"symbol has size {s.k}, spec has k={self.k}")
            if s.base is not self.base:
                raise ValidationError("symbol lives on a different base")

    def side(self, side) -> TrigSymbol:
        return self.plus if _as_side(side) is Side.PLUS else self.minus

    def swap_sides(self) -> "SymbolSpec":
        return SymbolSpec(self.base, self.k, plus=self.minus, minus=self.plus)

    def conj_transpose(self) -> "SymbolSpec":
        return SymbolSpec(self.base, self.k, plus=self.plus.conj_transpose(), minus=self.minus.conj_transpose())


@dataclass(frozen=True)
class CospherePoint:
    theta: float
    x: float = 0.0
    tau: float = 1.0
    xi: float = 0.0

    def __post_init__(self):
        if abs(self.tau**2 + self.xi**2 - 1.0) > 1e-12:
            raise ValidationError(f"(tau, xi) = ({self.tau}, {self.xi}) is not on the unit circle")


def _principal(spec: OperatorSpec, side: Side, theta, x, tau, xi) -> np.ndarray:
    theta, x, tau, xi = (np.asarray(v, dtype=float) for v in (theta, x, tau, xi))
    shape = np.broadcast_shapes(theta.shape, x.shape, tau.shape, xi.shape)
    out = np.zeros(shape + (spec.k, spec.k), dtype=complex)
    for (j, alpha), coef in spec.top_terms().items():
        weight = np.broadcast_to(tau**j * xi**alpha, shape)
        out += weight[..., None, None] * coef.side(side)(theta, x)
    return out


def _spec_base_fourier(spec: OperatorSpec, side: Side, tau, xi) -> dict[tuple[int, int], np.ndarray]:
    tau = np.asarray(tau, dtype=float)
    xi = np.asarray(xi, dtype=float)
    out: dict[tuple[int, int], np.ndarray] = {}
    for (j, alpha), coef in spec.top_terms().items():
        weight = (tau**j * xi**alpha)[..., None, None]
        for pq, c in coef.side(side).coeffs.items():
            w = weight * c
            out[pq] = out[pq] + w if pq in out else w
    return out


class BoundarySymbol:
    """The restriction f_- or f_+ of the principal symbol to S*(S^1 x B)."""

    def __init__(self, side, k: int, base, evaluator, fourier, band: int, label: str = ""):
        self.side = _as_side(side)
        self.k = k
        self.base = _as_base(base)
        self._evaluator = evaluator
        self._fourier = fourier
        self.band = band
        self.label = label

    def evaluate(self, theta, x, tau, xi) -> np.ndarray:
        """Vectorized evaluation; the result has shape broadcast(...) + (k, k)."""
        if self.base is Base.POINT:
            x, xi = 0.0, 0.0 * np.asarray(xi, dtype=float)
        return self._evaluator(theta, x, tau, xi)

    def __call__(self, pt: CospherePoint) -> np.ndarray:
        return self.evaluate(pt.theta, pt.x, pt.tau, pt.xi)

    def base_fourier(self, tau, xi) -> dict[tuple[int, int], np.ndarray]:
        """Exact (theta, x)-Fourier coefficients of the symbol at the given fiber directions."""
        return self._fourier(tau, xi)

    def fiber_points(self, n_psi: int) -> tuple[np.ndarray, np.ndarray]:
        if self.base is Base.POINT:
            return np.array([-1.0, 1.0]), np.array([0.0, 0.0])
        psi = 2 * np.pi * np.arange(n_psi) / n_psi
        return np.cos(psi), np.sin(psi)

    def __repr__(self) -> str:
        return f"BoundarySymbol(side={self.side.value}, k={self.k}, base={self.base.value}{', ' + self.label if self.label else ''})"


def boundary_symbol(spec: OperatorSpec | SymbolSpec, side) -> BoundarySymbol:
    side = _as_side(side)
    if isinstance(spec, SymbolSpec):
        sym = spec.side(side)
        return BoundarySymbol(side, spec.k, spec.base, sym.evaluate, sym.base_fourier, sym.band, "symbol-level")
    band = max((c.side(side).band for c in spec.top_terms().values()), default=0)
    return BoundarySymbol(
        side,
        spec.k,
        spec.base,
        lambda th, x, tau, xi: _principal(spec, side, th, x, tau, xi),
        lambda tau, xi: _spec_base_fourier(spec, side, tau, xi),
        band,
        f"order {spec.N}",
    )


def evaluate_principal_symbol(spec: OperatorSpec | SymbolSpec, side, pt: CospherePoint) -> np.ndarray:
    """Principal symbol at the t = -inf or t = +inf end, evaluated at one cosphere point."""
    side = _as_side(side)
    if isinstance(spec, SymbolSpec):
        return boundary_symbol(spec, side)(pt)
    x = 0.0 if spec.base is Base.POINT else pt.x
    xi = 0.0 if spec.base is Base.POINT else pt.xi
    return _principal(spec, side, pt.theta, x, pt.tau, xi)


def _grid_values(sym: BoundarySymbol, grid) -> np.ndarray:
    n_theta, n_x, n_psi = grid
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    tau, xi = sym.fiber_points(n_psi)
    if sym.base is Base.POINT:
        th, ta = np.meshgrid(theta, tau, indexing="ij")
        return sym.evaluate(th, 0.0, ta, 0.0 * ta)
    x = 2 * np.pi * np.arange(n_x) / n_x
    th, xx, ta = np.meshgrid(theta, x, tau, indexing="ij")
    _, _, xv = np.meshgrid(theta, x, xi, indexing="ij")
    return sym.evaluate(th, xx, ta, xv)


def symbol_margin(sym: BoundarySymbol, grid=DEFAULT_GRID) -> float:
    """Smallest singular value of the symbol over a uniform grid."""
    vals = _grid_values(sym, grid)
    return float(np.linalg.svd(vals, compute_uv=False)[..., -1].min())


def check_uniform_ellipticity(spec, grid=DEFAULT_GRID, tol: float = DEFAULT_ELLIPTIC_TOL) -> tuple[bool, float]:
    """Return ``(elliptic, margin)``; margin is the minimum over both ends and the grid.

    Only the two periodic limits are inspected: interior values of the
    coefficients are not part of the data model.
    """
    n_theta, n_x, n_psi = grid
    if min(n_theta, n_x) < 8 or n_psi < 16:
        raise ValidationError("grid needs >= 8 points per periodic variable and >= 16 on the fiber")
    margin = min(symbol_margin(boundary_symbol(spec, s), grid) for s in Side)
    return margin > tol, margin


@dataclass(frozen=True)
class BoundaryOperatorSpec:
    """``sum a_{j,alpha}(theta, x) D_theta^j D_x^alpha (1 + D_theta^2 + D_x^2)^{-N/2}`` on S^1 x B."""

    base: Base
    k: int
    N: int
    side: Side
    full_order: bool
    terms: Mapping[tuple[int, int], PeriodicFunction]
    elliptic: bool

    @property
    def band(self) -> int:
        return max((f.band for f in self.terms.values()), default=0)

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.terms.values())


def boundary_operator(spec: OperatorSpec, side, full_order: bool = False) -> BoundaryOperatorSpec:
    side = _as_side(side)
    terms = {
        ja: coef.side(side)
        for ja, coef in spec.terms.items()
        if full_order or sum(ja) == spec.N
    }
    sym = boundary_symbol(spec, side)
    elliptic = symbol_margin(sym, (32, 32, 32)) > DEFAULT_ELLIPTIC_TOL
    return BoundaryOperatorSpec(spec.base, spec.k, spec.N, side, bool(full_order), terms, elliptic)


def check_total_fredholm(spec, grid=DEFAULT_GRID, radii=None, tol: float = 1e-6) -> bool:
    """Elliptic symbol and both boundary operators invertible (numerically, via the oracle)."""
    from . import oracle

    elliptic, _ = check_uniform_ellipticity(spec, grid)
    if not elliptic:
        return False
    radii = tuple(radii or DEFAULT_FREDHOLM_RADII[spec.base.value])
    for side in Side:
        assembler = oracle.boundary_assembler(spec, side)
        if not oracle.is_invertible(assembler, radii, tol=tol):
            return False
    return True
