"""Topological index of elliptic symbols on S*(T^2) = T^2 x S^1.

The index of a zero-order operator on the two-torus with invertible symbol
``a`` is the odd Chern integral

    ind = c * integral over T^2 x S^1 of tr((a^{-1} da)^3),   c = -1/(24 pi^2),

with the orientation d theta ^ dx ^ d psi and ``(tau, xi) = (cos psi, sin psi)``.
The sign of ``c`` is the one for which the integral agrees with the
finite-section index of the Kohn-Nirenberg quantization (see ``oracle``).

Derivatives are spectral along each periodic axis; the integral is the
trapezoidal rule, which is spectrally accurate for smooth periodic data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import AliasedGrid, NonIntegerResult, SingularSample, ValidationError
from .symbol_core import Base, BoundarySymbol

CHERN_CONSTANT = -1.0 / (24 * np.pi**2)
DEFAULT_RESOLUTION = (48, 48, 48)
INVERTIBILITY_TOL = 1e-8
SMOOTHNESS_TOL = 1e-6
ROUNDING_TOL = 0.05


@dataclass(frozen=True)
class SymbolGrid3:
    """Samples ``values[i, j, l] = a(theta_i, x_j, psi_l)`` on the uniform grid of T^2 x S^1."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim == 3:
            vals = vals[..., None, None]
        if vals.ndim != 5 or vals.shape[3] != vals.shape[4]:
            raise ValidationError(f"grid values must have shape (n_theta, n_x, n_psi, k, k), got {vals.shape}")
        if min(vals.shape[:3]) < 16:
            raise ValidationError(f"each resolution must be >= 16, got {vals.shape[:3]}")
        if not np.all(np.isfinite(vals)):
            raise ValidationError("grid contains non-finite values")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def resolution(self) -> tuple[int, int, int]:
        return tuple(self.values.shape[:3])

    @property
    def k(self) -> int:
        return self.values.shape[3]

    @classmethod
    def from_function(cls, f, resolution=DEFAULT_RESOLUTION) -> "SymbolGrid3":
        """Sample ``f(theta, x, tau, xi)`` (vectorized, returning (..., k, k))."""
        th, xx, psi = _axes(resolution)
        T, X, P = np.meshgrid(th, xx, psi, indexing="ij")
        return cls(f(T, X, np.cos(P), np.sin(P)))

    @classmethod
    def from_symbol(cls, sym: BoundarySymbol, resolution=DEFAULT_RESOLUTION) -> "SymbolGrid3":
        if sym.base is not Base.CIRCLE:
            raise ValidationError("odd Chern integrals need B = circle (S*(T^2))")
        return cls.from_function(sym.evaluate, resolution)

    def to_json(self) -> list:
        v = self.values
        return np.stack([v.real, v.imag], axis=-1).tolist()

    @classmethod
    def from_json(cls, data) -> "SymbolGrid3":
        arr = np.asarray(data, dtype=float)
        if arr.ndim != 6 or arr.shape[-1] != 2:
            raise ValidationError(
                f"grid JSON must be nested [theta][x][psi][row][col][re,im], got shape {arr.shape}"
            )
        return cls(arr[..., 0] + 1j * arr[..., 1])

    @classmethod
    def load(cls, path) -> "SymbolGrid3":
        return cls.from_json(json.loads(Path(path).read_text()))


def _axes(resolution):
    return [2 * np.pi * np.arange(n) / n for n in resolution]


def _wavenumbers(n: int) -> np.ndarray:
    k = np.fft.fftfreq(n, 1.0 / n)
    if n % 2 == 0:
        k[n // 2] = 0.0  # Nyquist mode has no well-defined derivative
    return k


def _spectral_derivative(values: np.ndarray, axis: int) -> np.ndarray:
    n = values.shape[axis]
    shape = [1] * values.ndim
    shape[axis] = n
    ik = (1j * _wavenumbers(n)).reshape(shape)
    return np.fft.ifft(ik * np.fft.fft(values, axis=axis), axis=axis)


def smoothness_ratio(g: SymbolGrid3) -> float:
    """Worst share, over the three axes, of derivative energy in the top third of frequencies."""
    worst = 0.0
    for axis in range(3):
        n = g.values.shape[axis]
        spec = np.abs(np.fft.fft(g.values, axis=axis)) ** 2
        k = np.abs(_wavenumbers(n))
        shape = [1] * 5
        shape[axis] = n
        weight = (k**2).reshape(shape)
        total = float((weight * spec).sum())
        if total == 0.0:
            continue
        top = float(((k > n / 3).reshape(shape) * weight * spec).sum())
        worst = max(worst, top / total)
    return worst


def _check(g: SymbolGrid3) -> None:
    smin = np.linalg.svd(g.values, compute_uv=False)[..., -1]
    if smin.min() <= INVERTIBILITY_TOL:
        idx = np.unravel_index(np.argmin(smin), smin.shape)
        raise SingularSample(f"symbol nearly singular at grid index {idx} (s_min={smin.min():.3e})")
    ratio = smoothness_ratio(g)
    if ratio >= SMOOTHNESS_TOL:
        raise AliasedGrid(f"{ratio:.2e} of the derivative energy sits in the top third of frequencies")


def chern_integrand(g: SymbolGrid3) -> np.ndarray:
    """Coefficient of d theta ^ dx ^ d psi in tr((a^{-1} da)^3), per grid point.

    Written as the cyclic sum of tr(w_i [w_j, w_k]); for k = 1 every
    commutator is exactly zero in floating point.
    """
    a = g.values
    try:
        inv = np.linalg.inv(a)
    except np.linalg.LinAlgError as exc:
        raise SingularSample("symbol is singular at some grid point") from exc
    w = [inv @ _spectral_derivative(a, axis) for axis in range(3)]

    def comm(u, v):
        return u @ v - v @ u

    form = w[0] @ comm(w[1], w[2]) + w[1] @ comm(w[2], w[0]) + w[2] @ comm(w[0], w[1])
    return np.trace(form, axis1=-2, axis2=-1)


def odd_chern_integral(g: SymbolGrid3) -> float:
    _check(g)
    integrand = chern_integrand(g)
    cell = np.prod([2 * np.pi / n for n in g.resolution])
    # pairwise summation keeps the reduction deterministic
    total = np.sum(integrand.ravel()) * cell
    return float(CHERN_CONSTANT * total.real)


def fedosov_index(g: SymbolGrid3) -> int:
    value = odd_chern_integral(g)
    nearest = int(np.rint(value))
    if abs(value - nearest) > ROUNDING_TOL:
        raise NonIntegerResult(f"odd Chern integral {value:.6f} is not close to an integer")
    return nearest


def symbol_index(sym: BoundarySymbol, resolution=DEFAULT_RESOLUTION) -> int:
    return fedosov_index(SymbolGrid3.from_symbol(sym, resolution))
