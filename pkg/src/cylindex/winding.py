"""Winding numbers of sampled matrix loops and the Noether index formula.

Orientation convention used throughout the package: for B = point,

    ind = wind(f restricted to tau = -1) - wind(f restricted to tau = +1),

which gives index -1 for the operator acting as the identity on negative
Fourier modes and as multiplication by e^{i theta} on nonnegative ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MatrixSizeMismatch, NonClosure, PhaseJump, SingularSample, ValidationError

INVERTIBILITY_TOL = 1e-10
CLOSURE_TOL = 1e-6


@dataclass(frozen=True)
class LoopSample:
    """``values[i]`` is the loop at theta = 2 pi i / n."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim == 1:
            vals = vals[:, None, None]
        if vals.ndim != 3 or vals.shape[1] != vals.shape[2]:
            raise ValidationError(f"loop values must have shape (n, k, k), got {vals.shape}")
        if vals.shape[0] < 16:
            raise ValidationError(f"need at least 16 samples, got {vals.shape[0]}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def k(self) -> int:
        return self.values.shape[1]

    @classmethod
    def from_function(cls, f, n: int = 64) -> "LoopSample":
        theta = 2 * np.pi * np.arange(n) / n
        return cls(np.asarray(f(theta)))


def winding_number(loop: LoopSample, tol: float = INVERTIBILITY_TOL) -> int:
    """Degree of det(loop) around the origin, by unwrapping the determinant phase."""
    smin = np.linalg.svd(loop.values, compute_uv=False)[:, -1]
    bad = np.flatnonzero(smin <= tol)
    if bad.size:
        raise SingularSample(f"sample {bad[0]} has smallest singular value {smin[bad[0]]:.3e}")
    # slogdet keeps the phase well defined when |det| under/overflows
    sign, _ = np.linalg.slogdet(loop.values)
    steps = np.angle(np.roll(sign, -1) / sign)
    worst = np.abs(steps).max()
    if worst >= np.pi / 2:
        raise PhaseJump(f"phase increment {worst:.3f} >= pi/2; sample the loop more finely")
    turns = steps.sum() / (2 * np.pi)
    w = int(np.rint(turns))
    if abs(turns - w) > CLOSURE_TOL:
        raise NonClosure(f"accumulated phase {turns:.9f} turns is not an integer")
    return w


def noether_index(f_minus: LoopSample, f_plus: LoopSample) -> int:
    """Index of a zero-order operator on the circle with symbol f_minus at tau=-1, f_plus at tau=+1."""
    if f_minus.k != f_plus.k:
        raise MatrixSizeMismatch(f"loop sizes differ: {f_minus.k} vs {f_plus.k}")
    return winding_number(f_minus) - winding_number(f_plus)
