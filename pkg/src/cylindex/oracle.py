"""Finite-section Fredholm indices on Fourier lattices.

Operators act on L^2(S^1 x B)^k in the Fourier basis e^{i(m theta + n x)};
windows are {|m| <= R} (d = 1) or {|m|, |n| <= R} (d = 2), and a basis
vector is addressed by ``mode_index * k + component``.

A square finite section always has index zero, so kernels are counted on
*tall* sections instead.  If the operator has Fourier bandwidth ``b`` and
``M`` is its square section on the radius-R window, then for the inner
window of radius ``R - b``

    M[:, inner]             is exactly A restricted to the inner window,
    M[inner, :]^H           is exactly A^* restricted to the inner window.

Neither has truncation artifacts: every singular value is a true value of
``|A u| / |u|`` (resp. ``A^*``), so for a Fredholm operator the non-kernel
part is bounded below by the reduced minimum modulus while kernel vectors
contribute only their tails outside the window.  The index is the
difference of the two kernel counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    NoSpectralGap,
    NotIdempotent,
    NumericalError,
    SingularSymbol,
    SizeMismatch,
    Unstable,
    ValidationError,
)
from .symbol_core import (
    Base,
    BoundaryOperatorSpec,
    BoundarySymbol,
    OperatorSpec,
    Side,
    SymbolSpec,
    TrigSymbol,
    boundary_operator,
    boundary_symbol,
    symbol_margin,
)

DEFAULT_TOL = 1e-6
DEFAULT_GAP = 1e3
MAX_DIM = 6000
COEFF_CUTOFF = 1e-13


@dataclass(frozen=True)
class TruncationWindow:
    radius: int
    dim: int = 1

    def __post_init__(self):
        if int(self.radius) != self.radius or self.radius < 1:
            raise ValidationError(f"window radius must be a positive integer, got {self.radius!r}")
        if self.dim not in (1, 2):
            raise ValidationError(f"lattice dimension must be 1 or 2, got {self.dim!r}")

    @property
    def side_length(self) -> int:
        return 2 * self.radius + 1

    @property
    def n_modes(self) -> int:
        return self.side_length**self.dim

    def size(self, k: int) -> int:
        return k * self.n_modes

    def modes(self) -> np.ndarray:
        """Lattice points, shape (n_modes, dim), in basis order."""
        r = np.arange(-self.radius, self.radius + 1)
        if self.dim == 1:
            return r[:, None]
        m, n = np.meshgrid(r, r, indexing="ij")
        return np.stack([m.ravel(), n.ravel()], axis=1)

    def index_of(self, pts: np.ndarray) -> np.ndarray:
        """Mode index of each lattice point, -1 outside the window."""
        pts = np.asarray(pts)
        inside = np.all(np.abs(pts) <= self.radius, axis=1)
        shifted = pts + self.radius
        if self.dim == 1:
            idx = shifted[:, 0]
        else:
            idx = shifted[:, 0] * self.side_length + shifted[:, 1]
        return np.where(inside, idx, -1)

    def inner_mask(self, inner_radius: int, k: int) -> np.ndarray:
        mask = np.all(np.abs(self.modes()) <= inner_radius, axis=1)
        return np.repeat(mask, k)


@dataclass
class TruncatedOperator:
    window: TruncationWindow
    k: int
    matrix: np.ndarray
    band: int = 0
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        n = self.window.size(self.k)
        if self.matrix.shape != (n, n):
            raise DimensionMismatch(f"matrix shape {self.matrix.shape} does not match window size {n}")
        if not np.all(np.isfinite(self.matrix)):
            raise NumericalError("assembled matrix has non-finite entries")

    def adjoint(self) -> "TruncatedOperator":
        prov = dict(self.provenance, adjoint=not self.provenance.get("adjoint", False))
        return TruncatedOperator(self.window, self.k, self.matrix.conj().T, self.band, prov)


def _place_blocks(window: TruncationWindow, k: int, blocks: dict) -> np.ndarray:
    """``blocks[(p, q)]`` has shape (n_modes, k, k): the block sent from column mode to mode + (p, q)."""
    modes = window.modes()
    n = window.n_modes
    out = np.zeros((n * k, n * k), dtype=complex)
    cols = np.arange(n)
    for (p, q), blk in blocks.items():
        shift = np.array([p] if window.dim == 1 else [p, q])
        rows = window.index_of(modes + shift)
        ok = rows >= 0
        if not np.any(ok):
            continue
        r, c, b = rows[ok], cols[ok], blk[ok]
        for i in range(k):
            for j in range(k):
                out[r * k + i, c * k + j] = b[:, i, j]
    return out


def assemble_boundary_matrix(op: BoundaryOperatorSpec, w: TruncationWindow) -> TruncatedOperator:
    """Square section of ``sum a_{j,alpha} D_theta^j D_x^alpha (1 + D_theta^2 + D_x^2)^{-N/2}``."""
    if w.dim != op.base.dim:
        raise DimensionMismatch(f"base {op.base.value} needs a {op.base.dim}-d window, got {w.dim}-d")
    modes = w.modes().astype(float)
    m = modes[:, 0]
    n = modes[:, 1] if w.dim == 2 else np.zeros_like(m)
    damp = (1.0 + m**2 + n**2) ** (-op.N / 2)
    blocks: dict[tuple[int, int], np.ndarray] = {}
    for (j, alpha), f in op.terms.items():
        weight = (m**j * n**alpha * damp)[:, None, None]
        for pq, c in f.coeffs.items():
            blk = weight * c
            blocks[pq] = blocks[pq] + blk if pq in blocks else blk
    prov = {"kind": "boundary_operator", "side": op.side.value, "full_order": op.full_order, "N": op.N}
    return TruncatedOperator(w, op.k, _place_blocks(w, op.k, blocks), op.band, prov)


def lattice_directions(modes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Fiber point (tau, xi) attached to each lattice mode; the origin gets (1, 0)."""
    if modes.shape[1] == 1:
        tau = np.where(modes[:, 0] >= 0, 1.0, -1.0)
        return tau, np.zeros_like(tau)
    m = modes[:, 0].astype(float)
    n = modes[:, 1].astype(float)
    r = np.hypot(m, n)
    safe = np.where(r > 0, r, 1.0)
    return np.where(r > 0, m / safe, 1.0), np.where(r > 0, n / safe, 0.0)


def trig_symbol_from_grid(values: np.ndarray, base=Base.CIRCLE) -> TrigSymbol:
    """Trigonometric interpolant of samples on the uniform (theta, x, psi) grid."""
    values = np.asarray(values, dtype=complex)
    axes = (0, 1, 2)
    coef = np.fft.fftn(values, axes=axes) / np.prod(values.shape[:3])
    mags = np.abs(coef).max(axis=(-2, -1))
    keep = mags > COEFF_CUTOFF * mags.max()
    freqs = [np.fft.fftfreq(n, 1.0 / n).astype(int) for n in values.shape[:3]]
    terms = {}
    for i, j, l in zip(*np.nonzero(keep)):
        terms[(freqs[0][i], freqs[1][j], freqs[2][l])] = coef[i, j, l]
    return TrigSymbol(values.shape[-1], terms, base)


def trig_symbol_from_loops(f_minus, f_plus) -> TrigSymbol:
    """Point-base symbol equal to ``f_minus`` at tau=-1 and ``f_plus`` at tau=+1."""
    vm = np.asarray(getattr(f_minus, "values", f_minus), dtype=complex)
    vp = np.asarray(getattr(f_plus, "values", f_plus), dtype=complex)
    if vm.shape != vp.shape:
        raise SizeMismatch(f"loop shapes differ: {vm.shape} vs {vp.shape}")
    n = vm.shape[0]
    cm = np.fft.fft(vm, axis=0) / n
    cp = np.fft.fft(vp, axis=0) / n
    freqs = np.fft.fftfreq(n, 1.0 / n).astype(int)
    scale = max(np.abs(cm).max(), np.abs(cp).max())
    terms = {}
    # e^{i psi} = tau on the two fiber points, so f = (f+ + f-)/2 + tau (f+ - f-)/2
    for i, p in enumerate(freqs):
        even, odd = (cp[i] + cm[i]) / 2, (cp[i] - cm[i]) / 2
        if np.abs(even).max() > COEFF_CUTOFF * scale:
            terms[(p, 0, 0)] = even
        if np.abs(odd).max() > COEFF_CUTOFF * scale:
            terms[(p, 0, 1)] = odd
    return TrigSymbol(vm.shape[1], terms, Base.POINT)


def _as_boundary_symbol(sym) -> BoundarySymbol:
    from .fedosov import SymbolGrid3

    if isinstance(sym, BoundarySymbol):
        return sym
    if isinstance(sym, SymbolGrid3):
        sym = trig_symbol_from_grid(sym.values)
    elif isinstance(sym, tuple) and len(sym) == 2:
        sym = trig_symbol_from_loops(*sym)
    if isinstance(sym, TrigSymbol):
        return BoundarySymbol(Side.PLUS, sym.k, sym.base, sym.evaluate, sym.base_fourier, sym.band, "quantized")
    raise ValidationError(f"cannot quantize an object of type {type(sym).__name__}")


def quantize_symbol(sym, w: TruncationWindow, check: bool = True) -> TruncatedOperator:
    """Square section of the Kohn-Nirenberg quantization of a zero-order symbol.

    ``sym`` is a BoundarySymbol, TrigSymbol, SymbolGrid3, or a pair of loops
    (values at tau = -1 and tau = +1) for B = point.
    """
    bs = _as_boundary_symbol(sym)
    if w.dim != bs.base.dim:
        raise DimensionMismatch(f"base {bs.base.value} needs a {bs.base.dim}-d window, got {w.dim}-d")
    if check:
        margin = symbol_margin(bs, (32, 32, 32))
        if margin <= 1e-8:
            raise SingularSymbol(f"symbol is not invertible (margin {margin:.3e})")
    tau, xi = lattice_directions(w.modes())
    blocks = bs.base_fourier(tau, xi)
    blocks = {pq: np.broadcast_to(b, (w.n_modes, bs.k, bs.k)) for pq, b in blocks.items()}
    prov = {"kind": "quantized_symbol", "side": bs.side.value, "label": bs.label}
    return TruncatedOperator(w, bs.k, _place_blocks(w, bs.k, blocks), bs.band, prov)


def boundary_assembler(spec: OperatorSpec | SymbolSpec, side, full_order: bool = True):
    """Window -> TruncatedOperator for the boundary operator at one end of ``spec``."""
    if isinstance(spec, SymbolSpec):
        sym = boundary_symbol(spec, side)

        def assembler(w):
            return quantize_symbol(sym, w, check=False)

    else:
        op = boundary_operator(spec, side, full_order=full_order)

        def assembler(w):
            return assemble_boundary_matrix(op, w)

    assembler.dim = spec.base.dim
    assembler.k = spec.k
    return assembler


@dataclass
class SweepRecord:
    radius: int
    dim: int
    inner_radius: int
    s_max: float
    smallest: list
    smallest_adjoint: list
    ker: int
    coker: int
    gap_ok: bool

    @property
    def index(self) -> int:
        return self.ker - self.coker

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "dim": self.dim,
            "inner_radius": self.inner_radius,
            "s_max": self.s_max,
            "smallest": self.smallest,
            "smallest_adjoint": self.smallest_adjoint,
            "ker": self.ker,
            "coker": self.coker,
            "index": self.index,
            "gap_ok": self.gap_ok,
        }


def _kernel_count(s: np.ndarray, threshold: float, gap: float) -> tuple[int, bool]:
    zero = s[s < threshold]
    nonzero = s[s >= threshold]
    if zero.size and nonzero.size:
        return zero.size, nonzero.min() >= gap * zero.max()
    return zero.size, True


def sweep_record(op: TruncatedOperator, tol: float = DEFAULT_TOL, gap: float = DEFAULT_GAP) -> SweepRecord:
    inner = op.window.radius - op.band
    if inner < 1:
        raise ValidationError(f"radius {op.window.radius} leaves no inner window for bandwidth {op.band}")
    mask = op.window.inner_mask(inner, op.k)
    s = np.linalg.svd(op.matrix[:, mask], compute_uv=False)
    s_adj = np.linalg.svd(op.matrix[mask, :].conj().T, compute_uv=False)
    s_max = float(max(s.max(initial=0.0), s_adj.max(initial=0.0)))
    threshold = tol * s_max if s_max > 0 else np.inf
    ker, ok1 = _kernel_count(s, threshold, gap)
    coker, ok2 = _kernel_count(s_adj, threshold, gap)
    return SweepRecord(
        radius=op.window.radius,
        dim=op.matrix.shape[0],
        inner_radius=inner,
        s_max=s_max,
        smallest=[float(v) for v in np.sort(s)[:5]],
        smallest_adjoint=[float(v) for v in np.sort(s_adj)[:5]],
        ker=int(ker),
        coker=int(coker),
        gap_ok=bool(ok1 and ok2),
    )


def index_sweep(
    assembler,
    radii,
    tol: float = DEFAULT_TOL,
    gap: float = DEFAULT_GAP,
    dim: int | None = None,
    allow_large: bool = False,
) -> list[SweepRecord]:
    """Assemble and analyse each radius; raises nothing numerical (see ``stabilized_index``)."""
    radii = sorted(int(r) for r in radii)
    dim = dim or getattr(assembler, "dim", None) or _guess_dim(assembler)
    k = getattr(assembler, "k", 1)
    records = []
    for r in radii:
        w = TruncationWindow(r, dim)
        if w.size(k) > MAX_DIM and not allow_large:
            raise ValidationError(f"matrix dimension {w.size(k)} exceeds the dense-SVD cap {MAX_DIM}; pass allow_large")
        records.append(sweep_record(assembler(w), tol, gap))
    return records


def _guess_dim(assembler) -> int:
    try:
        assembler(TruncationWindow(1, 1))
        return 1
    except DimensionMismatch:
        return 2


def stabilized_index(records: list[SweepRecord]) -> int:
    if len(records) < 2:
        raise ValidationError("need at least two radii to test stabilization")
    for rec in records[-2:]:
        if not rec.gap_ok:
            raise NoSpectralGap(
                f"radius {rec.radius}: no gap of the required size between zero and nonzero singular values"
            )
    a, b = records[-2], records[-1]
    if (a.ker, a.coker) != (b.ker, b.coker):
        raise Unstable(
            f"kernel counts changed between radii {a.radius} and {b.radius}: "
            f"({a.ker}, {a.coker}) -> ({b.ker}, {b.coker})"
        )
    return b.index


def numerical_index(
    assembler,
    radii,
    tol: float = DEFAULT_TOL,
    gap: float = DEFAULT_GAP,
    dim: int | None = None,
    allow_large: bool = False,
) -> int:
    """Fredholm index from tall finite sections, stabilized over the last two radii."""
    if len(list(radii)) < 2:
        raise ValidationError("need at least two radii")
    return stabilized_index(index_sweep(assembler, radii, tol, gap, dim, allow_large))


def is_invertible(assembler, radii, tol: float = DEFAULT_TOL, gap: float = DEFAULT_GAP) -> bool:
    """Fredholm with trivial kernel and cokernel at the last two radii."""
    try:
        records = index_sweep(assembler, radii, tol, gap)
        stabilized_index(records)
    except NumericalError:
        return False
    return all(rec.ker == 0 and rec.coker == 0 for rec in records[-2:])


def index_idempotent(a, b):
    """Block matrix [[2ab - (ab)^2, a(2 - ba)(1 - ba)], [(1 - ba)b, (1 - ba)^2]].

    ``a`` is m x n and ``b`` is n x m.  Object arrays (e.g. of Fractions)
    are supported, which makes the exact-inverse case exact.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape != b.shape[::-1]:
        raise SizeMismatch(f"incompatible shapes {a.shape} and {b.shape}")
    m, n = a.shape
    dtype = np.result_type(a, b)
    one_m = np.eye(m, dtype=dtype)
    one_n = np.eye(n, dtype=dtype)
    ab = a @ b
    ba = b @ a
    rest = one_n - ba
    top = np.concatenate([2 * ab - ab @ ab, a @ (2 * one_n - ba) @ rest], axis=1)
    bottom = np.concatenate([rest @ b, rest @ rest], axis=1)
    return np.concatenate([top, bottom], axis=0)


def idempotent_defect_trace(p, k_block: int) -> float:
    """trace(p) - k_block, the K_0 difference [p] - [diag(1, 0)] with a k_block-sized unit block."""
    p = np.asarray(p)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise SizeMismatch(f"p must be square, got shape {p.shape}")
    pf = p.astype(complex)
    defect = np.linalg.norm(pf @ pf - pf)
    if defect >= 1e-8:
        raise NotIdempotent(f"|p^2 - p| = {defect:.3e}")
    return float(np.trace(pf).real - k_block)


def shift_matrix(n: int, power: int = 1) -> np.ndarray:
    """Isometric shift C^n -> C^{n+power}, e_i -> e_{i+power} (a finite model of S^power)."""
    s = np.zeros((n + power, n))
    s[np.arange(n) + power, np.arange(n)] = 1.0
    return s
