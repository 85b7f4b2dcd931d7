"""The index pair delta_1([A]) = (ind A^-, ind A^+), by two independent routes.

* topological: winding numbers of f_- / f_+ on the two fiber points
  (B = point) or the odd Chern integral over S*(T^2) (B = circle);
* analytic: finite-section indices of the boundary operators at t = -inf
  and t = +inf.

Pairs are always ordered (minus end, plus end).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import fedosov, oracle
from .errors import CylIndexError, NotElliptic, NumericalError
from .spec_io import spec_hash
from .symbol_core import Base, Side, boundary_symbol, check_uniform_ellipticity
from .winding import LoopSample, noether_index

DEFAULT_LOOP_SAMPLES = 64
DEFAULT_ANALYTIC = {
    Base.POINT: {"radii": (32, 64), "tol": 1e-6},
    # cokernels of quantized torus symbols decay like exp(-0.7 R): at R <= 16
    # their singular values sit near 1e-5 of s_max, well separated by the gap test
    Base.CIRCLE: {"radii": (12, 16), "tol": 1e-3},
}


@dataclass(frozen=True)
class IndexPair:
    ind_minus: int
    ind_plus: int
    provenance: dict = field(default_factory=dict, compare=False)

    def as_tuple(self) -> tuple[int, int]:
        return (self.ind_minus, self.ind_plus)

    def __iter__(self):
        return iter(self.as_tuple())


class SideFailure(NumericalError):
    """One or both ends failed; ``failures`` maps side name to the underlying error."""

    def __init__(self, failures: dict, partial: dict):
        self.failures = failures
        self.partial = partial
        detail = "; ".join(f"{side}: {type(e).__name__}: {e}" for side, e in failures.items())
        super().__init__(detail)


@dataclass
class VerifyConfig:
    grid: int = fedosov.DEFAULT_RESOLUTION[0]
    loop_samples: int = DEFAULT_LOOP_SAMPLES
    radii: tuple | None = None
    tol: float | None = None
    gap: float = oracle.DEFAULT_GAP
    allow_large: bool = False


def _side_topological(spec, side: Side, grid: int, loop_samples: int) -> int:
    sym = boundary_symbol(spec, side)
    if spec.base is Base.POINT:

        def loop(tau):
            return LoopSample.from_function(lambda th: sym.evaluate(th, 0.0, tau, 0.0), loop_samples)

        return noether_index(loop(-1.0), loop(1.0))
    return fedosov.symbol_index(sym, (grid, grid, grid))


def delta1_topological(spec, grid: int | None = None, loop_samples: int = DEFAULT_LOOP_SAMPLES) -> IndexPair:
    elliptic, margin = check_uniform_ellipticity(spec)
    if not elliptic:
        raise NotElliptic(f"principal symbol is not uniformly elliptic (margin {margin:.3e})")
    grid = grid or fedosov.DEFAULT_RESOLUTION[0]
    route = "noether" if spec.base is Base.POINT else "fedosov"
    values = {side: _side_topological(spec, side, grid, loop_samples) for side in Side}
    return IndexPair(values[Side.MINUS], values[Side.PLUS], {"route": route})


def delta1_analytic(spec, radii=None, tol: float | None = None, gap: float = oracle.DEFAULT_GAP,
                    allow_large: bool = False, records: dict | None = None) -> IndexPair:
    """Finite-section index of each boundary operator (all orders kept).

    Per-side sweep records are stored in ``records`` when a dict is given.
    """
    defaults = DEFAULT_ANALYTIC[spec.base]
    radii = tuple(radii or defaults["radii"])
    tol = defaults["tol"] if tol is None else tol
    values, failures = {}, {}
    for side in Side:
        assembler = oracle.boundary_assembler(spec, side, full_order=True)
        try:
            recs = oracle.index_sweep(assembler, radii, tol, gap, allow_large=allow_large)
            if records is not None:
                records[side.value] = recs
            values[side] = oracle.stabilized_index(recs)
        except NumericalError as exc:
            failures[side.value] = exc
    if failures:
        raise SideFailure(failures, {s.value: v for s, v in values.items()})
    return IndexPair(values[Side.MINUS], values[Side.PLUS], {"route": "finite_section", "radii": radii, "tol": tol})


def verify_agreement(spec, config: VerifyConfig | None = None) -> dict:
    """Run both routes and report; failures become report content, never exceptions."""
    config = config or VerifyConfig()
    report = {
        "spec_hash": spec_hash(spec),
        "elliptic": None,
        "margin": None,
        "pairs": {"topological": None, "analytic": None},
        "agree": False,
        "diagnostics": {},
        "runtimes": {},
    }
    elliptic, margin = check_uniform_ellipticity(spec)
    report["elliptic"] = bool(elliptic)
    report["margin"] = float(margin)
    if not elliptic:
        report["diagnostics"]["error"] = {"type": "NotElliptic", "message": f"margin {margin:.3e}"}
        return report

    start = time.perf_counter()
    try:
        pair = delta1_topological(spec, config.grid, config.loop_samples)
        report["pairs"]["topological"] = list(pair)
    except CylIndexError as exc:
        report["diagnostics"]["topological"] = {"type": type(exc).__name__, "message": str(exc)}
    report["runtimes"]["topological"] = time.perf_counter() - start

    start = time.perf_counter()
    records: dict = {}
    try:
        pair = delta1_analytic(spec, config.radii, config.tol, config.gap, config.allow_large, records)
        report["pairs"]["analytic"] = list(pair)
    except SideFailure as exc:
        report["diagnostics"]["analytic"] = {
            side: {"type": type(e).__name__, "message": str(e)} for side, e in exc.failures.items()
        }
    except CylIndexError as exc:
        report["diagnostics"]["analytic"] = {"type": type(exc).__name__, "message": str(exc)}
    report["runtimes"]["analytic"] = time.perf_counter() - start
    report["diagnostics"]["sweeps"] = {side: [r.to_dict() for r in recs] for side, recs in records.items()}

    topo, ana = report["pairs"]["topological"], report["pairs"]["analytic"]
    report["agree"] = topo is not None and topo == ana
    return report
