"""Command-line front end.

    cylindex check     --input spec.json
    cylindex index     --input spec.json [--grid 48]
    cylindex oracle    --input spec.json [--radii 12,16] [--tol 1e-3]
    cylindex verify    --input spec.json
    cylindex calibrate
    cylindex svplot    --input spec.json --side plus --out sweep.csv
    cylindex fedosov   --input grid.json

Exit status: 0 success, 2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import fedosov, models, oracle, pipeline, spec_io
from .errors import NumericalError, ValidationError
from .symbol_core import Side, check_total_fredholm, check_uniform_ellipticity

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3
COMMANDS = ("check", "index", "oracle", "verify", "calibrate", "svplot", "fedosov")
CSV_HEADER = ["radius", "dim", "s_max", "s1", "s2", "s3", "s4", "s5", "ker", "coker"]


@dataclass
class RunConfig:
    command: str
    input: Path | None = None
    out: Path | None = None
    format: str = "text"
    grid: int | None = None
    radii: tuple | None = None
    tol: float | None = None
    allow_large: bool = False
    side: str = "plus"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.tol is not None and self.tol <= 0:
            raise ValidationError("tolerance must be positive")
        if self.grid is not None and self.grid < 16:
            raise ValidationError("grid resolution must be >= 16")
        if self.format not in ("text", "json"):
            raise ValidationError(f"unknown output format {self.format!r}")


def _need_input(cfg: RunConfig):
    if cfg.input is None:
        raise ValidationError(f"'{cfg.command}' needs --input")
    return spec_io.load(cfg.input)


def _cmd_check(cfg):
    spec = _need_input(cfg)
    elliptic, margin = check_uniform_ellipticity(spec)
    fredholm = check_total_fredholm(spec, radii=cfg.radii, tol=cfg.tol or 1e-6) if elliptic else False
    return {"spec_hash": spec_io.spec_hash(spec), "elliptic": bool(elliptic), "margin": margin,
            "fredholm": bool(fredholm)}


def _cmd_index(cfg):
    spec = _need_input(cfg)
    pair = pipeline.delta1_topological(spec, cfg.grid)
    return {"spec_hash": spec_io.spec_hash(spec), "route": pair.provenance["route"], "delta1": list(pair)}


def _cmd_oracle(cfg):
    spec = _need_input(cfg)
    records: dict = {}
    pair = pipeline.delta1_analytic(spec, cfg.radii, cfg.tol, allow_large=cfg.allow_large, records=records)
    return {
        "spec_hash": spec_io.spec_hash(spec),
        "route": "finite_section",
        "delta1": list(pair),
        "sweeps": {side: [r.to_dict() for r in recs] for side, recs in records.items()},
    }


def _cmd_verify(cfg):
    spec = _need_input(cfg)
    config = pipeline.VerifyConfig(radii=cfg.radii, tol=cfg.tol, allow_large=cfg.allow_large)
    if cfg.grid:
        config.grid = cfg.grid
    report = pipeline.verify_agreement(spec, config)
    runtimes = report.pop("runtimes")
    if cfg.format == "text":
        report["_runtimes"] = runtimes
    if not report["elliptic"]:
        raise _ReportError(report, EXIT_VALIDATION)
    if not report["agree"]:
        raise _ReportError(report, EXIT_NUMERICAL)
    return report


def _cmd_calibrate(cfg):
    toeplitz = models.calibration_spec()
    t_topo = pipeline.delta1_topological(toeplitz)
    t_ana = pipeline.delta1_analytic(toeplitz)
    su2 = models.degree_one_symbol_spec("plus")
    s_topo = pipeline.delta1_topological(su2, cfg.grid)
    s_ana = pipeline.delta1_analytic(su2)
    return {
        "conventions": {
            "pair_order": "(ind A-, ind A+)",
            "noether": "ind = wind(f at tau=-1) - wind(f at tau=+1)",
            "fedosov_constant": "-1/(24 pi^2)",
            "orientation": "dtheta ^ dx ^ dpsi, (tau, xi) = (cos psi, sin psi)",
            "quantization": "Kohn-Nirenberg, fiber direction (m, n)/|(m, n)|, origin -> (1, 0)",
        },
        "toeplitz": {"topological": list(t_topo), "analytic": list(t_ana), "expected": [0, -1]},
        "su2_degree_one": {"topological": list(s_topo), "analytic": list(s_ana), "expected": [0, -1]},
        "agree": t_topo == t_ana and s_topo == s_ana,
    }


def _cmd_svplot(cfg):
    spec = _need_input(cfg)
    side = Side(cfg.side)
    defaults = pipeline.DEFAULT_ANALYTIC[spec.base]
    radii = cfg.radii or defaults["radii"]
    tol = cfg.tol if cfg.tol is not None else defaults["tol"]
    recs = oracle.index_sweep(oracle.boundary_assembler(spec, side), radii, tol, allow_large=cfg.allow_large)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in recs:
        small = (r.smallest + [float("nan")] * 5)[:5]
        writer.writerow([r.radius, r.dim, repr(r.s_max), *map(repr, small), r.ker, r.coker])
    return buf.getvalue()


def _cmd_fedosov(cfg):
    if cfg.input is None:
        raise ValidationError("'fedosov' needs --input")
    grid = fedosov.SymbolGrid3.load(cfg.input)
    value = fedosov.odd_chern_integral(grid)
    return {"resolution": list(grid.resolution), "k": grid.k, "integral": value,
            "index": fedosov.fedosov_index(grid)}


class _ReportError(Exception):
    def __init__(self, report, code):
        self.report = report
        self.code = code


HANDLERS = {
    "check": _cmd_check,
    "index": _cmd_index,
    "oracle": _cmd_oracle,
    "verify": _cmd_verify,
    "calibrate": _cmd_calibrate,
    "svplot": _cmd_svplot,
    "fedosov": _cmd_fedosov,
}


def _render(result, fmt: str) -> str:
    if isinstance(result, str):
        return result
    if fmt == "json":
        return json.dumps(result, indent=2, sort_keys=True) + "\n"
    lines = []

    def walk(obj, prefix=""):
        if isinstance(obj, dict):
            for key in sorted(obj):
                walk(obj[key], f"{prefix}{key}.")
        else:
            lines.append(f"{prefix[:-1]}: {obj}")

    walk(result)
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    code = EXIT_OK
    try:
        result = HANDLERS[cfg.command](cfg)
    except _ReportError as exc:
        result, code = exc.report, exc.code
    except ValidationError as exc:
        result, code = {"error": type(exc).__name__, "message": str(exc)}, EXIT_VALIDATION
    except NumericalError as exc:
        result, code = {"error": type(exc).__name__, "message": str(exc)}, EXIT_NUMERICAL
    text = _render(result, cfg.format)
    if cfg.out is not None:
        Path(cfg.out).write_text(text)
    else:
        stdout.write(text)
    return code


def _radii(text: str) -> tuple:
    try:
        radii = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if len(radii) < 2:
        raise argparse.ArgumentTypeError("need at least two radii")
    return radii


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cylindex", description=__doc__.split("\n\n")[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", type=Path)
    parser.add_argument("--out", type=Path)
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--grid", type=int, help="resolution per axis for torus quadrature")
    parser.add_argument("--radii", type=_radii, help="truncation radii, e.g. 12,16")
    parser.add_argument("--tol", type=float, help="relative kernel tolerance")
    parser.add_argument("--allow-large", action="store_true", help="lift the dense-SVD dimension cap")
    parser.add_argument("--side", choices=("minus", "plus"), default="plus", help="end used by svplot")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(**vars(args))
    except ValidationError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
