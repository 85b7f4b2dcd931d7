"""JSON documents for operator specs and symbol-level specs.

Operator spec::

    {"base": "point"|"circle", "k": int, "N": int,
     "terms": [{"j": int, "alpha": int,
                "plus":  [{"p": int, "q": int, "re": [[...]], "im": [[...]]}, ...],
                "minus": [...]}]}

Symbol spec (trigonometric polynomial in theta, x and the fiber angle psi)::

    {"base": "point"|"circle", "k": int,
     "plus":  [{"p": int, "q": int, "r": int, "re": [[...]], "im": [[...]]}, ...],
     "minus": [...]}

Matrices are row-major k x k real arrays.  Unknown keys are rejected.  For
a point base ``q`` may be omitted (it must be 0 anyway).
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .errors import SchemaError, ValidationError
from .symbol_core import (
    Base,
    OperatorSpec,
    PeriodicFunction,
    SemiPeriodicCoefficient,
    SymbolSpec,
    TrigSymbol,
)


def _fail(path: str, msg: str):
    raise SchemaError(f"{path}: {msg}")


def _keys(obj, path, required, optional=()):
    if not isinstance(obj, dict):
        _fail(path, f"expected an object, got {type(obj).__name__}")
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        _fail(path, f"unknown field(s) {unknown}")
    missing = [key for key in required if key not in obj]
    if missing:
        _fail(path, f"missing field(s) {missing}")


def _int(obj, key, path, minimum=None):
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(f"{path}.{key}", f"expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        _fail(f"{path}.{key}", f"must be >= {minimum}, got {v}")
    return v


def _matrix(entry, path, k):
    parts = []
    for key in ("re", "im"):
        try:
            arr = np.asarray(entry[key], dtype=float)
        except (TypeError, ValueError):
            _fail(f"{path}.{key}", "expected a numeric k x k array")
        if arr.shape != (k, k):
            _fail(f"{path}.{key}", f"expected shape ({k}, {k}), got {arr.shape}")
        parts.append(arr)
    return parts[0] + 1j * parts[1]


def _base(doc, path):
    b = doc["base"]
    if b not in ("point", "circle"):
        _fail(f"{path}.base", f"expected 'point' or 'circle', got {b!r}")
    return Base(b)


def _modes(entries, path, k, base, with_r):
    if not isinstance(entries, list):
        _fail(path, "expected a list of Fourier modes")
    out = {}
    keys = ["p", "q", "r", "re", "im"] if with_r else ["p", "q", "re", "im"]
    for i, e in enumerate(entries):
        ep = f"{path}[{i}]"
        optional = ("q",) if base is Base.POINT else ()
        _keys(e, ep, [key for key in keys if key not in optional], optional)
        p = _int(e, "p", ep)
        q = _int(e, "q", ep) if "q" in e else 0
        if base is Base.POINT and q != 0:
            _fail(f"{ep}.q", "must be 0 for a point base")
        key = (p, q, _int(e, "r", ep)) if with_r else (p, q)
        if key in out:
            _fail(ep, f"duplicate mode {key}")
        out[key] = _matrix(e, ep, k)
    return out


def spec_from_dict(doc) -> OperatorSpec | SymbolSpec:
    if isinstance(doc, dict) and "terms" in doc:
        return operator_spec_from_dict(doc)
    return symbol_spec_from_dict(doc)


def operator_spec_from_dict(doc) -> OperatorSpec:
    _keys(doc, "$", ["base", "k", "N", "terms"])
    base = _base(doc, "$")
    k = _int(doc, "k", "$", 1)
    N = _int(doc, "N", "$", 0)
    if not isinstance(doc["terms"], list):
        _fail("$.terms", "expected a list")
    terms = {}
    for i, t in enumerate(doc["terms"]):
        tp = f"$.terms[{i}]"
        _keys(t, tp, ["j", "alpha", "plus", "minus"])
        j = _int(t, "j", tp, 0)
        alpha = _int(t, "alpha", tp, 0)
        if (j, alpha) in terms:
            _fail(tp, f"duplicate term (j, alpha) = {(j, alpha)}")
        plus = PeriodicFunction(k, _modes(t["plus"], f"{tp}.plus", k, base, False), base)
        minus = PeriodicFunction(k, _modes(t["minus"], f"{tp}.minus", k, base, False), base)
        terms[(j, alpha)] = SemiPeriodicCoefficient(plus=plus, minus=minus)
    try:
        return OperatorSpec(base, k, N, terms)
    except ValidationError as exc:
        raise SchemaError(f"$: {exc}") from exc


def symbol_spec_from_dict(doc) -> SymbolSpec:
    _keys(doc, "$", ["base", "k", "plus", "minus"])
    base = _base(doc, "$")
    k = _int(doc, "k", "$", 1)
    plus = TrigSymbol(k, _modes(doc["plus"], "$.plus", k, base, True), base)
    minus = TrigSymbol(k, _modes(doc["minus"], "$.minus", k, base, True), base)
    return SymbolSpec(base, k, plus=plus, minus=minus)


def _mode_entries(coeffs: dict, base: Base, names) -> list:
    out = []
    for key, c in sorted(coeffs.items()):
        entry = dict(zip(names, (int(v) for v in key)))
        entry["re"] = np.real(c).tolist()
        entry["im"] = np.imag(c).tolist()
        out.append(entry)
    return out


def spec_to_dict(spec: OperatorSpec | SymbolSpec) -> dict:
    if isinstance(spec, SymbolSpec):
        names = ("p", "q", "r")
        return {
            "base": spec.base.value,
            "k": spec.k,
            "plus": _mode_entries(spec.plus.coeffs, spec.base, names),
            "minus": _mode_entries(spec.minus.coeffs, spec.base, names),
        }
    terms = []
    for (j, alpha), coef in sorted(spec.terms.items()):
        terms.append(
            {
                "j": j,
                "alpha": alpha,
                "plus": _mode_entries(coef.plus.coeffs, spec.base, ("p", "q")),
                "minus": _mode_entries(coef.minus.coeffs, spec.base, ("p", "q")),
            }
        )
    return {"base": spec.base.value, "k": spec.k, "N": spec.N, "terms": terms}


def loads(text: str) -> OperatorSpec | SymbolSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return spec_from_dict(doc)


def load(path) -> OperatorSpec | SymbolSpec:
    return loads(Path(path).read_text())


def dumps(spec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2, sort_keys=True)


def dump(spec, path) -> None:
    Path(path).write_text(dumps(spec) + "\n")


def spec_hash(spec) -> str:
    canonical = json.dumps(spec_to_dict(spec), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()
