import json

import numpy as np
import pytest

from cylindex import models, spec_io
from cylindex.errors import SchemaError, ValidationError
from cylindex.symbol_core import Base, CospherePoint, Side, SymbolSpec, evaluate_principal_symbol

from conftest import random_spec


def _same_symbols(a, b, rng):
    for side in Side:
        for _ in range(4):
            th, x, psi = rng.uniform(0, 2 * np.pi, 3)
            if a.base is Base.POINT:
                pt = CospherePoint(th, 0.0, float(rng.choice([-1.0, 1.0])), 0.0)
            else:
                pt = CospherePoint(th, x, np.cos(psi), np.sin(psi))
            if isinstance(a, SymbolSpec):
                lhs, rhs = a.side(side).evaluate(pt.theta, pt.x, pt.tau, pt.xi), b.side(side).evaluate(
                    pt.theta, pt.x, pt.tau, pt.xi
                )
            else:
                lhs, rhs = evaluate_principal_symbol(a, side, pt), evaluate_principal_symbol(b, side, pt)
            np.testing.assert_array_equal(lhs, rhs)


@pytest.mark.parametrize(
    "factory",
    [
        models.calibration_spec,
        models.degree_one_symbol_spec,
        models.twisted_dirac_spec,
        lambda: models.lambda_operator(Base.POINT),
        lambda: models.dbar_spec(0.5),
    ],
)
def test_roundtrip(factory, rng):
    spec = factory()
    back = spec_io.loads(spec_io.dumps(spec))
    assert type(back) is type(spec)
    assert spec_io.spec_hash(back) == spec_io.spec_hash(spec)
    assert spec_io.dumps(back) == spec_io.dumps(spec)
    _same_symbols(spec, back, rng)


def test_random_roundtrip_and_file(rng, tmp_path):
    spec = random_spec(rng, k=3, N=2)
    path = tmp_path / "spec.json"
    spec_io.dump(spec, path)
    back = spec_io.load(path)
    assert spec_io.spec_hash(back) == spec_io.spec_hash(spec)
    _same_symbols(spec, back, rng)


def test_hash_ignores_insertion_order():
    a = models.dt_lambda(Base.CIRCLE) + models.dx_lambda({0: 1.0, 1: 0.5})
    b = models.dx_lambda({1: 0.5, 0: 1.0}) + models.dt_lambda(Base.CIRCLE)
    assert spec_io.spec_hash(a) == spec_io.spec_hash(b)
    assert spec_io.spec_hash(a) != spec_io.spec_hash(models.dt_lambda(Base.CIRCLE))


def test_point_base_q_optional():
    doc = {
        "base": "point",
        "k": 1,
        "N": 0,
        "terms": [{"j": 0, "alpha": 0, "plus": [{"p": 1, "re": [[1.0]], "im": [[0.0]]}], "minus": []}],
    }
    spec = spec_io.spec_from_dict(doc)
    assert spec.terms[(0, 0)].plus.coeffs[(1, 0)][0, 0] == 1.0


def test_unknown_key_reports_path():
    doc = json.loads(spec_io.dumps(models.calibration_spec()))
    doc["plus"][1]["bogus"] = 1
    with pytest.raises(SchemaError, match=r"\$\.plus\[1\]"):
        spec_io.spec_from_dict(doc)

    doc = json.loads(spec_io.dumps(models.twisted_dirac_spec()))
    doc["terms"][0]["plus"][0]["re"] = [[1.0]]
    with pytest.raises(SchemaError, match=r"\$\.terms\[0\]\.plus\[0\]\.re"):
        spec_io.spec_from_dict(doc)


def test_invalid_documents():
    with pytest.raises(SchemaError, match="line 2, column"):
        spec_io.loads('{"base": "point",\n "k": }')
    with pytest.raises(SchemaError):
        spec_io.loads('{"base": "sphere", "k": 1, "plus": [], "minus": []}')
    with pytest.raises(SchemaError):
        spec_io.loads('{"base": "point", "k": true, "plus": [], "minus": []}')
    # a term structure that violates the spec invariants (no top-order term)
    bad = {"base": "point", "k": 1, "N": 1, "terms": [{"j": 0, "alpha": 0, "plus": [], "minus": []}]}
    with pytest.raises(ValidationError):
        spec_io.spec_from_dict(bad)
