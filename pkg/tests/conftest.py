import itertools
import sys

import numpy as np
import pytest

from cylindex.symbol_core import (
    Base,
    OperatorSpec,
    PeriodicFunction,
    SemiPeriodicCoefficient,
    TrigSymbol,
)


def random_periodic(rng, k, base, band=2, scale=1.0):
    coeffs = {}
    qs = range(-band, band + 1) if base is Base.CIRCLE else [0]
    for p in range(-band, band + 1):
        for q in qs:
            coeffs[(p, q)] = scale * (rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))) / (1 + p * p + q * q)
    return PeriodicFunction(k, coeffs, base)


def random_spec(rng, k=2, N=2, base=Base.CIRCLE, band=2):
    terms = {}
    for j in range(N + 1):
        for alpha in range(N + 1 - j):
            if base is Base.POINT and alpha:
                continue
            terms[(j, alpha)] = SemiPeriodicCoefficient(
                plus=random_periodic(rng, k, base, band), minus=random_periodic(rng, k, base, band)
            )
    return OperatorSpec(base, k, N, terms)


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


def random_near_identity(rng, k=2, eps=0.1, band=1):
    """I + H with H a random trigonometric polynomial in (theta, x, psi) of norm sum eps."""
    coeffs = {}
    rng_modes = range(-band, band + 1)
    for key in itertools.product(rng_modes, rng_modes, rng_modes):
        coeffs[key] = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    total = sum(np.linalg.norm(c, 2) for c in coeffs.values())
    coeffs = {key: c * eps / total for key, c in coeffs.items()}
    coeffs[(0, 0, 0)] = coeffs[(0, 0, 0)] + np.eye(k)
    return TrigSymbol(k, coeffs, Base.CIRCLE)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
