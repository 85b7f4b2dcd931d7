"""Winding numbers, the Noether difference, and the finite-section oracle on a point base.

The cylinder R x {pt} has boundary symbols that are loops on the circle, one
at each end of the fiber (tau = -1 and tau = +1).  Here the plus end carries
1 on the tau = -1 copy and z on the tau = +1 copy: a Toeplitz-type operator.
"""

import numpy as np

from cylindex import models, oracle, pipeline
from cylindex.symbol_core import Side
from cylindex.winding import LoopSample, noether_index, winding_number

# loops z^n on 64 samples
for n in (-3, 0, 2):
    loop = LoopSample.from_function(lambda th, n=n: np.exp(1j * n * th), 64)
    print(f"wind(z^{n}) =", winding_number(loop))

one = LoopSample(np.ones(64, dtype=complex))
z = LoopSample.from_function(lambda th: np.exp(1j * th), 64)
print("noether(1, z) =", noether_index(one, z))  # wind(minus copy) - wind(plus copy)

# the same operator as a matrix: identity on negative modes, shift on the rest
spec = models.calibration_spec()
asm = oracle.boundary_assembler(spec, Side.PLUS)
print(np.round(asm(oracle.TruncationWindow(3, 1)).matrix.real, 3))

# tall finite sections, two radii; ker/coker must agree across both
for rec in oracle.index_sweep(asm, [16, 32, 64]):
    print(rec.radius, rec.dim, "ker", rec.ker, "coker", rec.coker, "smallest adj sv", f"{rec.smallest_adjoint[0]:.2e}")
print("oracle index:", oracle.numerical_index(asm, [32, 64]))

# the full pair (ind A-, ind A+) from both routes
print("topological:", pipeline.delta1_topological(spec).as_tuple())
print("analytic:   ", pipeline.delta1_analytic(spec).as_tuple())
