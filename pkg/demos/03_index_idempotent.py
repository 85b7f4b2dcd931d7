"""The index idempotent p = [[2ab - (ab)^2, a(2 - ba)(1 - ba)], [(1 - ba)b, (1 - ba)^2]] and its trace defect.

For exact inverses p is diag(1, 0).  For a parametrix with finite-rank
defects, trace(p) minus the size of the first block is minus the index.
"""

from fractions import Fraction

import numpy as np

from cylindex import oracle

a = np.array([[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]], dtype=object)
b = np.array([[Fraction(1), Fraction(-1)], [Fraction(-1), Fraction(2)]], dtype=object)
print(oracle.index_idempotent(a, b))

# the isometric shift C^n -> C^{n+1}: injective, one missing dimension
n = 6
s = oracle.shift_matrix(n, 1)
p = oracle.index_idempotent(s, s.T)
print("||p^2 - p|| =", np.linalg.norm(p @ p - p))
print("defect:", oracle.idempotent_defect_trace(p, n + 1))

s2 = oracle.shift_matrix(n, 2)
print("squared shift defect:", oracle.idempotent_defect_trace(oracle.index_idempotent(s2, s2.T), n + 2))

# square truncations always give 0: every square matrix has index 0
sq = np.eye(n, k=-1)
print("square truncated shift:", oracle.idempotent_defect_trace(oracle.index_idempotent(sq, sq.T), n))
