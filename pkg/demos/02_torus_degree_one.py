"""A 2x2 symbol on S*(T^2) = T^2 x S^1 with index -1.

d = (sin theta, sin x, xi, 2 + cos theta + cos x + tau) never vanishes and
wraps the 3-torus once around S^3.  The quaternion a = d_3 + i d.sigma is
its matrix form.  Takes about half a minute on one core.
"""

import numpy as np

from cylindex import fedosov, models, oracle

# odd Chern integral of the normalized SU(2) map, and of the raw quaternion
su2 = fedosov.SymbolGrid3.from_function(models.su2_degree_one)
print("F(su2) =", fedosov.odd_chern_integral(su2))
sym = models.lattice_degree_one_symbol()
print("F(raw) =", fedosov.odd_chern_integral(fedosov.SymbolGrid3.from_symbol(sym)))

# masses across the singular values +-1, +-3 change the degree
for mass in (-4.0, -2.0, 0.0, 2.0, 4.0):
    g = fedosov.SymbolGrid3.from_symbol(models.lattice_degree_one_symbol(mass), (24, 24, 24))
    print(f"mass {mass:+.0f}: index {fedosov.fedosov_index(g)}")

# scalars never carry index on the torus; the integrand is identically zero
scalar = fedosov.SymbolGrid3.from_function(lambda th, x, tau, xi: np.exp(1j * th) * (3 + np.cos(x) + tau), (16, 16, 16))
print("max |integrand| of a scalar:", np.abs(fedosov.chern_integrand(scalar)).max())

# Kohn-Nirenberg quantization of the raw quaternion, truncated at radii 12 and 16;
# the cokernel vector is only exponentially small, hence tol 1e-3
def assembler(w):
    return oracle.quantize_symbol(sym, w)

recs = oracle.index_sweep(assembler, [12, 16], tol=1e-3, dim=2)
for rec in recs:
    print(rec.radius, rec.dim, "coker sv", f"{rec.smallest_adjoint[0]:.2e}", "next", f"{rec.smallest_adjoint[1]:.3f}")
print("oracle index:", oracle.stabilized_index(recs))
