"""How beta polytopes turn into spherical ones as beta -> -1.

The expected volume is smooth in beta at -1, so the relative distance to the
sphere value shrinks linearly with beta + 1 (slope about 1.02 for n = 8 in
R^3).  Three values close to the limit extrapolate to it almost exactly.
"""
import numpy as np

from betapoly.betadist import beta_model, sphere_model
from betapoly.expectations import PolytopeKind, expected_facet_count, expected_volume

P = PolytopeKind.P
n = 8
limit = expected_volume(sphere_model(3), P, n)
print(f"sphere: E Vol = {limit:.15f}")

eps = np.array([0.3, 0.1, 0.03, 0.01, 0.003, 0.001])
vals = np.array([expected_volume(beta_model(3, -1 + e), P, n) for e in eps])
print(f"\n{'beta + 1':>9} {'E Vol':>18} {'relative gap':>13} {'gap / (beta+1)':>15}")
for e, v in zip(eps, vals):
    gap = abs(v - limit) / limit
    print(f"{e:9.3f} {v:18.15f} {gap:13.4e} {gap / e:15.5f}")

fit = np.polyfit(eps[-3:], vals[-3:], 2)
print(f"\nquadratic extrapolation to beta = -1: {np.polyval(fit, 0.0):.15f}")

# facet counts approach 2(n - 2), which holds surely on the sphere
for e in (1e-1, 1e-3, 1e-6):
    print(f"beta = -1 + {e:g}: E facets = {expected_facet_count(beta_model(3, -1 + e), P, n):.10f} (sphere {2 * (n - 2)})")
