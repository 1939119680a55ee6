"""Exact expectations against Monte Carlo estimates for a handful of models.

The beta-prime rows with kind Q are the interesting ones: their constant was
settled by sampling, so the z-scores here are the evidence.
"""
from betapoly.betadist import beta_model, beta_prime_model, sphere_model
from betapoly.expectations import FunctionalSpec, PolytopeKind, evaluate
from betapoly.mc import estimate

P, S, Q = PolytopeKind.P, PolytopeKind.S, PolytopeKind.Q
volume = FunctionalSpec.volume()
runs = [
    (volume, beta_model(2, 0.0), P, 5),
    (volume, beta_model(3, 1.5), S, 6),
    (volume, sphere_model(3), P, 6),
    (volume, beta_prime_model(2, 2.5), Q, 4),
    (volume, beta_prime_model(3, 3.5), Q, 5),
    (FunctionalSpec.intrinsic(1), beta_model(3, 0.0), P, 6),
    (FunctionalSpec.T(1, 2), beta_prime_model(3, 4.0), S, 5),
]
samples = 50_000

print(f"{'functional':<10} {'model':<28} kind   n   {'exact':>12} {'monte carlo':>12} {'z':>6}")
for spec, model, kind, n in runs:
    exact = evaluate(spec, model, kind, n).value
    est = estimate(spec, model, kind, n, samples, seed=1)
    z = (est.mean - exact) / est.stderr
    print(f"{spec.label():<10} {str(model):<28} {kind.value:>4} {n:>3}   {exact:12.8f} {est.mean:12.8f} {z:+6.2f}")
