"""Expected functionals of random beta, beta-prime and spherical polytopes.

Exact values come from one-dimensional integral representations evaluated
by adaptive quadrature; Monte Carlo estimates on explicit convex hulls serve
as an independent check.

>>> from betapoly import beta_model, expected_volume, PolytopeKind
>>> round(expected_volume(beta_model(3, 0.0), PolytopeKind.P, 4), 12)
0.05272603055
"""

from .betadist import Family, Model, beta_model, beta_prime_model, projected_model, sample_points, sphere_model
from .expectations import (
    ExactValue,
    FunctionalKind,
    FunctionalSpec,
    ParameterRangeError,
    PolytopeKind,
    evaluate,
    expected_facet_count,
    expected_intrinsic_volume,
    expected_mean_width,
    expected_surface_area,
    expected_vertex_count_ball,
    expected_volume,
    halfsphere_expected_facets,
    t_functional,
    volume_via_T,
)
from .hull import PointCloud, convex_hull
from .mc import Estimate, estimate, zscore
from .moments import MomentQuery, parallelotope_moment, simplex_moment

__version__ = "0.1.0"

__all__ = [
    "Family",
    "Model",
    "beta_model",
    "beta_prime_model",
    "sphere_model",
    "projected_model",
    "sample_points",
    "ExactValue",
    "FunctionalKind",
    "FunctionalSpec",
    "ParameterRangeError",
    "PolytopeKind",
    "evaluate",
    "expected_volume",
    "expected_surface_area",
    "expected_mean_width",
    "expected_intrinsic_volume",
    "expected_facet_count",
    "expected_vertex_count_ball",
    "halfsphere_expected_facets",
    "t_functional",
    "volume_via_T",
    "PointCloud",
    "convex_hull",
    "Estimate",
    "estimate",
    "zscore",
    "MomentQuery",
    "simplex_moment",
    "parallelotope_moment",
]
