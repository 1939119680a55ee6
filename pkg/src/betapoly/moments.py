"""Moments of random simplex and parallelotope volumes.

``simplex_moment`` gives E[Delta_d^kappa] for the simplex on d+1 i.i.d.
points of R^d, ``parallelotope_moment`` gives E[Nabla_d^kappa] for the
parallelotope spanned by d i.i.d. points, both for the beta and beta-prime
families and real order ``kappa >= 0``.  The beta-prime simplex formula
carries ``-(d/2) kappa`` in its leading gamma argument; the ``+`` sign found
in older statements is a known misprint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .betadist import Family
from .specfun import log_gamma_ratio

__all__ = [
    "MomentQuery",
    "simplex_moment",
    "parallelotope_moment",
    "log_simplex_moment",
    "log_parallelotope_moment",
]


@dataclass(frozen=True)
class MomentQuery:
    family: Family
    dim: int
    beta: float
    order: float

    def __post_init__(self):
        if self.family not in (Family.BETA, Family.BETA_PRIME):
            raise ValueError("volume moments are defined for the beta and beta-prime families")
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dimension must be an integer >= 1, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))
        d, b, k = self.dim, float(self.beta), float(self.order)
        if not k >= 0.0 or not math.isfinite(k):
            raise ValueError(f"moment order must be a finite real >= 0, got {self.order!r}")
        if self.family is Family.BETA and not b > -1.0:
            raise ValueError(f"beta family requires beta > -1, got {b}")
        if self.family is Family.BETA_PRIME:
            if not b > d / 2:
                raise ValueError(f"beta-prime family in dimension {d} needs beta > {d / 2}, got {b}")
            if not k < 2 * b - d:
                raise ValueError(
                    f"beta-prime moment of order {k} diverges; need order < 2 beta - d = {2 * b - d}"
                )


def _log_gamma_product(d: int, kappa: float, shift) -> float:
    # sum over i = 1..d of log Gamma((shift(i) + kappa)/2) / Gamma(shift(i)/2)
    return math.fsum(log_gamma_ratio((shift(i) + kappa) / 2, shift(i) / 2) for i in range(1, d + 1))


def log_simplex_moment(family: Family, d: int, beta: float, kappa: float) -> float:
    """log E[Delta_d^kappa] without range checks.

    ``d = 0`` (a single point) gives 0.  For the beta family the expression
    stays finite at ``beta = -1`` whenever its gamma arguments are positive,
    which the sphere limit of the facet formulas uses.
    """
    if d == 0:
        return 0.0
    if kappa == 0.0:
        return 0.0
    lead = -kappa * math.lgamma(d + 1)
    prod = _log_gamma_product(d, kappa, lambda i: i)
    if family is Family.BETA:
        g1 = log_gamma_ratio((d + 1) / 2 * (2 * beta + d + kappa) + 1, (d + 1) / 2 * (2 * beta + d) + d * kappa / 2 + 1)
        g2 = log_gamma_ratio(d / 2 + beta + 1, (d + kappa) / 2 + beta + 1)
    elif family is Family.BETA_PRIME:
        g1 = log_gamma_ratio((beta - d / 2) * (d + 1) - d * kappa / 2, (beta - (d + kappa) / 2) * (d + 1))
        g2 = log_gamma_ratio(beta - (d + kappa) / 2, beta - d / 2)
    else:
        raise ValueError("volume moments are defined for the beta and beta-prime families")
    return lead + g1 + (d + 1) * g2 + prod


def log_parallelotope_moment(family: Family, d: int, beta: float, kappa: float) -> float:
    """log E[Nabla_d^kappa] without range checks."""
    if d == 0 or kappa == 0.0:
        return 0.0
    prod = _log_gamma_product(d, kappa, lambda i: d - i + 1)
    if family is Family.BETA:
        g = log_gamma_ratio(beta + d / 2 + 1, beta + (d + kappa) / 2 + 1)
    elif family is Family.BETA_PRIME:
        g = log_gamma_ratio(beta - (d + kappa) / 2, beta - d / 2)
    else:
        raise ValueError("volume moments are defined for the beta and beta-prime families")
    return d * g + prod


def simplex_moment(q: MomentQuery) -> float:
    """E[Delta_d^kappa] for the simplex on d+1 i.i.d. points."""
    return math.exp(log_simplex_moment(q.family, q.dim, q.beta, q.order))


def parallelotope_moment(q: MomentQuery) -> float:
    """E[Nabla_d^kappa] for the parallelotope spanned by d i.i.d. points."""
    return math.exp(log_parallelotope_moment(q.family, q.dim, q.beta, q.order))
