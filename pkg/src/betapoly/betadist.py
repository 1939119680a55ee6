"""Beta, beta-prime and uniform-sphere point distributions.

A :class:`Model` names one of three rotationally invariant laws on R^d:

* ``Family.BETA``: density ``c (1 - |x|^2)^beta`` on the open unit ball,
  ``beta > -1``;
* ``Family.BETA_PRIME``: density ``c (1 + |x|^2)^(-beta)`` on R^d,
  ``beta > d/2``;
* ``Family.SPHERE``: the uniform law on the unit sphere, the weak limit of
  the beta family as ``beta -> -1``.  It carries no parameter.

One-dimensional CDFs are closed-form incomplete beta functions; samplers
draw a uniform direction and an independent radius from its gamma-ratio
representation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .specfun import log_gamma_ratio, reg_inc_beta

__all__ = [
    "Family",
    "Model",
    "beta_model",
    "beta_prime_model",
    "sphere_model",
    "norm_const",
    "log_norm_const",
    "log_norm_const_ratio",
    "density",
    "cdf1",
    "slab1",
    "Side",
    "halfspace_content",
    "slab_content",
    "projected_model",
    "projected_line_param",
    "sample_point",
    "sample_points",
    "stream",
]


class Family(enum.Enum):
    BETA = "beta"
    BETA_PRIME = "betaprime"
    SPHERE = "sphere"


@dataclass(frozen=True)
class Model:
    family: Family
    dim: int
    beta: Optional[float] = None

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dimension must be an integer >= 1, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))
        if self.family is Family.SPHERE:
            if self.beta is not None:
                raise ValueError("the sphere model takes no beta parameter")
            return
        if self.beta is None:
            raise ValueError(f"{self.family.value} model needs a beta parameter")
        b = float(self.beta)
        object.__setattr__(self, "beta", b)
        if self.family is Family.BETA and not b > -1.0:
            raise ValueError(f"beta model requires beta > -1, got {b}")
        if self.family is Family.BETA_PRIME and not b > self.dim / 2.0:
            raise ValueError(
                f"beta-prime model in dimension {self.dim} requires beta > {self.dim / 2}, got {b}"
            )

    def __str__(self) -> str:
        if self.family is Family.SPHERE:
            return f"sphere(d={self.dim})"
        return f"{self.family.value}(d={self.dim}, beta={self.beta:g})"


def beta_model(d: int, beta: float) -> Model:
    return Model(Family.BETA, d, beta)


def beta_prime_model(d: int, beta: float) -> Model:
    return Model(Family.BETA_PRIME, d, beta)


def sphere_model(d: int) -> Model:
    return Model(Family.SPHERE, d)


def _require_density(model: Model) -> None:
    if model.family is Family.SPHERE:
        raise ValueError("the sphere model has no Lebesgue density")


def log_norm_const(model: Model) -> float:
    _require_density(model)
    d, b = model.dim, model.beta
    if model.family is Family.BETA:
        return log_gamma_ratio(d / 2 + b + 1, b + 1) - 0.5 * d * math.log(math.pi)
    return log_gamma_ratio(b, b - d / 2) - 0.5 * d * math.log(math.pi)


def norm_const(model: Model) -> float:
    """Normalizing constant of the beta or beta-prime density."""
    return math.exp(log_norm_const(model))


def log_norm_const_ratio(family: Family, d: int, beta: float) -> float:
    """log(c_{d,beta} / c_{d-1,beta}) for d >= 1.

    For the beta family this is finite at ``beta = -1`` for every ``d >= 2``
    even though the individual constants are not; the sphere limit of the
    facet formulas relies on that.
    """
    if family is Family.BETA:
        return log_gamma_ratio(d / 2 + beta + 1, (d - 1) / 2 + beta + 1) - 0.5 * math.log(math.pi)
    if family is Family.BETA_PRIME:
        return log_gamma_ratio(beta - (d - 1) / 2, beta - d / 2) - 0.5 * math.log(math.pi)
    raise ValueError("normalizing constants exist for beta and beta-prime only")


def density(model: Model, point) -> np.ndarray:
    """Density at ``point`` (shape ``(..., d)``); zero outside the ball for beta."""
    _require_density(model)
    x = np.asarray(point, dtype=float)
    if x.shape[-1] != model.dim:
        raise ValueError(f"expected points of dimension {model.dim}, got {x.shape[-1]}")
    r2 = np.sum(x * x, axis=-1)
    lc = log_norm_const(model)
    if model.family is Family.BETA:
        inside = r2 < 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.exp(lc + model.beta * np.log1p(-np.where(inside, r2, 0.0)))
        out = np.where(inside, val, 0.0)
    else:
        out = np.exp(lc - model.beta * np.log1p(r2))
    return out[()] if out.ndim == 0 else out


def _check_line_param(family: Family, beta: float) -> None:
    if family is Family.BETA and not beta > -1.0:
        raise ValueError(f"one-dimensional beta law requires beta > -1, got {beta}")
    if family is Family.BETA_PRIME and not beta > 0.5:
        raise ValueError(f"one-dimensional beta-prime law requires beta > 1/2, got {beta}")
    if family is Family.SPHERE:
        raise ValueError("use the projected beta law for the sphere model")


def cdf1(family: Family, beta: float, h):
    """CDF of the one-dimensional beta (on [-1, 1]) or beta-prime (on R) law.

    Beta: ``I_{(1+h)/2}(beta+1, beta+1)``, clamped outside [-1, 1].
    Beta-prime: ``(1 + sign(h) I_{h^2/(1+h^2)}(1/2, beta-1/2)) / 2``.
    """
    _check_line_param(family, beta)
    h = np.asarray(h, dtype=float)
    if family is Family.BETA:
        hc = np.clip(h, -1.0, 1.0)
        out = reg_inc_beta(beta + 1.0, beta + 1.0, 0.5 * (1.0 + hc), 0.5 * (1.0 - hc))
    else:
        h2 = h * h
        with np.errstate(over="ignore", invalid="ignore"):
            inv = 1.0 / (1.0 + h2)
            frac = np.where(np.isinf(h), 1.0, h2 * inv)
        tail = reg_inc_beta(0.5, beta - 0.5, frac, inv)
        out = 0.5 * (1.0 + np.sign(h) * tail)
    return float(out) if np.ndim(out) == 0 else out


def slab1(family: Family, beta: float, h):
    """P(|T| <= h) for T with the one-dimensional law; ``h >= 0``.

    Evaluated from the symmetric incomplete-beta form directly instead of
    ``F(h) - F(-h)``, which cancels badly for small slabs.
    """
    _check_line_param(family, beta)
    h = np.abs(np.asarray(h, dtype=float))
    if family is Family.BETA:
        hc = np.minimum(h, 1.0)
        out = reg_inc_beta(0.5, beta + 1.0, hc * hc, (1.0 - hc) * (1.0 + hc))
    else:
        h2 = h * h
        with np.errstate(over="ignore", invalid="ignore"):
            inv = 1.0 / (1.0 + h2)
            frac = np.where(np.isinf(h), 1.0, h2 * inv)
        out = reg_inc_beta(0.5, beta - 0.5, frac, inv)
    return float(out) if np.ndim(out) == 0 else out


def projected_line_param(model: Model) -> tuple[Family, float]:
    """Family and parameter of the law of one coordinate of a point."""
    d = model.dim
    if model.family is Family.BETA:
        return Family.BETA, model.beta + (d - 1) / 2
    if model.family is Family.BETA_PRIME:
        return Family.BETA_PRIME, model.beta - (d - 1) / 2
    if d < 2:
        raise ValueError("the sphere model needs d >= 2 for a projected density")
    return Family.BETA, (d - 3) / 2


class Side(enum.Enum):
    BELOW = "below"
    ABOVE = "above"


def halfspace_content(model: Model, h, side: Side = Side.BELOW):
    """Probability that a point falls in {x_d <= h} (BELOW) or {x_d >= h} (ABOVE)."""
    fam, b = projected_line_param(model)
    below = cdf1(fam, b, h)
    return below if side is Side.BELOW else 1.0 - below


def slab_content(model: Model, h):
    """Probability that a point falls in the slab {|x_d| <= h}, ``h >= 0``."""
    if np.any(np.asarray(h) < 0):
        raise ValueError("slab half-width must be non-negative")
    fam, b = projected_line_param(model)
    return slab1(fam, b, h)


def projected_model(model: Model, k: int) -> Model:
    """Law of the orthogonal projection of a point onto a k-dimensional subspace."""
    d = model.dim
    if int(k) != k or not 1 <= k <= d:
        raise ValueError(f"projection dimension must satisfy 1 <= k <= {d}, got {k!r}")
    if k == d:
        return model
    shift = (d - k) / 2
    if model.family is Family.BETA:
        return Model(Family.BETA, k, model.beta + shift)
    if model.family is Family.BETA_PRIME:
        nb = model.beta - shift
        if not nb > k / 2:
            raise ValueError(
                f"projected beta-prime parameter {nb} must exceed {k / 2} in dimension {k}"
            )
        return Model(Family.BETA_PRIME, k, nb)
    return Model(Family.BETA, k, shift - 1.0)


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Random stream ``index`` derived from a master seed.

    Stream i is ``PCG64(SeedSequence(seed, spawn_key=(i,)))``, which is what
    ``SeedSequence(seed).spawn`` would hand out as its i-th child.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _directions(rng: np.random.Generator, size: int, d: int) -> np.ndarray:
    g = rng.standard_normal((size, d))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    while np.any(norms == 0.0):  # pragma: no cover - probability zero
        bad = norms[:, 0] == 0.0
        g[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(g, axis=1, keepdims=True)
    return g / norms


def sample_points(model: Model, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` i.i.d. points, shape ``(size, d)``.

    Beta: ``r^2 = G1/(G1+G2)`` with ``G1 ~ Gamma(d/2)``, ``G2 ~ Gamma(beta+1)``,
    i.e. ``r^2 ~ Beta(d/2, beta+1)``.  Beta-prime: ``r^2 = G1/G2`` with
    ``G2 ~ Gamma(beta-d/2)``, i.e. ``r^2/(1+r^2) ~ Beta(d/2, beta-d/2)``.
    """
    d = model.dim
    u = _directions(rng, size, d)
    if model.family is Family.SPHERE:
        return u
    g1 = rng.standard_gamma(d / 2, size)
    if model.family is Family.BETA:
        g2 = rng.standard_gamma(model.beta + 1.0, size)
        r = np.sqrt(g1 / (g1 + g2))
    else:
        g2 = rng.standard_gamma(model.beta - d / 2, size)
        r = np.sqrt(g1 / g2)
    return u * r[:, None]


def sample_point(model: Model, rng: np.random.Generator) -> np.ndarray:
    return sample_points(model, 1, rng)[0]
