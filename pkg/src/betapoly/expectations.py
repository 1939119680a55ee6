"""Exact expected functionals of random beta, beta-prime and spherical polytopes.

Three hulls are built from n i.i.d. points X_1..X_n of a :class:`Model`:

* ``P``: conv(X_1, ..., X_n);
* ``S``: conv(+-X_1, ..., +-X_n);
* ``Q``: conv(0, X_1, ..., X_n).

Every expectation reduces to a one-dimensional integral of a power of the
height density times a power of the one-dimensional CDF (or slab content)
of the projected law.  Two families of such integrals are implemented:

* the volume integrals, constants ``A`` and ``D``, exponent ``q``;
* the T-functionals ``sum over facets eta^a vol_{d-1}^b``, constants ``C``
  and ``D_T``.

Surface area, mean width and the intrinsic volumes are volumes of projected
models (Kubota).

Numerics: on the ball the integrals are taken in ``u = 1 - |h|`` so that the
integrable endpoint singularities sit at u = 0 where floating point is dense,
and the CDF powers are formed from the small tail ``1 - F`` which the
incomplete beta delivers to full relative accuracy.  On R the half line is
integrated through the ``tan`` map of :mod:`betapoly.quad`.  The log of the
constant in front is folded into the integrand so that the quadrature
tolerance applies to the final expectation, not to a tiny raw integral.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .betadist import Family, Model, log_norm_const_ratio, projected_model
from .moments import log_parallelotope_moment, log_simplex_moment
from .quad import DEFAULT_TOL, QuadResult, integrate_finite, integrate_half_line
from .specfun import ball_volume, log_binom, log_gamma_ratio, reg_inc_beta

__all__ = [
    "PolytopeKind",
    "FunctionalKind",
    "FunctionalSpec",
    "FormulaConstants",
    "ExactValue",
    "ParameterRangeError",
    "formula_constants",
    "evaluate",
    "t_functional",
    "expected_volume",
    "expected_intrinsic_volume",
    "expected_surface_area",
    "expected_mean_width",
    "expected_facet_count",
    "expected_vertex_count_ball",
    "halfsphere_expected_facets",
    "volume_via_T",
    "gaussian_limit_volume",
]

_LOG2 = math.log(2.0)
_LOGPI = math.log(math.pi)
_LARGE_N = 200
_LARGE_N_TOL = 1e-9


class ParameterRangeError(ValueError):
    """The requested functional is not finite or not covered for these parameters."""


class PolytopeKind(enum.Enum):
    P = "P"
    S = "S"
    Q = "Q"


class FunctionalKind(enum.Enum):
    VOLUME = "volume"
    INTRINSIC_VOLUME = "intrinsic"
    SURFACE_AREA = "surface"
    MEAN_WIDTH = "meanwidth"
    T_FUNCTIONAL = "T"
    FACET_COUNT = "facets"
    VERTEX_COUNT = "vertices"


@dataclass(frozen=True)
class FunctionalSpec:
    kind: FunctionalKind
    k: Optional[int] = None
    a: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        if self.kind is FunctionalKind.INTRINSIC_VOLUME:
            if self.k is None or int(self.k) != self.k or self.k < 1:
                raise ValueError("intrinsic volume needs an integer order k >= 1")
        elif self.k is not None:
            raise ValueError(f"{self.kind.value} takes no order k")
        if self.kind is FunctionalKind.T_FUNCTIONAL:
            if not (self.a >= 0 and self.b >= 0):
                raise ValueError("T-functional exponents must satisfy a, b >= 0")
        elif self.a != 0 or self.b != 0:
            raise ValueError(f"{self.kind.value} takes no exponents a, b")

    @staticmethod
    def volume() -> "FunctionalSpec":
        return FunctionalSpec(FunctionalKind.VOLUME)

    @staticmethod
    def intrinsic(k: int) -> "FunctionalSpec":
        return FunctionalSpec(FunctionalKind.INTRINSIC_VOLUME, k=k)

    @staticmethod
    def T(a: float, b: float) -> "FunctionalSpec":
        return FunctionalSpec(FunctionalKind.T_FUNCTIONAL, a=a, b=b)

    def label(self) -> str:
        if self.kind is FunctionalKind.INTRINSIC_VOLUME:
            return f"V{self.k}"
        if self.kind is FunctionalKind.T_FUNCTIONAL:
            return f"T[{self.a:g},{self.b:g}]"
        return self.kind.value


@dataclass(frozen=True)
class FormulaConstants:
    """Constants in front of the one-dimensional integrals.

    ``A`` and ``D_vol`` belong to the volume integral with exponent
    ``q_exponent``; ``C`` and ``D_T`` to the T-functional.  Fields that do
    not apply to the request are ``nan``.
    """

    A: float
    D_vol: float
    C: float
    D_T: float
    q_exponent: float


@dataclass(frozen=True)
class ExactValue:
    value: float
    abs_error_estimate: float

    def __float__(self) -> float:
        return self.value


# ---------------------------------------------------------------- integrals

def _beta_tail(gamma: float, u: np.ndarray) -> np.ndarray:
    """1 - F_{1,gamma}(1 - u) = F_{1,gamma}(-1 + u) for u in [0, 1]."""
    return reg_inc_beta(gamma + 1.0, gamma + 1.0, 0.5 * u, 1.0 - 0.5 * u)


def _beta_slab_gap(gamma: float, u: np.ndarray) -> np.ndarray:
    """1 - slab(1 - u): mass outside [-(1-u), 1-u]."""
    w = 1.0 - u
    return reg_inc_beta(gamma + 1.0, 0.5, u * (2.0 - u), w * w)


def _prime_tail(gamma: float, h: np.ndarray) -> np.ndarray:
    """1 - F~_{1,gamma}(h) for h >= 0."""
    with np.errstate(over="ignore"):
        h2 = h * h
        inv = 1.0 / (1.0 + h2)
    xc = np.where(np.isinf(h2), 1.0, h2 * inv)
    return 0.5 * reg_inc_beta(gamma - 0.5, 0.5, inv, xc)


def _log_pow_terms(kind: PolytopeKind, m: float, tail: np.ndarray, signed: bool):
    """log of the CDF powers and their signs.

    P contributes F(h)^m + F(-h)^m over the half range (difference when
    ``signed``); Q contributes F(h)^m; S receives the slab gap in ``tail``.
    """
    with np.errstate(divide="ignore"):
        near = m * np.log1p(-tail) if m else np.zeros_like(tail)
        if kind is not PolytopeKind.P:
            return [(near, 1.0)]
        far = m * np.log(tail) if m else np.zeros_like(tail)
    return [(near, 1.0), (far, -1.0 if signed else 1.0)]


def _peak_ladder(f, grid: np.ndarray, max_points: int = 160) -> list[float]:
    """Breakpoints at factors of 2 across the range where f carries its mass.

    For large n the integrand is a bump whose position and log-width depend
    on n, the exponents and the line law; a panel much wider than the bump
    can pass the first Gauss-Kronrod test without ever sampling it.  The
    range is where the mass per log unit, x f(x), exceeds 1e-17 of its peak.
    """
    with np.errstate(all="ignore"):
        v = np.abs(np.asarray(f(grid), dtype=float)) * grid
    v = np.where(np.isfinite(v), v, 0.0)
    if not v.any():
        return []
    keep = np.nonzero(v > 1e-17 * v.max())[0]
    lo = max(float(grid[keep[0]]) / 2.0, float(grid[0]))
    hi = min(float(grid[keep[-1]]) * 2.0, float(grid[-1]))
    count = min(max_points, int(math.ceil(math.log2(hi / lo))) + 1)
    if count < 2:
        return []
    return [float(x) for x in np.geomspace(lo, hi, count) if grid[0] < x < grid[-1]]


def _integral(
    family: Family,
    gamma: float,
    expo: float,
    m: float,
    a: float,
    kind: PolytopeKind,
    log_const: float,
    tol: float,
    signed: bool = False,
) -> QuadResult:
    """exp(log_const) times the integral of |h|^a w(h)^expo G(h) over the kind's range.

    ``w`` is ``1 - h^2`` on the ball and ``1 / (1 + h^2)`` on R; ``G`` is the
    CDF or slab power of the line law with parameter ``gamma``.
    """
    if family is Family.BETA:

        def f(u):
            with np.errstate(divide="ignore"):
                base = log_const + expo * np.log(u * (2.0 - u))
                if a:
                    base = base + a * np.log1p(-u)
            tail = _beta_slab_gap(gamma, u) if kind is PolytopeKind.S else _beta_tail(gamma, u)
            out = np.zeros_like(u)
            for lg, sgn in _log_pow_terms(kind, m, tail, signed):
                out += sgn * np.exp(base + lg)
            return out

        pts = [1.0 - k / math.sqrt(expo + 1.0) for k in (1.0, 4.0, 16.0) if expo + 1.0 > k * k]
        pts += _peak_ladder(f, np.geomspace(1e-300, 1.0, 601))
        return integrate_finite(f, 0.0, 1.0, tol, points=pts)

    def g(h):
        with np.errstate(divide="ignore", over="ignore"):
            base = log_const - expo * np.logaddexp(0.0, 2.0 * np.log(h))
            if a:
                base = base + a * np.log(h)
        tail = _prime_tail(gamma, h)
        if kind is PolytopeKind.S:
            tail = 2.0 * tail
        out = np.zeros_like(h)
        for lg, sgn in _log_pow_terms(kind, m, tail, signed):
            out += sgn * np.exp(base + lg)
        return out

    pts = [k / math.sqrt(expo) for k in (0.25, 1.0, 4.0)]
    pts += _peak_ladder(g, np.geomspace(1e-150, 1e150, 601))
    return integrate_half_line(g, tol, points=pts)


# ---------------------------------------------------------------- helpers

def _is_sphere(model: Model) -> bool:
    return model.family is Family.SPHERE


def _line_gamma(family: Family, d: int, beta: float) -> float:
    return beta + (d - 1) / 2 if family is Family.BETA else beta - (d - 1) / 2


def _default_tol(n: int, tol: Optional[float]) -> float:
    if tol is not None:
        if not tol > 0:
            raise ValueError("tolerance must be positive")
        return float(tol)
    return DEFAULT_TOL if n <= _LARGE_N else _LARGE_N_TOL


def _check_n(n: int, least: int, what: str) -> int:
    if int(n) != n or n < least:
        raise ParameterRangeError(f"{what} needs an integer number of points n >= {least}, got {n!r}")
    return int(n)


def _family_beta(model: Model) -> tuple[Family, float]:
    """(family, beta) with the sphere mapped to the beta family at beta = -1."""
    if _is_sphere(model):
        if model.dim < 2:
            raise ParameterRangeError("the sphere model needs d >= 2")
        return Family.BETA, -1.0
    return model.family, model.beta


# ---------------------------------------------------------------- volume

def _log_volume_constants(family: Family, d: int, beta: float, n: int) -> tuple[float, float, float]:
    """(log A, log D, q) of the volume integral."""
    lk = math.log(ball_volume(d))
    if family is Family.BETA:
        lg = log_gamma_ratio((d + 2) / 2 + beta, (d + 3) / 2 + beta)
        lin = beta + (d + 1) / 2
        q = (d + 1) * (beta - 0.5) + d * (d + 3) / 2
    else:
        lg = log_gamma_ratio(beta - (d + 1) / 2, beta - d / 2)
        lin = beta - (d + 1) / 2
        q = (d + 1) * (beta + 0.5) - d * (d + 3) / 2
    log_a = (
        math.log(d + 1) + lk - d * _LOG2 - (d + 1) / 2 * _LOGPI
        + log_binom(n, d + 1) + math.log(lin) + (d + 1) * lg
    )
    # The gamma-ratio power is d in both families; the beta-prime D carries
    # power d as well (checked against the T-functional route and by MC).
    log_d = lk - n * _LOG2 - d / 2 * _LOGPI + log_binom(n, d) + d * lg
    return log_a, log_d, q


def _check_volume_model(family: Family, d: int, beta: float) -> None:
    if family is Family.BETA_PRIME and not beta > (d + 1) / 2:
        raise ParameterRangeError(
            f"expected volume of a beta-prime polytope in dimension {d} needs beta > {(d + 1) / 2}, got {beta}"
        )


def _volume(family: Family, d: int, beta: float, kind: PolytopeKind, n: int, tol: float) -> ExactValue:
    _check_volume_model(family, d, beta)
    log_a, log_d, q = _log_volume_constants(family, d, beta, n)
    gamma = _line_gamma(family, d, beta)
    m = n - d - 1
    if kind is PolytopeKind.S:
        log_a += (d + 1) * _LOG2
    r = _integral(family, gamma, q, m, 0.0, kind, log_a, tol)
    value = r.value + (math.exp(log_d) if kind is PolytopeKind.Q else 0.0)
    return ExactValue(value, r.abs_error_estimate)


def _expected_volume(model: Model, kind: PolytopeKind, n: int, tol: Optional[float]) -> ExactValue:
    d = model.dim
    n = _check_n(n, d + 1, "expected volume")
    if _is_sphere(model):
        if d < 2:
            raise ParameterRangeError("the sphere model needs d >= 2")
        if kind is PolytopeKind.Q:
            raise ParameterRangeError("sphere-model volumes are available for kinds P and S only")
    fam, beta = _family_beta(model)
    return _volume(fam, d, beta, kind, n, _default_tol(n, tol))


def expected_volume(model: Model, kind: PolytopeKind, n: int, tol: Optional[float] = None) -> float:
    """E Vol_d of the P, S or Q polytope on n points.

    On the sphere (d >= 2, kinds P and S) the beta constants are finite at
    beta = -1 and give the sphere values, with exponent (d^2 - 3)/2 and line
    law F_{1,(d-3)/2}.
    """
    return _expected_volume(model, kind, n, tol).value


def _intrinsic(model: Model, kind: PolytopeKind, n: int, k: int, tol: Optional[float]) -> ExactValue:
    d = model.dim
    if int(k) != k or not 1 <= k <= d:
        raise ParameterRangeError(f"intrinsic volume order must satisfy 1 <= k <= {d}, got {k!r}")
    k = int(k)
    if k == d:
        return _expected_volume(model, kind, n, tol)
    try:
        proj = projected_model(model, k)
    except ValueError as exc:
        raise ParameterRangeError(str(exc)) from None
    n = _check_n(n, k + 1, "expected intrinsic volume")
    r = _volume(proj.family, k, proj.beta, kind, n, _default_tol(n, tol))
    factor = math.comb(d, k) * ball_volume(d) / (ball_volume(k) * ball_volume(d - k))
    return ExactValue(factor * r.value, factor * r.abs_error_estimate)


def expected_intrinsic_volume(
    model: Model, kind: PolytopeKind, n: int, k: int, tol: Optional[float] = None
) -> float:
    """E V_k by Kubota: binom(d,k) kappa_d / (kappa_k kappa_{d-k}) E Vol_k of the projection."""
    return _intrinsic(model, kind, n, k, tol).value


def _surface(model: Model, kind: PolytopeKind, n: int, tol: Optional[float]) -> ExactValue:
    d = model.dim
    if d < 2:
        raise ParameterRangeError("surface area needs d >= 2")
    proj = projected_model(model, d - 1)
    _check_volume_model(proj.family, d - 1, proj.beta)
    n = _check_n(n, d, "expected surface area")
    r = _volume(proj.family, d - 1, proj.beta, kind, n, _default_tol(n, tol))
    gam = d * ball_volume(d) / ball_volume(d - 1)
    return ExactValue(gam * r.value, gam * r.abs_error_estimate)


def expected_surface_area(model: Model, kind: PolytopeKind, n: int, tol: Optional[float] = None) -> float:
    """E S_{d-1} = gamma_d times the expected (d-1)-volume of the projected model."""
    return _surface(model, kind, n, tol).value


def _mean_width(model: Model, kind: PolytopeKind, n: int, tol: Optional[float]) -> ExactValue:
    d = model.dim
    proj = projected_model(model, 1)
    if _is_sphere(proj):  # d == 1 sphere: the two points +-1
        raise ParameterRangeError("the sphere model needs d >= 2")
    if proj.family is Family.BETA_PRIME and not proj.beta > 1.0:
        raise ParameterRangeError(
            f"mean width of a beta-prime polytope in dimension {d} needs beta > {(d + 1) / 2}"
        )
    n = _check_n(n, 2, "expected mean width")
    return _volume(proj.family, 1, proj.beta, kind, n, _default_tol(n, tol))


def expected_mean_width(model: Model, kind: PolytopeKind, n: int, tol: Optional[float] = None) -> float:
    """Expected length of the projection onto a uniform random line."""
    return _mean_width(model, kind, n, tol).value


# ---------------------------------------------------------------- T-functional

def _t_exponent(family: Family, d: int, beta: float, b: float) -> float:
    if family is Family.BETA:
        return d * beta + (d - 1) * (d + b + 1) / 2
    return d * beta - (d - 1) * (d + b + 1) / 2


def _log_t_constants(family: Family, d: int, beta: float, n: int, a: float, b: float):
    """(log C, log D_T or None) of the T-functional."""
    lk = math.log(ball_volume(d))
    lr = log_norm_const_ratio(family, d, beta)
    log_c = (
        log_binom(n, d) + math.lgamma(d + 1) + lk
        + log_simplex_moment(family, d - 1, beta, b + 1.0) + d * lr
    )
    log_dt = None
    if a == 0:
        log_dt = (
            log_binom(n, d - 1) + math.log(d) + lk
            + log_parallelotope_moment(family, d - 1, beta, b + 1.0)
            - (n - d + 1) * _LOG2 - b * math.lgamma(d) + (d - 1) * lr
        )
    return log_c, log_dt


def _check_t_range(family: Family, d: int, beta: float, a: float, b: float) -> None:
    if not (a >= 0 and b >= 0):
        raise ParameterRangeError("T-functional exponents must satisfy a, b >= 0")
    if family is Family.BETA_PRIME and not 2 * d * beta > (d - 1) * (d + b + 1) + a + 1:
        raise ParameterRangeError(
            f"beta-prime T-functional with a={a}, b={b} in dimension {d} needs "
            f"2 d beta > {(d - 1) * (d + b + 1) + a + 1}, got beta={beta}"
        )


def _t_core(
    family: Family, d: int, beta: float, kind: PolytopeKind, n: int, a: float, b: float,
    tol: float, signed: bool = False,
) -> ExactValue:
    _check_t_range(family, d, beta, a, b)
    log_c, log_dt = _log_t_constants(family, d, beta, n, float(a), float(b))
    expo = _t_exponent(family, d, beta, b)
    if family is Family.BETA and not expo > -1.0:
        raise ParameterRangeError(f"height density exponent {expo} is not integrable")
    if kind is PolytopeKind.S:
        log_c += d * _LOG2
    gamma = _line_gamma(family, d, beta)
    r = _integral(family, gamma, expo, n - d, float(a), kind, log_c, tol, signed=signed)
    value = r.value
    if kind is PolytopeKind.Q and log_dt is not None:
        value += math.exp(log_dt)
    return ExactValue(value, r.abs_error_estimate)


def _t_functional(model: Model, kind: PolytopeKind, n: int, a: float, b: float, tol: Optional[float]) -> ExactValue:
    d = model.dim
    # S on n = d points is already a full-dimensional cross-polytope and Q a simplex.
    n = _check_n(n, d + 1 if kind is PolytopeKind.P else d, "T-functional")
    fam, beta = _family_beta(model)
    return _t_core(fam, d, beta, kind, n, a, b, _default_tol(n, tol))


def t_functional(
    model: Model, kind: PolytopeKind, n: int, a: float, b: float, tol: Optional[float] = None
) -> float:
    """E sum over facets F of eta(F)^a Vol_{d-1}(F)^b, eta the distance of aff F to 0.

    For the sphere model the beta formula is continued to beta = -1, where
    all constants are finite for d >= 2.
    """
    return _t_functional(model, kind, n, a, b, tol).value


def _facets(model: Model, kind: PolytopeKind, n: int, tol: Optional[float]) -> ExactValue:
    d = model.dim
    if _is_sphere(model) and kind is not PolytopeKind.Q and d in (2, 3):
        n = _check_n(n, d + 1 if kind is PolytopeKind.P else d, "facet count")
        if d == 2:
            v = n if kind is PolytopeKind.P else 2 * n
        else:
            v = 2 * (n - 2) if kind is PolytopeKind.P else 4 * (n - 1)
        return ExactValue(float(v), 0.0)
    return _t_functional(model, kind, n, 0.0, 0.0, tol)


def expected_facet_count(model: Model, kind: PolytopeKind, n: int, tol: Optional[float] = None) -> float:
    """E f_{d-1} = E T_{0,0}; on the sphere in d = 2, 3 the almost-sure counts."""
    return _facets(model, kind, n, tol).value


def expected_vertex_count_ball(kind: PolytopeKind, n: int, d: int, tol: Optional[float] = None) -> float:
    """E f_0 for uniform points in the ball, by Efron's identity."""
    if kind is PolytopeKind.Q:
        raise ParameterRangeError("the vertex-count identity covers kinds P and S")
    n = _check_n(n, d + 2, "Efron vertex count")
    vol = _expected_volume(Model(Family.BETA, d, 0.0), kind, n - 1, tol).value
    mult = n if kind is PolytopeKind.P else 2 * n
    return mult * (1.0 - vol / ball_volume(d))


def halfsphere_expected_facets(n: int, d: int, alpha: float = 0.0, tol: Optional[float] = None) -> float:
    """Expected facet count of the spherical hull of n points on the upper half-sphere.

    The points have density proportional to x_{d+1}^alpha; the count equals
    that of the beta-prime polytope with beta = (alpha + d + 1) / 2.
    """
    if not alpha > -1.0:
        raise ParameterRangeError(f"half-sphere density exponent must exceed -1, got {alpha}")
    if int(d) != d or d < 1:
        raise ParameterRangeError(f"dimension must be an integer >= 1, got {d!r}")
    n = _check_n(n, d + 1, "half-sphere facet count")
    model = Model(Family.BETA_PRIME, int(d), (alpha + d + 1) / 2)
    return _t_core(model.family, model.dim, model.beta, PolytopeKind.P, n, 0.0, 0.0, _default_tol(n, tol)).value


def volume_via_T(model: Model, kind: PolytopeKind, n: int, tol: Optional[float] = None) -> float:
    """E Vol_d as (1/d) E T_{1,1} (cone decomposition from the origin).

    S and Q contain the origin.  For P the signed version is used: the
    height of a facet counts negative when the origin lies beyond it.
    """
    d = model.dim
    n = _check_n(n, d + 1, "volume via T")
    fam, beta = _family_beta(model)
    r = _t_core(fam, d, beta, kind, n, 1.0, 1.0, _default_tol(n, tol), signed=kind is PolytopeKind.P)
    return r.value / d


def gaussian_limit_volume(n: int, d: int, beta: float, tol: Optional[float] = None) -> float:
    """(2 beta)^{d/2} E Vol_d(P) for beta points: the volume of sqrt(2 beta) P.

    As beta grows this tends to the expected volume of the Gaussian polytope.
    """
    if not beta > 0:
        raise ParameterRangeError("the Gaussian rescaling needs beta > 0")
    return (2.0 * beta) ** (d / 2) * expected_volume(Model(Family.BETA, d, beta), PolytopeKind.P, n, tol)


# ---------------------------------------------------------------- dispatch

def formula_constants(
    model: Model, kind: PolytopeKind, n: int, a: float = 0.0, b: float = 0.0
) -> FormulaConstants:
    """Constants of the volume integral and of the (a, b) T-functional integral."""
    d = model.dim
    fam, beta = _family_beta(model)
    nan = math.nan
    A = D = q = nan
    if n >= d + 1 and (fam is Family.BETA or beta > (d + 1) / 2):
        log_a, log_d, q = _log_volume_constants(fam, d, beta, n)
        A = math.exp(log_a)
        D = math.exp(log_d)
    log_c, log_dt = _log_t_constants(fam, d, beta, n, float(a), float(b))
    return FormulaConstants(A, D, math.exp(log_c), 0.0 if log_dt is None else math.exp(log_dt), q)


def evaluate(
    functional: FunctionalSpec, model: Model, kind: PolytopeKind, n: int, tol: Optional[float] = None
) -> ExactValue:
    """Exact value and quadrature error estimate of any supported functional."""
    fk = functional.kind
    if fk is FunctionalKind.VOLUME:
        return _expected_volume(model, kind, n, tol)
    if fk is FunctionalKind.INTRINSIC_VOLUME:
        return _intrinsic(model, kind, n, functional.k, tol)
    if fk is FunctionalKind.SURFACE_AREA:
        return _surface(model, kind, n, tol)
    if fk is FunctionalKind.MEAN_WIDTH:
        return _mean_width(model, kind, n, tol)
    if fk is FunctionalKind.T_FUNCTIONAL:
        return _t_functional(model, kind, n, functional.a, functional.b, tol)
    if fk is FunctionalKind.FACET_COUNT:
        return _facets(model, kind, n, tol)
    if fk is FunctionalKind.VERTEX_COUNT:
        if _is_sphere(model) and kind is not PolytopeKind.Q:
            return ExactValue(float(n if kind is PolytopeKind.P else 2 * n), 0.0)
        if model.family is Family.BETA and model.beta == 0.0:
            return ExactValue(expected_vertex_count_ball(kind, n, model.dim, tol), 0.0)
        raise ParameterRangeError("exact vertex counts are available for the uniform ball and the sphere")
    raise ValueError(f"unknown functional {functional!r}")  # pragma: no cover
