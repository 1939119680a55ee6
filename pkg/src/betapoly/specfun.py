"""Special functions and unit-ball constants.

Everything here is scalar-or-array, stateless and safe to call from any
thread.  Gamma-function products are assembled in log space; ``reg_inc_beta``
is a vectorised continued fraction so that the one-dimensional CDFs used
inside the quadratures never need a nested integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GeomConstants",
    "log_gamma",
    "log_gamma_ratio",
    "gamma_ratio",
    "log_binom",
    "log_beta",
    "reg_inc_beta",
    "ball_volume",
    "sphere_surface",
    "geom_constants",
]

# Bernoulli terms B_{2k} / (2k (2k-1)) of the Stirling series.
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
)
_RECURRENCE_MAX = 64


def _check_positive(name: str, x: float) -> None:
    if not x > 0.0 or not math.isfinite(x):
        raise ValueError(f"{name} must be a positive finite real, got {x!r}")


def log_gamma(x: float) -> float:
    """Natural logarithm of the gamma function for ``x > 0``."""
    _check_positive("x", x)
    return math.lgamma(x)


def _stirling_tail(x: float) -> float:
    inv = 1.0 / x
    inv2 = inv * inv
    s = 0.0
    p = inv
    for c in _STIRLING:
        s += c * p
        p *= inv2
    return s


def log_gamma_ratio(a: float, b: float) -> float:
    """``log(Gamma(a) / Gamma(b))`` without cancellation for large, close arguments."""
    _check_positive("a", a)
    _check_positive("b", b)
    diff = a - b
    k = round(diff)
    if k == diff and abs(k) <= _RECURRENCE_MAX:
        lo = min(a, b)
        s = math.fsum(math.log(lo + i) for i in range(abs(k)))
        return s if k >= 0 else -s
    if min(a, b) < 10.0:
        return math.lgamma(a) - math.lgamma(b)
    # Stirling form, with the (a-1/2) log a - (b-1/2) log b term rewritten
    # through log1p so that nearby arguments do not cancel.
    main = (a - 0.5) * math.log1p(diff / b) + diff * math.log(b) - diff
    return main + _stirling_tail(a) - _stirling_tail(b)


def _pochhammer(x: float, k: int) -> float:
    p = 1.0
    for i in range(k):
        p *= x + i
    return p


def gamma_ratio(a: float, b: float) -> float:
    """Gamma(a) / Gamma(b).

    Integer differences up to 64 go through the recurrence
    ``Gamma(x + 1) = x Gamma(x)`` and are exact to rounding; everything
    else is exponentiated once from :func:`log_gamma_ratio`.
    """
    _check_positive("a", a)
    _check_positive("b", b)
    diff = a - b
    k = round(diff)
    if k == diff and abs(k) <= _RECURRENCE_MAX:
        p = _pochhammer(min(a, b), abs(k))
        if math.isfinite(p) and p > 0.0:
            return p if k >= 0 else 1.0 / p
    return math.exp(log_gamma_ratio(a, b))


def log_binom(n: float, k: float) -> float:
    """log of the binomial coefficient; exact integer path for integer input."""
    if k < 0 or k > n:
        raise ValueError(f"binomial ({n} choose {k}) outside 0 <= k <= n")
    if float(n).is_integer() and float(k).is_integer():
        return math.log(math.comb(int(n), int(k)))
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_beta(a: float, b: float) -> float:
    _check_positive("a", a)
    _check_positive("b", b)
    lo, hi = min(a, b), max(a, b)
    if hi >= 10.0:
        return math.lgamma(lo) - log_gamma_ratio(lo + hi, hi)
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


_TINY = 1e-300
_CF_EPS = 2e-16
_CF_MAXITER = 20000


def _betacf(a, b, x: np.ndarray) -> np.ndarray:
    """Continued fraction for I_x(a, b), modified Lentz, vectorised.

    ``a`` and ``b`` may be arrays broadcasting against ``x`` so that both
    branches of the symmetry switch run in one pass.  Lanes leave the
    iteration as soon as they converge.
    """
    x = np.asarray(x, dtype=float)
    a = np.broadcast_to(np.asarray(a, dtype=float), x.shape).copy()
    b = np.broadcast_to(np.asarray(b, dtype=float), x.shape).copy()
    out = np.empty_like(x)
    idx = np.arange(x.size)
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d[np.abs(d) < _TINY] = _TINY
    d = 1.0 / d
    h = d.copy()
    for m in range(1, _CF_MAXITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d[np.abs(d) < _TINY] = _TINY
        c = 1.0 + aa / c
        c[np.abs(c) < _TINY] = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d[np.abs(d) < _TINY] = _TINY
        c = 1.0 + aa / c
        c[np.abs(c) < _TINY] = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        done = np.abs(delta - 1.0) <= _CF_EPS
        if done.any():
            out[idx[done]] = h[done]
            keep = ~done
            if not keep.any():
                return out
            idx, a, b, x, qab, qap, qam, c, d, h = (
                v[keep] for v in (idx, a, b, x, qab, qap, qam, c, d, h)
            )
    raise ArithmeticError(
        f"incomplete beta continued fraction did not converge for a={a[:3]}, b={b[:3]}"
    )


def _front(a, b, pa, pb, y):
    """y^pa (1-y)^pb / (pa B(a, b)), with (pa, pb) a per-lane permutation of (a, b)."""
    if min(a, b) < 10.0:
        with np.errstate(divide="ignore"):
            return np.exp(pa * np.log(y) + pb * np.log1p(-y) - log_beta(a, b)) / pa
    # Centre the powers at the mode x0 = pa/(a+b) and take B(a,b) from the
    # Stirling series, so nothing of size a*log(x) has to cancel.
    s = a + b
    x0 = pa / s
    tails = _stirling_tail(a) + _stirling_tail(b) - _stirling_tail(s)
    k = 0.5 * math.log(a * b / s) - 0.5 * math.log(2.0 * math.pi) - tails
    with np.errstate(divide="ignore"):  # far tails underflow to 0
        expo = pa * np.log1p((y - x0) / x0) + pb * np.log1p((x0 - y) / (1.0 - x0))
    return np.exp(expo + k) / pa


def reg_inc_beta(a: float, b: float, x, xc=None):
    """Regularized incomplete beta function I_x(a, b).

    Accepts a scalar or an array for ``x``; returns the same shape.  The
    continued fraction is evaluated directly for ``x < (a+1)/(a+b+2)`` and
    through ``I_x(a,b) = 1 - I_{1-x}(b,a)`` otherwise.  Callers that know
    ``1 - x`` more accurately than the subtraction can pass it as ``xc``.
    """
    _check_positive("a", a)
    _check_positive("b", b)
    xa = np.asarray(x, dtype=float)
    if np.any(np.isnan(xa)) or np.any(xa < 0.0) or np.any(xa > 1.0):
        raise ValueError("reg_inc_beta requires 0 <= x <= 1")
    scalar = xa.ndim == 0
    shape = xa.shape
    xa = xa.ravel()
    xca = None if xc is None else np.broadcast_to(np.asarray(xc, dtype=float), shape).ravel()
    if xca is None:
        out = np.where(xa >= 1.0, 1.0, 0.0)
        inner = (xa > 0.0) & (xa < 1.0)
    else:
        out = np.where(xca <= 0.0, 1.0, 0.0)
        inner = (xa > 0.0) & (xca > 0.0)
    if inner.any():
        xi = xa[inner]
        flip = xi >= (a + 1.0) / (a + b + 2.0)
        # y is the argument actually fed to the fraction; 1 - x is exact
        # for x >= 1/2 (Sterbenz), which covers every flipped lane.
        comp = 1.0 - xi if xca is None else xca[inner]
        y = np.where(flip, comp, xi)
        pa = np.where(flip, b, a)
        pb = np.where(flip, a, b)
        front = _front(a, b, pa, pb, y)
        v = front * _betacf(pa, pb, y)
        out[inner] = np.where(flip, 1.0 - v, v)
    np.clip(out, 0.0, 1.0, out=out)
    return float(out[0]) if scalar else out.reshape(shape)


def _kappa_small(k: int) -> float:
    # kappa_k = (2 pi / k) kappa_{k-2}; kappa_0 = 1, kappa_1 = 2
    v = 1.0 if k % 2 == 0 else 2.0
    for j in range(2 + k % 2, k + 1, 2):
        v *= 2.0 * math.pi / j
    return v


def ball_volume(k: int) -> float:
    """Volume kappa_k of the k-dimensional unit ball."""
    if int(k) != k or k < 0:
        raise ValueError(f"ball dimension must be a non-negative integer, got {k!r}")
    k = int(k)
    if k <= 200:
        return _kappa_small(k)
    return math.exp(0.5 * k * math.log(math.pi) - math.lgamma(0.5 * k + 1.0))


def sphere_surface(k: int) -> float:
    """Surface area omega_k = k kappa_k of the unit sphere S^{k-1}."""
    if int(k) != k or k < 1:
        raise ValueError(f"sphere index must be an integer >= 1, got {k!r}")
    return k * ball_volume(k)


@dataclass(frozen=True)
class GeomConstants:
    kappa_k: float
    omega_k: float


def geom_constants(k: int) -> GeomConstants:
    return GeomConstants(ball_volume(k), sphere_surface(k) if k >= 1 else 0.0)
