"""Adaptive one-dimensional quadrature.

A globally adaptive 21-point Gauss-Kronrod scheme with bisection and Wynn
epsilon extrapolation, in the manner of QUADPACK's QAGS.  The extrapolation
is what lets a black-box integrand with an integrable power singularity at
an endpoint, such as ``(1 - h^2)^(-1/2)``, reach a 1e-12 tolerance: the
panel next to the singularity converges only algebraically under plain
bisection, but the sequence of totals converges geometrically enough for
the epsilon table to accelerate it.

Integrands are called with a 1-d array of abscissae and must return an
array of the same shape.  Each bisection evaluates both halves in a single
call of 42 points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "QuadResult",
    "QuadratureError",
    "DivergenceError",
    "DEFAULT_TOL",
    "DEFAULT_LIMIT",
    "integrate_finite",
    "integrate_real_line",
    "integrate_half_line",
]

DEFAULT_TOL = 1e-12
DEFAULT_LIMIT = 10_000

_EPMACH = np.finfo(float).eps
_UFLOW = np.finfo(float).tiny
_OFLOW = np.finfo(float).max

# Kronrod abscissae on [0, 1); odd entries are the 10-point Gauss nodes.
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208990703931,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

# Full 21-node rule on [-1, 1] in ascending order, plus its Gauss weights.
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(21)
_GW[1:10:2] = _WG
_GW[11:20:2] = _WG[::-1]


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    evaluations: int
    panels: int = 1

    def __float__(self) -> float:
        return self.value


class QuadratureError(ArithmeticError):
    """The error estimate stalled above the tolerance within the panel budget."""

    def __init__(self, message: str, result: QuadResult):
        super().__init__(message)
        self.result = result


class DivergenceError(QuadratureError):
    """The integrand is not integrable on the requested range."""


def _gk21(f, lo: np.ndarray, hi: np.ndarray):
    """Kronrod value and QUADPACK error estimate on each panel [lo_i, hi_i]."""
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = centre[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise ValueError(f"integrand is not finite at {bad!r}")
    resk = fx @ _KW
    resg = fx @ _GW
    resabs = np.abs(fx) @ _KW
    mean = 0.5 * resk
    resasc = np.abs(fx - mean[:, None]) @ _KW
    ah = np.abs(half)
    val = resk * half
    err = np.abs((resk - resg) * half)
    resasc *= ah
    resabs *= ah
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc != 0.0) & (err != 0.0), scaled, err)
    floor = _EPMACH * 50.0 * resabs
    err = np.where(resabs > _UFLOW / (50.0 * _EPMACH), np.maximum(floor, err), err)
    return val, err, resabs, resasc


class _Epsilon:
    """Wynn epsilon table with QUADPACK's error bookkeeping (QELG)."""

    LIMEXP = 50

    def __init__(self):
        self.tab = np.zeros(self.LIMEXP + 3)  # 1-based, like the original
        self.n = 0
        self.res3la = [0.0, 0.0, 0.0]
        self.nres = 0

    def push(self, value: float) -> tuple[float, float]:
        self.n += 1
        self.tab[self.n] = value
        return self._extrapolate()

    def _extrapolate(self) -> tuple[float, float]:
        ep = self.tab
        n = self.n
        self.nres += 1
        abserr = _OFLOW
        result = ep[n]
        if n < 3:
            return result, max(abserr, 5.0 * _EPMACH * abs(result))
        ep[n + 2] = ep[n]
        newelm = (n - 1) // 2
        ep[n] = _OFLOW
        num = n
        k1 = n
        for i in range(1, newelm + 1):
            k2 = k1 - 1
            k3 = k1 - 2
            res = ep[k1 + 2]
            e0, e1, e2 = ep[k3], ep[k2], res
            e1abs = abs(e1)
            delta2 = e2 - e1
            err2 = abs(delta2)
            tol2 = max(abs(e2), e1abs) * _EPMACH
            delta3 = e1 - e0
            err3 = abs(delta3)
            tol3 = max(e1abs, abs(e0)) * _EPMACH
            if err2 <= tol2 and err3 <= tol3:
                # e0, e1, e2 agree to machine accuracy
                result = res
                abserr = max(err2 + err3, 5.0 * _EPMACH * abs(result))
                return result, abserr
            e3 = ep[k1]
            ep[k1] = e1
            delta1 = e1 - e3
            err1 = abs(delta1)
            tol1 = max(e1abs, abs(e3)) * _EPMACH
            if err1 <= tol1 or err2 <= tol2 or err3 <= tol3:
                n = i + i - 1
                break
            ss = 1.0 / delta1 + 1.0 / delta2 - 1.0 / delta3
            if abs(ss * e1) <= 1e-4:
                n = i + i - 1
                break
            res = e1 + 1.0 / ss
            ep[k1] = res
            k1 -= 2
            error = err2 + abs(res - e2) + err3
            if error <= abserr:
                abserr = error
                result = res
        if n == self.LIMEXP:
            n = 2 * (self.LIMEXP // 2) - 1
        ib = 1 if num % 2 == 1 else 2
        for _ in range(newelm + 1):
            ep[ib] = ep[ib + 2]
            ib += 2
        if num != n:
            indx = num - n + 1
            for i in range(1, n + 1):
                ep[i] = ep[indx]
                indx += 1
        self.n = n
        if self.nres < 4:
            self.res3la[self.nres - 1] = result
            abserr = _OFLOW
        else:
            r = self.res3la
            abserr = abs(result - r[2]) + abs(result - r[1]) + abs(result - r[0])
            r[0], r[1], r[2] = r[1], r[2], result
        return result, max(abserr, 5.0 * _EPMACH * abs(result))


def _psrt(limit: int, last: int, maxerr: int, elist: np.ndarray, iord: np.ndarray, nrmax: int):
    """Keep iord a descending ordering of elist (QUADPACK's QPSRT); 1-based."""
    if last <= 2:
        iord[1], iord[2] = 1, 2
    else:
        errmax = elist[maxerr]
        while nrmax > 1 and errmax > elist[iord[nrmax - 1]]:
            iord[nrmax] = iord[nrmax - 1]
            nrmax -= 1
        jupbn = limit + 3 - last if last > limit // 2 + 2 else last
        errmin = elist[last]
        jbnd = jupbn - 1
        ibeg = nrmax + 1
        i = ibeg
        inserted = False
        while i <= jbnd:
            isucc = iord[i]
            if errmax >= elist[isucc]:
                inserted = True
                break
            iord[i - 1] = isucc
            i += 1
        if not inserted:
            iord[jbnd] = maxerr
            iord[jupbn] = last
        else:
            iord[i - 1] = maxerr
            k = jbnd
            for _ in range(i, jbnd + 1):
                isucc = iord[k]
                if errmin < elist[isucc]:
                    iord[k + 1] = last
                    break
                iord[k + 1] = isucc
                k -= 1
            else:
                iord[i] = last
    maxerr = int(iord[nrmax])
    return maxerr, float(elist[maxerr]), nrmax


def _adaptive(f, edges: np.ndarray, tol: float, limit: int) -> QuadResult:
    """QUADPACK's QAGS (one panel) or QAGP (breakpoints), transliterated.

    Arrays are 1-based as in the original so the control flow can be
    checked line by line against it.  ``limit`` caps the number of panels.
    """
    nint = len(edges) - 1
    limit = max(limit, nint)
    epsabs = epsrel = tol
    alist = np.zeros(limit + 2)
    blist = np.zeros(limit + 2)
    rlist = np.zeros(limit + 2)
    elist = np.zeros(limit + 2)
    iord = np.zeros(limit + 2, dtype=np.int64)
    level = np.zeros(limit + 2, dtype=np.int64)
    eps = _Epsilon()
    ier = 0

    v, e, rabs, rasc = _gk21(f, edges[:-1], edges[1:])
    for i in range(1, nint + 1):
        alist[i], blist[i] = edges[i - 1], edges[i]
        rlist[i], elist[i] = v[i - 1], e[i - 1]
        iord[i] = i
    result = math.fsum(v)
    abserr = float(np.sum(e))
    defabs = float(np.sum(rabs))
    last = nint
    nev = 21 * nint
    dres = abs(result)
    errbnd = max(epsabs, epsrel * dres)
    if nint == 1:
        if abserr <= 100.0 * _EPMACH * defabs and abserr > errbnd:
            ier = 2
        if limit == 1:
            ier = 1
        if ier != 0 or (abserr <= errbnd and abserr != rasc[0]) or abserr == 0.0:
            return _finish(result, abserr, nev, last, ier, tol)
        errsum = abserr
    else:
        # panels whose error equals their resasc get the total error (QAGP)
        for i in range(1, nint + 1):
            if e[i - 1] == rasc[i - 1] and e[i - 1] != 0.0:
                elist[i] = abserr
        errsum = float(np.sum(elist[1:nint + 1]))
        if abserr <= 100.0 * _EPMACH * defabs and abserr > errbnd:
            ier = 2
        for i in range(1, nint):
            ind1 = iord[i]
            k = i
            for j in range(i + 1, nint + 1):
                ind2 = iord[j]
                if elist[ind1] <= elist[ind2]:
                    ind1 = ind2
                    k = j
            if ind1 != iord[i]:
                iord[k] = iord[i]
                iord[i] = ind1
        if limit < nint + 1:
            ier = 1
        if ier != 0 or abserr <= errbnd:
            return _finish(result, abserr, nev, last, ier, tol)

    eps.tab[1] = result
    eps.n = 1
    maxerr = int(iord[1]) if nint > 1 else 1
    errmax = float(elist[maxerr])
    area = result
    abserr = _OFLOW
    nrmax = 1
    ktmin = 0
    extrap = False
    noext = False
    iroff1 = iroff2 = iroff3 = 0
    ierro = 0
    correc = 0.0
    levmax = 1
    ksgn = 1 if dres >= (1.0 - 50.0 * _EPMACH) * defabs else -1
    small = abs(edges[-1] - edges[0]) * 0.375
    erlarg = errsum
    ertest = errbnd
    qagp = nint > 1

    for last in range(nint + 1, limit + 1):
        levcur = level[maxerr] + 1
        a1 = alist[maxerr]
        b1 = 0.5 * (alist[maxerr] + blist[maxerr])
        a2 = b1
        b2 = blist[maxerr]
        erlast = errmax
        v, e, _, rasc = _gk21(f, np.array([a1, a2]), np.array([b1, b2]))
        area1, area2 = float(v[0]), float(v[1])
        error1, error2 = float(e[0]), float(e[1])
        nev += 42
        area12 = area1 + area2
        erro12 = error1 + error2
        errsum = errsum + erro12 - errmax
        area = area + area12 - rlist[maxerr]
        if not (rasc[0] == error1 or rasc[1] == error2):
            if not (abs(rlist[maxerr] - area12) > 1e-5 * abs(area12) or erro12 < 0.99 * errmax):
                if extrap:
                    iroff2 += 1
                else:
                    iroff1 += 1
            if last > 10 and erro12 > errmax:
                iroff3 += 1
        level[maxerr] = levcur
        level[last] = levcur
        rlist[maxerr] = area1
        rlist[last] = area2
        errbnd = max(epsabs, epsrel * abs(area))
        if iroff1 + iroff2 >= 10 or iroff3 >= 20:
            ier = 2
        if iroff2 >= 5:
            ierro = 3
        if last == limit:
            ier = 1
        if max(abs(a1), abs(b2)) <= (1.0 + 100.0 * _EPMACH) * (abs(a2) + 1000.0 * _UFLOW):
            ier = 4
        if error2 > error1:
            alist[maxerr] = a2
            alist[last] = a1
            blist[last] = b1
            rlist[maxerr] = area2
            rlist[last] = area1
            elist[maxerr] = error2
            elist[last] = error1
        else:
            alist[last] = a2
            blist[maxerr] = b1
            blist[last] = b2
            elist[maxerr] = error1
            elist[last] = error2
        maxerr, errmax, nrmax = _psrt(limit, last, maxerr, elist, iord, nrmax)
        if errsum <= errbnd:
            return _finish(math.fsum(rlist[1:last + 1]), errsum, nev, last, ier, tol)
        if ier != 0:
            break
        if not qagp and last == 2:
            small = abs(edges[-1] - edges[0]) * 0.375
            erlarg = errsum
            ertest = errbnd
            eps.tab[2] = area
            eps.n = 2
            continue
        if noext:
            continue
        erlarg -= erlast
        if qagp:
            if levcur + 1 <= levmax:
                erlarg += erro12
        elif abs(b1 - a1) > small:
            erlarg += erro12
        if not extrap:
            if qagp:
                if level[maxerr] + 1 <= levmax:
                    continue
            elif abs(blist[maxerr] - alist[maxerr]) > small:
                continue
            extrap = True
            nrmax = 2
        if ierro != 3 and erlarg > ertest:
            jupbnd = limit + 3 - last if last > 2 + limit // 2 else last
            large = False
            for _ in range(nrmax, jupbnd + 1):
                maxerr = int(iord[nrmax])
                errmax = float(elist[maxerr])
                if qagp:
                    large = level[maxerr] + 1 <= levmax
                else:
                    large = abs(blist[maxerr] - alist[maxerr]) > small
                if large:
                    break
                nrmax += 1
            if large:
                continue
        # extrapolation
        eps.n += 1
        eps.tab[eps.n] = area
        if not (qagp and eps.n <= 2):
            reseps, abseps = eps._extrapolate()
            ktmin += 1
            if ktmin > 5 and abserr < 1e-3 * errsum:
                ier = 5
            if abseps < abserr:
                ktmin = 0
                abserr = abseps
                result = reseps
                correc = erlarg
                ertest = max(epsabs, epsrel * abs(reseps))
                if (abserr < ertest) if qagp else (abserr <= ertest):
                    break
            if eps.n == 1:
                noext = True
            if ier >= 5:
                break
        maxerr = int(iord[1])
        errmax = float(elist[maxerr])
        nrmax = 1
        extrap = False
        if qagp:
            levmax += 1
        else:
            small *= 0.5
        erlarg = errsum

    # final result (labels 100/170 onward)
    use_sum = False
    if abserr == _OFLOW:
        use_sum = True
    elif ier + ierro != 0:
        if ierro == 3:
            abserr += correc
        if ier == 0:
            ier = 3
        if result != 0.0 and area != 0.0:
            if abserr / abs(result) > errsum / abs(area):
                use_sum = True
        elif abserr > errsum:
            use_sum = True
        elif area == 0.0:
            return _finish(result, abserr, nev, last, ier, tol)
    if use_sum:
        return _finish(math.fsum(rlist[1:last + 1]), errsum, nev, last, ier, tol)
    if not (ksgn == -1 and max(abs(result), abs(area)) <= defabs * 0.01):
        if 0.01 > result / area or result / area > 100.0 or errsum > abs(area):
            ier = 6
    return _finish(result, abserr, nev, last, ier, tol)


_IER_TEXT = {
    1: "panel budget exhausted",
    2: "roundoff prevents the requested tolerance",
    3: "extremely bad integrand behaviour",
    4: "roundoff in the extrapolation table",
    5: "integral is probably divergent or slowly convergent",
}


def _finish(value: float, error: float, nev: int, panels: int, ier: int, tol: float) -> QuadResult:
    res = QuadResult(float(value), float(error), nev, panels)
    if error <= max(tol, tol * abs(value)) and math.isfinite(value):
        return res
    why = _IER_TEXT.get(ier if ier <= 2 else ier - 1, "error estimate above tolerance")
    raise QuadratureError(
        f"quadrature did not reach tolerance {tol:g} ({why}; estimate {value!r}, error {error:.3g})", res
    )


def _edges(a: float, b: float, points: Sequence[float] | None) -> np.ndarray:
    # breakpoints closer than 1e-9 relative to a neighbour would leave a sliver
    # panel that trips the too-small-interval test on its first bisection
    near = lambda x, y: abs(x - y) <= 1e-9 * max(abs(x), abs(y))  # noqa: E731
    edges = [a]
    for p in sorted(float(p) for p in (points or ()) if a < p < b):
        if not near(p, edges[-1]) and not near(p, b):
            edges.append(p)
    edges.append(b)
    return np.array(edges, dtype=float)


def integrate_finite(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    *,
    points: Sequence[float] | None = None,
    limit: int = DEFAULT_LIMIT,
) -> QuadResult:
    """Integrate a vectorised ``f`` over the finite interval [a, b].

    The target is ``|value - I| <= max(tol, tol |value|)``.  ``points`` are
    interior breakpoints (kinks, peaks) where the initial panels are split.
    Raises :class:`QuadratureError` if the budget of ``limit`` panels is
    exhausted or the error estimate stalls above the tolerance.
    """
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integrate_finite needs finite limits; use the line variants")
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    if int(limit) < 1:
        raise ValueError("panel budget must be at least 1")
    return _adaptive(f, _edges(a, b, points), float(tol), int(limit))


_HUGE_H = 1e150


def _cot_mapped(f, sign: float):
    """Integrand in t = pi/2 - theta for the half line h = sign * cot(t) >= 0.

    Keeping the distance to the mapped endpoint as the variable keeps
    algebraic tails resolvable down to the float range.  Abscissae beyond
    1e150 (t below 1e-150) contribute nothing measurable and are zeroed,
    which avoids inf * 0 from overflowing powers.
    """

    def g(t):
        s = np.sin(t)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            h = np.cos(t) / s
            v = np.asarray(f(sign * h), dtype=float) / (s * s)
        return np.where(h > _HUGE_H, 0.0, v)

    return g


def _check_tail(g) -> None:
    # Integrability at infinity requires t g(t) -> 0 as t -> 0; a ratio close
    # to one over six decades means the integrand decays no faster than 1/|h|.
    probes = []
    for t in (1e-6, 1e-12):
        with np.errstate(all="ignore"):
            probes.append(float(np.abs(g(np.array([t])))[0]) * t)
    if not all(math.isfinite(p) for p in probes) or (probes[1] > 0 and probes[1] >= 0.99 * probes[0]):
        raise DivergenceError(
            "integrand does not decay fast enough to be integrable at infinity",
            QuadResult(math.nan, math.inf, 2),
        )


def _half_line(f, sign: float, points, tol: float, limit: int) -> QuadResult:
    g = _cot_mapped(f, sign)
    _check_tail(g)
    pts = [math.pi / 2 - math.atan(abs(p)) for p in (points or ()) if sign * p > 0]
    return _adaptive(g, _edges(0.0, math.pi / 2, pts), float(tol), int(limit))


def integrate_real_line(
    f: Callable[[np.ndarray], np.ndarray],
    tol: float = DEFAULT_TOL,
    *,
    points: Sequence[float] | None = None,
    limit: int = DEFAULT_LIMIT,
) -> QuadResult:
    """Integral of ``f`` over the real line via ``h = tan(theta)``.

    The two half lines are integrated separately, each in the distance
    ``t = pi/2 - |theta|`` to the mapped end.  ``points`` become breakpoints
    of the mapped ranges.  Each half must meet the tolerance on its own.
    """
    pos = _half_line(f, 1.0, points, tol, limit)
    neg = _half_line(f, -1.0, points, tol, limit)
    return QuadResult(
        pos.value + neg.value,
        pos.abs_error_estimate + neg.abs_error_estimate,
        pos.evaluations + neg.evaluations,
        pos.panels + neg.panels,
    )


def integrate_half_line(
    f: Callable[[np.ndarray], np.ndarray],
    tol: float = DEFAULT_TOL,
    *,
    points: Sequence[float] | None = None,
    limit: int = DEFAULT_LIMIT,
) -> QuadResult:
    """Integral of ``f`` over [0, inf) via ``h = tan(theta)``."""
    return _half_line(f, 1.0, points, tol, limit)
