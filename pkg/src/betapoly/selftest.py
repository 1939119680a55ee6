"""Quick invariant battery behind ``betapoly selftest``.

Each check returns a :class:`Check`; nothing here raises on a failed
comparison, so one broken layer does not hide the state of the others.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .betadist import Side, beta_model, beta_prime_model, cdf1, halfspace_content, sample_points, sphere_model, stream
from .betadist import Family
from .expectations import (
    FunctionalKind,
    FunctionalSpec,
    PolytopeKind,
    expected_intrinsic_volume,
    expected_mean_width,
    expected_volume,
    volume_via_T,
)
from .hull import convex_hull, facet_count, simplicial_facets_batch, surface_area, vertex_count, volume
from .mc import estimate, zscore
from .moments import MomentQuery, simplex_moment
from .quad import integrate_finite, integrate_real_line
from .specfun import ball_volume, log_gamma_ratio, reg_inc_beta
from .tables import all_cells, check_cell, sphere3_law_cells

__all__ = ["Check", "CHECKS", "run_selftest"]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _specfun() -> tuple[bool, str]:
    worst = 0.0
    for a, b, x in [(0.5, 0.5, 0.3), (2.0, 3.5, 0.7), (30.0, 45.0, 0.4), (1.5, 0.5, 0.99)]:
        worst = max(worst, abs(reg_inc_beta(a, b, x) + reg_inc_beta(b, a, 1 - x) - 1))
    lg = max(_rel(log_gamma_ratio(x + 0.5, x), math.lgamma(x + 0.5) - math.lgamma(x)) for x in (3.0, 11.0, 40.0))
    return worst < 1e-13 and lg < 1e-12, f"reflection {worst:.1e}, gamma ratio {lg:.1e}"


def _cdf() -> tuple[bool, str]:
    h = np.linspace(-0.999, 0.999, 201)
    ok = True
    for fam, beta in [(Family.BETA, 0.0), (Family.BETA, -0.5), (Family.BETA_PRIME, 2.0)]:
        f = np.array([cdf1(fam, beta, x) for x in h])
        ok &= bool(np.all(np.diff(f) > 0)) and abs(f[100] - 0.5) < 1e-14
        ok &= bool(np.allclose(f + f[::-1], 1.0, atol=1e-14))
    m = beta_model(3, 1.0)
    hs = halfspace_content(m, 0.2, Side.BELOW) + halfspace_content(m, 0.2, Side.ABOVE)
    ok &= abs(hs - 1.0) < 1e-14
    return ok, "monotone, symmetric, sides sum to 1" if ok else "CDF invariant broken"


def _quad() -> tuple[bool, str]:
    errs = [
        _rel(integrate_finite(lambda x: np.exp(x), 0.0, 1.0).value, math.e - 1),
        _rel(integrate_finite(lambda x: 1 / np.sqrt(x), 0.0, 1.0).value, 2.0),
        _rel(integrate_real_line(lambda x: 1 / (1 + x * x)).value, math.pi),
        _rel(integrate_real_line(lambda x: np.exp(-x * x)).value, math.sqrt(math.pi)),
    ]
    return max(errs) < 1e-12, f"max rel error {max(errs):.1e}"


def _hull() -> tuple[bool, str]:
    cube = np.array(list(itertools.product([0.0, 1.0], repeat=3)))
    m = convex_hull(np.vstack([cube, [[0.5, 0.5, 0.5]]]))
    ok = abs(volume(m) - 1) < 1e-14 and abs(surface_area(m) - 6) < 1e-14
    ok &= facet_count(m) == 6 and vertex_count(m) == 8
    x = sample_points(beta_model(3, 0.0), 12, stream(5))
    bf = simplicial_facets_batch(x[None])
    ok &= int(bf.is_facet.sum()) == facet_count(convex_hull(x))
    # Euler relation for simplicial 3-polytopes: f2 = 2 f0 - 4
    ok &= facet_count(convex_hull(x)) == 2 * vertex_count(convex_hull(x)) - 4
    return ok, "cube, Euler relation, batch enumeration" if ok else "hull invariant broken"


def _tables() -> tuple[bool, str]:
    res = [check_cell(c) for c in all_cells()]
    bad = [r.cell.name for r in res if not r.passed]
    laws = max(_rel(f().value, v) for _, _, v, f in sphere3_law_cells(50))
    ok = not bad and laws < 1e-9
    return ok, f"{len(res) - len(bad)}/{len(res)} cells, sphere laws {laws:.1e}" + (f"; failing {bad}" if bad else "")


def _identities() -> tuple[bool, str]:
    worst = 0.0
    for model in (beta_model(3, 0.5), beta_model(2, -0.5), beta_prime_model(3, 3.5)):
        for kind in (PolytopeKind.S, PolytopeKind.Q, PolytopeKind.P):
            n = model.dim + 3
            worst = max(worst, _rel(volume_via_T(model, kind, n), expected_volume(model, kind, n)))
    kub = 0.0
    for d in (2, 3, 4):
        m = beta_model(d, 1.0)
        fac = 2 * ball_volume(d - 1) / (d * ball_volume(d))
        kub = max(kub, _rel(expected_mean_width(m, PolytopeKind.P, d + 2),
                            fac * expected_intrinsic_volume(m, PolytopeKind.P, d + 2, 1)))
    return worst < 1e-9 and kub < 1e-12, f"dual route {worst:.1e}, mean width {kub:.1e}"


def _moments() -> tuple[bool, str]:
    miles = simplex_moment(MomentQuery(Family.BETA, 1, 0.0, 1.0))
    return abs(miles - 2 / 3) < 1e-12, f"mean segment length {miles!r}"


def _mc() -> tuple[bool, str]:
    m = sphere_model(3)
    est = estimate(FunctionalSpec.volume(), m, PolytopeKind.P, 4, 4000, 11)
    z = zscore(4 * math.pi / 105, est)
    f = estimate(FunctionalSpec(FunctionalKind.FACET_COUNT), m, PolytopeKind.P, 7, 200, 3)
    ok = abs(z) < 5 and f.mean == 10.0 and f.stderr == 0.0
    return ok, f"volume z = {z:+.2f}, sphere facets {f.mean:g}"


CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "special functions": _specfun,
    "line CDFs": _cdf,
    "quadrature": _quad,
    "hull": _hull,
    "reference tables": _tables,
    "identities": _identities,
    "moments": _moments,
    "monte carlo": _mc,
}


def run_selftest() -> list[Check]:
    out = []
    for name, fn in CHECKS.items():
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # report, keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(Check(name, bool(ok), detail, time.perf_counter() - t0))
    return out
