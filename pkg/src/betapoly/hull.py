"""Convex hulls in R^d for small d, and the functionals measured on them.

:func:`convex_hull` is an incremental beneath-beyond construction.  It keeps
an outward-oriented simplicial triangulation of the boundary; parallel
simplices that share a supporting hyperplane are merged into one facet at
the end, and the facet's vertices are found by a hull one dimension down.

Orientation predicates run in floating point first.  When the float
determinant is too close to zero to trust relative to the size of its
inputs, the sign is recomputed exactly in rational arithmetic, which is
possible because every double is a dyadic rational.  An exact zero (a
point on the hyperplane of a facet) counts as "not visible", so ties resolve
in favour of the points inserted earlier.

:func:`simplicial_facets_batch` is the Monte Carlo workhorse.  It
enumerates the d-subsets of many small point clouds at once and keeps the
subsets whose hyperplane leaves every other point on one side.  For points
in general position, which the continuous models produce with probability
one, these are exactly the facets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

__all__ = [
    "PointCloud",
    "Facet",
    "HullMesh",
    "DegenerateHull",
    "DegenerateHullError",
    "convex_hull",
    "volume",
    "surface_area",
    "facet_count",
    "vertex_count",
    "t_functional_of",
    "width_along",
    "project_cloud",
    "BatchFacets",
    "simplicial_facets_batch",
]

_RANK_TOL = 1e-10
_FLOAT_TRUST = 1e-9
_COPLANAR_TOL = 1e-9


class DegenerateHullError(ValueError):
    """A full-dimensional functional was requested on a lower-dimensional hull."""


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim != 2:
            raise ValueError(f"point cloud must be a 2-d array of shape (n, d), got shape {pts.shape}")
        if pts.shape[1] < 1:
            raise ValueError("points need at least one coordinate")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "dim", pts.shape[1])

    def __len__(self) -> int:
        return self.points.shape[0]


def _as_cloud(cloud) -> PointCloud:
    return cloud if isinstance(cloud, PointCloud) else PointCloud(np.asarray(cloud, dtype=float))


@dataclass(frozen=True)
class Facet:
    vertices: tuple[int, ...]
    normal: np.ndarray
    offset: float
    area: float


@dataclass(frozen=True)
class HullMesh:
    """Facet-complete hull of a full-dimensional cloud.

    ``vertices`` and facet vertex sets index the input cloud.  ``simplices``
    is the outward-oriented boundary triangulation, ``(m, d)`` indices; every
    facet is the union of the simplices with its hyperplane.
    """

    cloud: PointCloud
    vertices: tuple[int, ...]
    facets: tuple[Facet, ...]
    simplices: np.ndarray

    @property
    def dim(self) -> int:
        return self.cloud.dim


@dataclass(frozen=True)
class DegenerateHull:
    """Outcome for clouds whose affine hull is not all of R^d."""

    cloud: PointCloud
    affine_dim: int


# ------------------------------------------------------------- predicates

def _exact_det(rows: Sequence[Sequence[float]]) -> Fraction:
    """Determinant of a small float matrix in exact rational arithmetic."""
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def _cofactor_normal(edges: np.ndarray) -> np.ndarray:
    """N with det([edges; x]) = N . x, for (d-1) edge rows in R^d."""
    d = edges.shape[-1]
    if d == 1:
        return np.ones(edges.shape[:-2] + (1,))
    if d == 2:
        e = edges[..., 0, :]
        return np.stack([-e[..., 1], e[..., 0]], axis=-1)
    if d == 3:
        return np.cross(edges[..., 0, :], edges[..., 1, :])
    out = np.empty(edges.shape[:-2] + (d,))
    for i in range(d):
        minor = np.delete(edges, i, axis=-1)
        out[..., i] = (-1) ** (d - 1 + i) * np.linalg.det(minor)
    return out


class _Simplex:
    __slots__ = ("verts", "normal", "offset", "sign")

    def __init__(self, verts: tuple[int, ...], normal: np.ndarray, offset: float, sign: int):
        self.verts = verts
        self.normal = normal  # outward, unnormalised
        self.offset = offset
        self.sign = sign  # outward normal = sign * cofactor normal of verts in this order


def _orient(pts: np.ndarray, verts: tuple[int, ...], p: np.ndarray) -> int:
    """Sign of det([v_2 - v_1, ..., v_d - v_1, p - v_1]), exact when close."""
    v0 = pts[verts[0]]
    edges = pts[list(verts[1:])] - v0
    rows = np.vstack([edges, p - v0]) if len(verts) > 1 else (p - v0)[None, :]
    det = float(np.linalg.det(rows)) if rows.shape[0] > 1 else float(rows[0, 0])
    scale = float(np.prod(np.linalg.norm(rows, axis=1)))
    if abs(det) > _FLOAT_TRUST * scale:
        return 1 if det > 0 else -1
    ex = _exact_det(rows.tolist())
    return (ex > 0) - (ex < 0)


def _make_simplex(pts: np.ndarray, verts: tuple[int, ...], interior: np.ndarray) -> _Simplex:
    v0 = pts[verts[0]]
    edges = pts[list(verts[1:])] - v0
    n = _cofactor_normal(edges) if len(verts) > 1 else np.ones(1)
    s = -_orient(pts, verts, interior)
    if s == 0:
        raise ArithmeticError("interior reference point lies on a boundary hyperplane")
    normal = s * n
    return _Simplex(verts, normal, float(normal @ v0), s)


def _visible(pts: np.ndarray, sx: _Simplex, p: np.ndarray) -> bool:
    val = float(sx.normal @ p) - sx.offset
    scale = float(np.linalg.norm(sx.normal)) * (float(np.linalg.norm(p - pts[sx.verts[0]])) + 1e-300)
    if abs(val) > _FLOAT_TRUST * scale:
        return val > 0
    return sx.sign * _orient(pts, sx.verts, p) > 0


# ------------------------------------------------------------- hull

def _affine_rank(pts: np.ndarray) -> int:
    if len(pts) <= 1:
        return 0
    centred = pts - pts.mean(axis=0)
    sv = np.linalg.svd(centred, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > _RANK_TOL * sv[0]))


def _initial_simplex(pts: np.ndarray) -> list[int]:
    d = pts.shape[1]
    first = int(np.lexsort(pts.T[::-1])[0])
    chosen = [first]
    for _ in range(d):
        base = pts[chosen[0]]
        if len(chosen) > 1:
            q, _ = np.linalg.qr((pts[chosen[1:]] - base).T)
            rel = pts - base
            resid = rel - (rel @ q) @ q.T
        else:
            resid = pts - base
        dist = np.linalg.norm(resid, axis=1)
        dist[chosen] = -1.0
        chosen.append(int(np.argmax(dist)))
    return chosen


def _lower_hull_vertices(pts: np.ndarray, idx: list[int], normal: np.ndarray) -> tuple[int, ...]:
    """Vertices of the (d-1)-dimensional hull of coplanar points pts[idx]."""
    d = pts.shape[1]
    sub = pts[idx]
    if d == 1:
        return tuple(idx)
    u = normal / np.linalg.norm(normal)
    # orthonormal basis of the hyperplane direction space
    q, _ = np.linalg.qr(np.column_stack([u, np.eye(d)]))
    basis = q[:, 1:d]
    coords = (sub - sub[0]) @ basis
    if d == 2:
        t = coords[:, 0]
        return tuple(sorted({idx[int(np.argmin(t))], idx[int(np.argmax(t))]}))
    inner = convex_hull(PointCloud(coords))
    if isinstance(inner, DegenerateHull):  # pragma: no cover - facets span their hyperplane
        raise ArithmeticError("merged facet points do not span their hyperplane")
    return tuple(sorted(idx[i] for i in inner.vertices))


def convex_hull(cloud) -> Union[HullMesh, DegenerateHull]:
    """Hull of a point cloud; lower-dimensional input yields :class:`DegenerateHull`."""
    cloud = _as_cloud(cloud)
    pts = cloud.points
    d = cloud.dim
    if len(pts) < d + 1 or _affine_rank(pts) < d:
        return DegenerateHull(cloud, _affine_rank(pts))
    if d == 1:
        lo, hi = int(np.argmin(pts[:, 0])), int(np.argmax(pts[:, 0]))
        facets = (
            Facet((lo,), np.array([-1.0]), float(-pts[lo, 0]), 1.0),
            Facet((hi,), np.array([1.0]), float(pts[hi, 0]), 1.0),
        )
        return HullMesh(cloud, tuple(sorted({lo, hi})), facets, np.array([[lo], [hi]]))

    init = _initial_simplex(pts)
    interior = pts[init].mean(axis=0)
    simplices: dict[int, _Simplex] = {}
    key = itertools.count()
    for drop in range(d + 1):
        verts = tuple(v for j, v in enumerate(init) if j != drop)
        simplices[next(key)] = _make_simplex(pts, verts, interior)

    in_init = set(init)
    for i in range(len(pts)):
        if i in in_init:
            continue
        p = pts[i]
        visible = [k for k, sx in simplices.items() if _visible(pts, sx, p)]
        if not visible:
            continue
        ridge_count: dict[frozenset, int] = {}
        ridge_order: dict[frozenset, tuple[int, ...]] = {}
        for k in visible:
            vs = simplices[k].verts
            for drop in range(d):
                r = vs[:drop] + vs[drop + 1:]
                fr = frozenset(r)
                ridge_count[fr] = ridge_count.get(fr, 0) + 1
                ridge_order[fr] = r
        for k in visible:
            del simplices[k]
        for fr, c in ridge_count.items():
            if c == 1:
                simplices[next(key)] = _make_simplex(pts, ridge_order[fr] + (i,), interior)

    sims = list(simplices.values())
    # group coplanar simplices into facets
    units = []
    for sx in sims:
        nn = np.linalg.norm(sx.normal)
        units.append((sx.normal / nn, sx.offset / nn, nn))
    scale = float(np.max(np.abs(pts))) or 1.0
    groups: list[list[int]] = []
    reps: list[tuple[np.ndarray, float]] = []
    for j, (u, off, _) in enumerate(units):
        for g, (ru, roff) in enumerate(reps):
            if float(u @ ru) > 1.0 - _COPLANAR_TOL and abs(off - roff) <= _COPLANAR_TOL * scale:
                groups[g].append(j)
                break
        else:
            groups.append([j])
            reps.append((u, off))

    fact = math.factorial(d - 1)
    facets = []
    for g, members in enumerate(groups):
        u, off = reps[g]
        idx = sorted({v for j in members for v in sims[j].verts})
        area = math.fsum(units[j][2] for j in members) / fact
        verts = tuple(idx) if len(members) == 1 else _lower_hull_vertices(pts, idx, u)
        facets.append(Facet(verts, u, off, area))
    vertices = tuple(sorted({v for f in facets for v in f.vertices}))
    oriented = np.array([sx.verts for sx in sims], dtype=int)
    return HullMesh(cloud, vertices, tuple(facets), oriented)


# ------------------------------------------------------------- functionals

def _full(mesh) -> HullMesh:
    if isinstance(mesh, DegenerateHull):
        raise DegenerateHullError(
            f"hull has affine dimension {mesh.affine_dim} < {mesh.cloud.dim}; the functional needs a full-dimensional body"
        )
    return mesh


def volume(mesh) -> float:
    """d-volume as a sum of cones over facets from the centroid of the vertices."""
    mesh = _full(mesh)
    c = mesh.cloud.points[list(mesh.vertices)].mean(axis=0)
    d = mesh.dim
    return math.fsum((f.offset - float(f.normal @ c)) * f.area for f in mesh.facets) / d


def surface_area(mesh) -> float:
    mesh = _full(mesh)
    if mesh.dim == 1:
        return 2.0
    return math.fsum(f.area for f in mesh.facets)


def facet_count(mesh) -> int:
    return len(_full(mesh).facets)


def vertex_count(mesh) -> int:
    return len(_full(mesh).vertices)


def t_functional_of(mesh, a: float, b: float, origin: Optional[Sequence[float]] = None) -> float:
    """Sum over facets of eta^a Vol_{d-1}^b, eta the distance of the facet hyperplane to ``origin``."""
    mesh = _full(mesh)
    if not (a >= 0 and b >= 0):
        raise ValueError("T-functional exponents must satisfy a, b >= 0")
    o = np.zeros(mesh.dim) if origin is None else np.asarray(origin, dtype=float)
    return math.fsum(abs(f.offset - float(f.normal @ o)) ** a * f.area ** b for f in mesh.facets)


def width_along(cloud, direction) -> float:
    """max <u, x_i> - min <u, x_i>."""
    cloud = _as_cloud(cloud)
    if len(cloud) == 0:
        raise ValueError("width of an empty cloud")
    u = np.asarray(direction, dtype=float)
    if u.shape != (cloud.dim,):
        raise ValueError(f"direction must have shape ({cloud.dim},)")
    t = cloud.points @ u
    return float(t.max() - t.min())


def project_cloud(cloud, k: int, frame) -> PointCloud:
    """Coordinates of the points in an orthonormal k-frame (columns of a d x k matrix)."""
    cloud = _as_cloud(cloud)
    fr = np.asarray(frame, dtype=float)
    if fr.ndim == 1:
        fr = fr[:, None]
    if fr.shape != (cloud.dim, k) or not 1 <= k <= cloud.dim:
        raise ValueError(f"frame must be a ({cloud.dim}, {k}) matrix with 1 <= k <= d")
    gram = fr.T @ fr
    if np.max(np.abs(gram - np.eye(k))) > 1e-10:
        raise ValueError("frame columns are not orthonormal")
    return PointCloud(cloud.points @ fr)


# ------------------------------------------------------------- batch engine

@dataclass(frozen=True)
class BatchFacets:
    """Simplicial facets of B clouds of N points in R^d.

    ``subsets`` is the (M, d) index array of candidate subsets; ``is_facet``
    (B, M) marks the facets.  ``normals`` are outward unit normals,
    ``offsets`` signed offsets from the origin and ``areas`` the (d-1)-volumes.
    ``degenerate`` flags clouds with a point on a candidate hyperplane or an
    affinely dependent subset, for which the enumeration is not trusted.
    """

    subsets: np.ndarray
    is_facet: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    areas: np.ndarray
    interior: np.ndarray
    degenerate: np.ndarray


_SUBSET_CACHE: dict[tuple, np.ndarray] = {}


def _subsets(npts: int, d: int, antipodal: Optional[int]) -> np.ndarray:
    key = (npts, d, antipodal)
    got = _SUBSET_CACHE.get(key)
    if got is None:
        combos = np.array(list(itertools.combinations(range(npts), d)), dtype=np.intp)
        if antipodal is not None:
            base = combos % antipodal
            srt = np.sort(base, axis=1)
            keep = np.all(srt[:, 1:] != srt[:, :-1], axis=1) if d > 1 else np.ones(len(combos), bool)
            combos = combos[keep]
        got = combos
        _SUBSET_CACHE[key] = got
    return got


def simplicial_facets_batch(points: np.ndarray, antipodal: Optional[int] = None, rtol: float = 1e-10) -> BatchFacets:
    """Enumerate simplicial facets of each cloud in ``points`` (B, N, d).

    ``antipodal=n`` declares that point ``j + n`` is ``-point j`` (symmetric
    hulls); subsets containing such a pair are skipped since their
    hyperplane passes through the interior point 0.
    """
    x = np.asarray(points, dtype=float)
    bsz, npts, d = x.shape
    subs = _subsets(npts, d, antipodal)
    interior = x.mean(axis=1)
    fac = math.factorial(d - 1)
    if d == 1:
        v = x[:, subs[:, 0], 0]  # (B, M)
        lo = x[:, :, 0].min(axis=1, keepdims=True)
        hi = x[:, :, 0].max(axis=1, keepdims=True)
        is_lo = v == lo
        is_hi = v == hi
        normals = np.where(is_hi, 1.0, -1.0)[..., None]
        offsets = normals[..., 0] * v
        cnt = np.sum(x[:, :, 0] == lo, axis=1) + np.sum(x[:, :, 0] == hi, axis=1)
        return BatchFacets(subs, is_lo | is_hi, normals, offsets, np.ones_like(v), interior, cnt != 2)
    verts = x[:, subs, :]  # (B, M, d, d)
    edges = verts[:, :, 1:, :] - verts[:, :, :1, :]
    nvec = _cofactor_normal(edges)  # (B, M, d)
    nnorm = np.linalg.norm(nvec, axis=-1)
    off = np.einsum("bmd,bmd->bm", nvec, verts[:, :, 0, :])
    side = np.matmul(nvec, x.transpose(0, 2, 1)) - off[..., None]  # (B, M, N)
    scale = np.max(np.abs(x), axis=(1, 2)) + 1e-300
    tol = rtol * nnorm * scale[:, None]
    # members sit on their own hyperplane, so they count as ties and never as sides
    above = side.max(axis=-1) > tol
    below = side.min(axis=-1) < -tol
    on = np.count_nonzero(np.abs(side) <= tol[..., None], axis=-1)
    tie = on > d
    flat = nnorm <= rtol * scale[:, None] ** (d - 1)
    is_facet = ~(above & below) & ~tie & ~flat
    # orient outward: interior point on the negative side
    c_side = np.einsum("bmd,bd->bm", nvec, interior) - off
    sgn = np.where(c_side > 0, -1.0, 1.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        unit = nvec * (sgn / nnorm)[..., None]
        offsets = off * sgn / nnorm
    degenerate = np.any(tie | flat, axis=1)
    return BatchFacets(subs, is_facet, unit, offsets, nnorm / fac, interior, degenerate)
