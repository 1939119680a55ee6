"""Monte Carlo estimates of expected functionals of random beta polytopes.

Samples are processed in fixed-size chunks; chunk ``i`` draws from
``stream(seed, i)`` and the per-chunk means and sums of squares are merged
in chunk order, so an estimate depends only on its inputs and seed and not
on how many worker threads ran.  ``BETAPOLY_THREADS`` caps the thread count.

Each chunk is evaluated in one shot by the batch facet enumerator when the
cloud is small enough, and hull by hull otherwise.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .betadist import Model, sample_points, stream
from .expectations import FunctionalKind, FunctionalSpec, PolytopeKind
from .hull import (
    DegenerateHull,
    convex_hull,
    facet_count,
    project_cloud,
    simplicial_facets_batch,
    surface_area,
    t_functional_of,
    vertex_count,
    volume,
    width_along,
)
from .specfun import ball_volume

__all__ = ["Estimate", "estimate", "zscore", "point_set", "worker_count", "kubota_factor"]

_BATCH_BUDGET = 4_000_000  # elements of the (chunk, subsets, points) side array
_MAX_CHUNK = 4096
_RETRIES = 20


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    samples: int
    seed: int
    degenerate: int = 0

    def __str__(self) -> str:
        return f"{self.mean:.10g} +- {self.stderr:.3g} (samples={self.samples}, seed={self.seed})"


def zscore(exact: float, est: Estimate) -> float:
    if not est.stderr > 0:
        raise ZeroDivisionError(
            "estimate has zero standard error; the functional is deterministic here, compare exact values instead"
        )
    return (est.mean - exact) / est.stderr


def worker_count() -> int:
    cap = os.environ.get("BETAPOLY_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ValueError(f"BETAPOLY_THREADS must be a positive integer, got {cap!r}") from None
    return n


def kubota_factor(d: int, k: int) -> float:
    """V_k(K) = factor * E Vol_k(projection of K on a uniform random k-subspace)."""
    return math.comb(d, k) * ball_volume(d) / (ball_volume(k) * ball_volume(d - k))


def point_set(x: np.ndarray, kind: PolytopeKind) -> np.ndarray:
    """Append antipodes (S) or the origin (Q) along the point axis of ``x`` (..., n, d)."""
    if kind is PolytopeKind.S:
        return np.concatenate([x, -x], axis=-2)
    if kind is PolytopeKind.Q:
        zero = np.zeros(x.shape[:-2] + (1, x.shape[-1]))
        return np.concatenate([x, zero], axis=-2)
    return x


def _frames(rng: np.random.Generator, shape: tuple, d: int, k: int) -> np.ndarray:
    g = rng.standard_normal(shape + (d, k))
    q, r = np.linalg.qr(g)
    # sign fix makes the frame Haar distributed
    return q * np.sign(np.diagonal(r, axis1=-2, axis2=-1))[..., None, :]


def _batch_volume(pts: np.ndarray, antipodal: Optional[int]):
    bf = simplicial_facets_batch(pts, antipodal=antipodal)
    k = pts.shape[-1]
    heights = bf.offsets - np.einsum("bmd,bd->bm", np.nan_to_num(bf.normals), bf.interior)
    vol = np.where(bf.is_facet, heights * bf.areas, 0.0).sum(axis=1) / k
    return vol, bf.degenerate


def _batch_values(spec: FunctionalSpec, pts: np.ndarray, kind: PolytopeKind, n: int, rng, m: int):
    """Functional values and degeneracy flags for a (B, N, d) block of point sets."""
    bsz, _, d = pts.shape
    anti = n if kind is PolytopeKind.S else None
    fk = spec.kind
    if fk is FunctionalKind.MEAN_WIDTH or (fk is FunctionalKind.INTRINSIC_VOLUME and spec.k == 1):
        u = rng.standard_normal((bsz, m, d))
        u /= np.linalg.norm(u, axis=-1, keepdims=True)
        proj = np.einsum("bnd,bmd->bmn", pts, u)
        w = (proj.max(axis=-1) - proj.min(axis=-1)).mean(axis=1)
        if fk is FunctionalKind.INTRINSIC_VOLUME:
            w = w * kubota_factor(d, 1)
        return w, np.zeros(bsz, dtype=bool)
    if fk is FunctionalKind.INTRINSIC_VOLUME and spec.k < d:
        k = spec.k
        fr = _frames(rng, (bsz, m), d, k)
        proj = np.einsum("bnd,bmdk->bmnk", pts, fr).reshape(bsz * m, pts.shape[1], k)
        vol, deg = _batch_volume(proj, anti)
        vol = vol.reshape(bsz, m).mean(axis=1) * kubota_factor(d, k)
        return vol, deg.reshape(bsz, m).any(axis=1)
    if fk in (FunctionalKind.VOLUME, FunctionalKind.INTRINSIC_VOLUME):
        return _batch_volume(pts, anti)
    bf = simplicial_facets_batch(pts, antipodal=anti)
    if fk is FunctionalKind.SURFACE_AREA:
        val = np.where(bf.is_facet, bf.areas, 0.0).sum(axis=1)
    elif fk is FunctionalKind.FACET_COUNT:
        val = bf.is_facet.sum(axis=1).astype(float)
    elif fk is FunctionalKind.VERTEX_COUNT:
        hit = np.zeros(pts.shape[:2], dtype=bool)
        rows, cols = np.nonzero(bf.is_facet)
        for j in range(d):
            hit[rows, bf.subsets[cols, j]] = True
        val = hit.sum(axis=1).astype(float)
    elif fk is FunctionalKind.T_FUNCTIONAL:
        with np.errstate(invalid="ignore"):
            term = np.abs(bf.offsets) ** spec.a * bf.areas ** spec.b
        val = np.where(bf.is_facet, term, 0.0).sum(axis=1)
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unsupported functional {fk}")
    return val, bf.degenerate


def _mesh_value(spec: FunctionalSpec, pts: np.ndarray, rng, m: int) -> Optional[float]:
    d = pts.shape[1]
    fk = spec.kind
    if fk is FunctionalKind.MEAN_WIDTH or (fk is FunctionalKind.INTRINSIC_VOLUME and spec.k == 1):
        u = rng.standard_normal((m, d))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        w = float(np.mean([width_along(pts, v) for v in u]))
        return w * kubota_factor(d, 1) if fk is FunctionalKind.INTRINSIC_VOLUME else w
    if fk is FunctionalKind.INTRINSIC_VOLUME and spec.k < d:
        acc = []
        for fr in _frames(rng, (m,), d, spec.k):
            mesh = convex_hull(project_cloud(pts, spec.k, fr))
            if isinstance(mesh, DegenerateHull):
                return None
            acc.append(volume(mesh))
        return float(np.mean(acc)) * kubota_factor(d, spec.k)
    mesh = convex_hull(pts)
    if isinstance(mesh, DegenerateHull):
        return None
    if fk in (FunctionalKind.VOLUME, FunctionalKind.INTRINSIC_VOLUME):
        return volume(mesh)
    if fk is FunctionalKind.SURFACE_AREA:
        return surface_area(mesh)
    if fk is FunctionalKind.FACET_COUNT:
        return float(facet_count(mesh))
    if fk is FunctionalKind.VERTEX_COUNT:
        return float(vertex_count(mesh))
    return t_functional_of(mesh, spec.a, spec.b)


def _use_batch(spec: FunctionalSpec, npts: int, d: int) -> bool:
    k = spec.k if spec.kind is FunctionalKind.INTRINSIC_VOLUME else d
    return math.comb(npts, k) * npts <= _BATCH_BUDGET // 8


def _chunk_size(spec: FunctionalSpec, npts: int, d: int, m: int) -> int:
    if not _use_batch(spec, npts, d):
        return 256
    k = spec.k if spec.kind is FunctionalKind.INTRINSIC_VOLUME else d
    per = math.comb(npts, k) * npts * (m if k < d else 1)
    return int(max(16, min(_MAX_CHUNK, _BATCH_BUDGET // max(per, 1))))


def _draw(model: Model, kind: PolytopeKind, n: int, count: int, rng) -> np.ndarray:
    x = sample_points(model, count * n, rng).reshape(count, n, model.dim)
    return point_set(x, kind)


def _run_chunk(spec, model, kind, n, size, seed, index, m, batch):
    rng = stream(seed, index)
    vals = np.empty(size)
    todo = np.arange(size)
    lost = 0
    for attempt in range(_RETRIES + 1):
        pts = _draw(model, kind, n, len(todo), rng)
        if batch:
            v, bad = _batch_values(spec, pts, kind, n, rng, m)
        else:
            out = [_mesh_value(spec, p, rng, m) for p in pts]
            bad = np.array([o is None for o in out])
            v = np.array([np.nan if o is None else o for o in out])
        vals[todo[~bad]] = v[~bad]
        todo = todo[bad]
        if len(todo) == 0:
            break
        lost += len(todo)
    if len(todo):
        vals = np.delete(vals, todo)
    cnt = len(vals)
    mean = float(np.mean(vals)) if cnt else 0.0
    m2 = float(np.sum((vals - mean) ** 2)) if cnt else 0.0
    return cnt, mean, m2, lost


def _merge(acc, part):
    n1, m1, s1 = acc
    n2, m2, s2 = part
    if n2 == 0:
        return acc
    if n1 == 0:
        return part
    n = n1 + n2
    delta = m2 - m1
    return n, m1 + delta * n2 / n, s1 + s2 + delta * delta * n1 * n2 / n


def estimate(
    functional: FunctionalSpec,
    model: Model,
    kind: PolytopeKind,
    n: int,
    samples: int,
    seed: int,
    m_dirs: int = 8,
    workers: Optional[int] = None,
) -> Estimate:
    """Mean and standard error of ``functional`` over ``samples`` random polytopes."""
    d = model.dim
    # antipodes or the origin complete d points to a full-dimensional set
    least = d + 1 if kind is PolytopeKind.P else d
    if int(n) != n or n < least:
        raise ValueError(f"kind {kind.value} needs n >= {least} points, got {n}")
    if d > 6:
        raise ValueError(f"Monte Carlo supports d <= 6, got d = {d}")
    if samples < 100:
        raise ValueError(f"need at least 100 samples, got {samples}")
    if m_dirs < 1:
        raise ValueError("m_dirs must be >= 1")
    if functional.kind is FunctionalKind.INTRINSIC_VOLUME and functional.k > d:
        raise ValueError(f"intrinsic volume order k = {functional.k} exceeds d = {d}")
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    n = int(n)
    npts = len(point_set(np.zeros((n, d)), kind))
    batch = _use_batch(functional, npts, d)
    size = _chunk_size(functional, npts, d, m_dirs)
    sizes = [size] * (samples // size) + ([samples % size] if samples % size else [])
    jobs = [(functional, model, kind, n, s, seed, i, m_dirs, batch) for i, s in enumerate(sizes)]
    nw = worker_count() if workers is None else max(1, int(workers))
    if nw > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=nw) as pool:
            parts = list(pool.map(lambda j: _run_chunk(*j), jobs))
    else:
        parts = [_run_chunk(*j) for j in jobs]
    acc = (0, 0.0, 0.0)
    lost = 0
    for cnt, mean, m2, bad in parts:
        acc = _merge(acc, (cnt, mean, m2))
        lost += bad
    cnt, mean, m2 = acc
    if cnt < 2:
        raise ArithmeticError("fewer than two non-degenerate samples")
    std = math.sqrt(m2 / (cnt - 1))
    return Estimate(mean, std / math.sqrt(cnt), cnt, seed, lost)
