"""Fundamental-tile geometry: point clouds, rasters, radii, dimensions.

The tile is the attractor {sum_{j>=1} b_j q^{-j}} of the contractive
system x -> q^{-1}(x + b); depth-k point clouds carry one point per
digit string.  All measure statements live in coordinate space (the
power-basis chart), where the tile has Lebesgue measure exactly 1 and
its integer translates cover the space.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import bulk
from .algebra import _poly_eval
from .caps import ENUM_CAP, effective_cap
from .errors import CapExceeded, DomainError, UsageError
from .numeration import NumberSystem

SPACE_TAGS = ("coordinate", "embedding")


@dataclass(frozen=True)
class TileCloud:
    depth: int
    points: np.ndarray  # (Q^depth, d) float64
    space_tag: str


@dataclass(frozen=True)
class Raster:
    resolution: int  # cells per axis over the tight bounding box
    bbox: tuple  # ((lo, hi), ...) per axis
    occupancy: np.ndarray  # boolean, shape (resolution,) * d
    depth: int
    space_tag: str


@dataclass(frozen=True)
class RadiiReport:
    r_plus_bound: float
    r_minus_estimate: float
    per_embedding: tuple


@dataclass(frozen=True)
class BoxDimReport:
    dimension: float
    residual: float
    resolutions: tuple
    counts: tuple


def _inverse_base_matrix(ns: NumberSystem) -> np.ndarray:
    """Float matrix of multiplication by q^{-1} (exact entries over c_0)."""
    return bulk.u_matrix(ns.poly) / float(ns.poly.coeffs[0])


def _embedding_matrix(ns: NumberSystem) -> np.ndarray:
    """Linear map from power-basis coordinates to embedding coordinates.

    Real embeddings contribute one row; each conjugate pair contributes
    (re, im) of the member encountered first in root order.
    """
    roots = ns.poly.embeddings().roots
    d = ns.degree
    used = [False] * d
    rows = []
    for i, z in enumerate(roots):
        if used[i]:
            continue
        used[i] = True
        powers = [z**k for k in range(d)]
        rows.append([w.real for w in powers])
        if abs(z.imag) > 1e-12:
            for j in range(i + 1, d):
                if not used[j] and abs(roots[j] - z.conjugate()) <= 1e-9 * (1 + abs(z)):
                    used[j] = True
                    break
            rows.append([w.imag for w in powers])
    return np.array(rows)


def tile_points(ns: NumberSystem, depth: int, space_tag: str = "coordinate") -> TileCloud:
    """All Q^depth truncated tile points, in first-digit-major lexicographic order."""
    if space_tag not in SPACE_TAGS:
        raise UsageError("space must be one of %s" % (SPACE_TAGS,))
    if depth < 0:
        raise UsageError("depth must be nonnegative")
    total = ns.Q**depth
    if total > effective_cap(ENUM_CAP):
        raise CapExceeded(
            "cloud of %d points exceeds cap %d" % (total, effective_cap(ENUM_CAP))
        )
    d = ns.degree
    minv_t = _inverse_base_matrix(ns).T
    digits = np.array(ns.digits, dtype=np.float64)
    pts = np.zeros((1, d))
    for _ in range(depth):
        n = len(pts)
        out = np.empty((n * ns.Q, d))
        for t in range(ns.Q):
            np.matmul(pts + digits[t], minv_t, out=out[t * n : (t + 1) * n])
        pts = out
    if space_tag == "embedding":
        pts = pts @ _embedding_matrix(ns).T
    return TileCloud(depth, pts, space_tag)


def rasterize(cloud: TileCloud, resolution: int) -> Raster:
    """Occupancy grid over the tight bounding box of the cloud.

    Degenerate axes (all points equal) are padded by half a unit so a
    single point still lands in exactly one cell.
    """
    if resolution < 1:
        raise UsageError("resolution must be positive")
    pts = cloud.points
    if len(pts) == 0:
        raise DomainError("cannot rasterize an empty cloud")
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    flat = hi - lo <= 0.0
    lo = np.where(flat, lo - 0.5, lo)
    hi = np.where(flat, hi + 0.5, hi)
    idx = (pts - lo) / (hi - lo) * resolution
    idx = np.clip(idx.astype(np.int64), 0, resolution - 1)
    occupancy = np.zeros((resolution,) * pts.shape[1], dtype=bool)
    occupancy[tuple(idx.T)] = True
    return Raster(
        resolution,
        tuple((float(a), float(b)) for a, b in zip(lo, hi)),
        occupancy,
        cloud.depth,
        cloud.space_tag,
    )


def embedding_radii(ns: NumberSystem) -> tuple:
    """Per-embedding attractor radii max_b |b^pi| / (|q^pi| - 1)."""
    return tuple(
        max(abs(_poly_eval(b, z)) for b in ns.digits) / (abs(z) - 1.0)
        for z in ns.poly.embeddings().roots
    )


def _coordinate_box(ns: NumberSystem) -> np.ndarray:
    """Per-coordinate bound implied by the embedding radii."""
    radii = embedding_radii(ns)
    d = ns.degree
    roots = ns.poly.embeddings().roots
    vandermonde = np.array([[z**k for k in range(d)] for z in roots])
    vinv = np.linalg.inv(vandermonde)
    return np.array(
        [sum(abs(vinv[k, p]) * radii[p] for p in range(d)) for k in range(d)]
    )


def tile_radii(ns: NumberSystem, raster: Raster) -> RadiiReport:
    """Outer radius from the digit geometry, inner radius from the raster."""
    if raster.resolution < 256:
        raise UsageError("radius estimation needs resolution >= 256")
    if raster.space_tag != "coordinate":
        raise UsageError("radius estimation needs a coordinate-space raster")
    r_plus = float(np.linalg.norm(_coordinate_box(ns)))
    return RadiiReport(r_plus, _inner_radius(raster), embedding_radii(ns))


def _inner_radius(raster: Raster) -> float:
    """Radius of the largest origin ball fully covered by occupied cells."""
    occ = raster.occupancy
    d = occ.ndim
    res = raster.resolution
    lo = np.array([b[0] for b in raster.bbox])
    hi = np.array([b[1] for b in raster.bbox])
    edge = min(min(-lo[k], hi[k]) for k in range(d))
    if edge <= 0.0:
        return 0.0  # origin not interior to the raster window
    cell = (hi - lo) / res
    dist2 = np.zeros((1,) * d)
    for k in range(d):
        starts = lo[k] + np.arange(res) * cell[k]
        dk = np.maximum(np.maximum(starts, -(starts + cell[k])), 0.0)
        shape = [1] * d
        shape[k] = res
        dist2 = dist2 + (dk * dk).reshape(shape)
    empty = ~occ
    if empty.any():
        nearest = math.sqrt(float(dist2[empty].min()))
    else:
        nearest = math.inf
    return float(min(nearest, edge))


def cell_area(raster: Raster) -> float:
    spans = [b[1] - b[0] for b in raster.bbox]
    return float(np.prod([s / raster.resolution for s in spans]))


def area_of(raster: Raster) -> float:
    return float(raster.occupancy.sum()) * cell_area(raster)


def area_estimate(ns: NumberSystem, depth: int, resolution: int) -> float:
    """Occupied-cell area of the depth-truncated tile, coordinate units."""
    return area_of(rasterize(tile_points(ns, depth), resolution))


def cover_fraction(raster: Raster, samples: int = 10**4, seed: int = 0) -> float:
    """Fraction of random unit-cell points claimed by exactly one translate.

    Full tiling means almost every point of [0,1)^d belongs to exactly
    one integer translate of the tile; the raster stands in for the tile.
    """
    occ = raster.occupancy
    d = occ.ndim
    res = raster.resolution
    lo = np.array([b[0] for b in raster.bbox])
    hi = np.array([b[1] for b in raster.bbox])
    cell = (hi - lo) / res
    rng = np.random.default_rng(seed)
    pts = rng.random((samples, d))
    claims = np.zeros(samples, dtype=np.int64)
    ranges = [
        range(math.ceil(-hi[k]), math.floor(1.0 - lo[k]) + 1) for k in range(d)
    ]
    for a in itertools.product(*ranges):
        idx = np.floor((pts - np.array(a) - lo) / cell).astype(np.int64)
        inside = ((idx >= 0) & (idx < res)).all(axis=1)
        hit = np.zeros(samples, dtype=bool)
        sel = tuple(idx[inside].T)
        hit[inside] = occ[sel]
        claims += hit
    return float((claims == 1).mean())


def unique_cover_fraction(
    ns: NumberSystem, depth: int, resolution: int, samples: int = 10**4, seed: int = 0
) -> float:
    return cover_fraction(rasterize(tile_points(ns, depth), resolution), samples, seed)


def boundary_cell_count(raster: Raster) -> int:
    """Occupied cells with an unoccupied 2d-neighbor (outside counts as empty)."""
    occ = raster.occupancy
    d = occ.ndim
    padded = np.pad(occ, 1, constant_values=False)
    core = tuple(slice(1, -1) for _ in range(d))
    boundary = np.zeros_like(occ)
    for k in range(d):
        for step in (1, -1):
            sl = list(core)
            sl[k] = slice(1 + step, padded.shape[k] - 1 + step)
            boundary |= occ & ~padded[tuple(sl)]
    return int(boundary.sum())


def boundary_boxdim(ns: NumberSystem, resolutions, depth: int) -> BoxDimReport:
    """Box-counting slope of the tile boundary across raster resolutions."""
    resolutions = sorted(int(r) for r in resolutions)
    if len(resolutions) < 3:
        raise UsageError("box dimension needs at least 3 resolutions")
    cloud = tile_points(ns, depth)
    counts = [boundary_cell_count(rasterize(cloud, r)) for r in resolutions]
    logs_r = np.log(np.array(resolutions, dtype=np.float64))
    logs_c = np.log(np.array(counts, dtype=np.float64))
    coeffs, residuals, *_ = np.polyfit(logs_r, logs_c, 1, full=True)
    residual = float(residuals[0]) if len(residuals) else 0.0
    return BoxDimReport(float(coeffs[0]), residual, tuple(resolutions), tuple(counts))
