"""Tile point clouds, rasters, radii, areas, covers, box dimension."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from radixion import tile
from radixion.errors import CapExceeded, DomainError, UsageError
from radixion.tile import TileCloud


def exact_cloud(ns, depth):
    """Exact-Fraction IFS orbit, independent of the vectorized route.

    Multiplication by q is the companion matrix M; each level applies
    M^{-1}(x + b) with the same block order the library uses.
    """
    d = ns.degree
    coeffs = ns.poly.coeffs
    m = [[Fraction(0)] * d for _ in range(d)]
    for k in range(d - 1):
        m[k + 1][k] = Fraction(1)
    for k in range(d):
        m[k][d - 1] = Fraction(-coeffs[k])

    def solve(rhs):
        # Gaussian elimination over Fractions on a copy of M.
        a = [row[:] + [rhs[i]] for i, row in enumerate(m)]
        for col in range(d):
            piv = next(r for r in range(col, d) if a[r][col] != 0)
            a[col], a[piv] = a[piv], a[col]
            inv = 1 / a[col][col]
            a[col] = [v * inv for v in a[col]]
            for r in range(d):
                if r != col and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [v - f * w for v, w in zip(a[r], a[col])]
        return [a[r][d] for r in range(d)]

    pts = [[Fraction(0)] * d]
    for _ in range(depth):
        out = []
        for b in ns.digits:
            for x in pts:
                out.append(solve([xi + bi for xi, bi in zip(x, b)]))
        pts = out
    return pts


@pytest.mark.parametrize("name,depth", [("negabinary", 8), ("knuth", 6), ("five_a", 3)])
def test_points_match_exact_fraction_ifs(request, name, depth):
    ns = request.getfixturevalue(name)
    cloud = tile.tile_points(ns, depth)
    exact = exact_cloud(ns, depth)
    assert cloud.points.shape == (ns.Q**depth, ns.degree)
    for row, ref in zip(cloud.points, exact):
        for v, r in zip(row, ref):
            assert abs(v - float(r)) < 1e-9


def test_cloud_validation(knuth):
    assert tile.tile_points(knuth, 0).points.tolist() == [[0.0, 0.0]]
    with pytest.raises(UsageError):
        tile.tile_points(knuth, 3, space_tag="polar")
    with pytest.raises(UsageError):
        tile.tile_points(knuth, -1)
    with pytest.raises(CapExceeded):
        tile.tile_points(knuth, 30)


def test_embedding_space_is_linear_image(knuth, negabinary):
    coord = tile.tile_points(knuth, 6)
    emb = tile.tile_points(knuth, 6, space_tag="embedding")
    e = tile._embedding_matrix(knuth)
    assert np.allclose(coord.points @ e.T, emb.points, atol=1e-12)
    # degree one: the embedding chart is the coordinate chart
    assert np.allclose(
        tile.tile_points(negabinary, 5, space_tag="embedding").points,
        tile.tile_points(negabinary, 5).points,
    )


# ------------------------------------------------------------- negabinary


def test_negabinary_tile_goldens(negabinary):
    cloud = tile.tile_points(negabinary, 18)
    raster = tile.rasterize(cloud, 1024)
    (lo, hi) = raster.bbox[0]
    cell = (hi - lo) / 1024
    assert abs(lo - (-2.0 / 3.0)) <= cell + 1e-12
    assert abs(hi - (1.0 / 3.0)) <= cell + 1e-12
    assert int(raster.occupancy.sum()) == 1024
    assert abs(tile.area_of(raster) - 1.0) < 0.03
    assert tile.boundary_cell_count(raster) == 2
    radii = tile.tile_radii(negabinary, raster)
    assert radii.r_plus_bound == 1.0
    assert abs(radii.r_minus_estimate - 1.0 / 3.0) < 1e-3
    assert radii.r_minus_estimate <= radii.r_plus_bound
    report = tile.boundary_boxdim(negabinary, (256, 512, 1024), 18)
    assert report.counts == (2, 2, 2)
    assert abs(report.dimension) < 0.05


def test_negabinary_cover_is_full(negabinary):
    assert tile.unique_cover_fraction(negabinary, 18, 1024) >= 0.98


# ------------------------------------------------------------------ knuth


def test_knuth_radii(knuth):
    raster = tile.rasterize(tile.tile_points(knuth, 10), 256)
    radii = tile.tile_radii(knuth, raster)
    assert abs(radii.r_plus_bound - 4.181540550352) < 1e-9
    silver = 1.0 + math.sqrt(2.0)
    assert all(abs(r - silver) < 1e-9 for r in radii.per_embedding)
    assert 0.0 <= radii.r_minus_estimate <= radii.r_plus_bound


def test_radii_preconditions(knuth):
    with pytest.raises(UsageError):
        tile.tile_radii(knuth, tile.rasterize(tile.tile_points(knuth, 6), 128))
    emb = tile.rasterize(tile.tile_points(knuth, 6, space_tag="embedding"), 256)
    with pytest.raises(UsageError):
        tile.tile_radii(knuth, emb)


def test_knuth_area_error_shrinks_with_depth(knuth):
    errors = [abs(tile.area_estimate(knuth, depth, 512) - 1.0) for depth in (10, 12, 14, 16, 18)]
    assert errors == sorted(errors, reverse=True)
    assert errors[-1] < 0.2


@pytest.mark.xfail(
    strict=True,
    reason="a depth-18 cloud leaves pinholes at resolution 1024; the unique-cover"
    " target needs more points per cell",
)
def test_knuth_cover_saturates(knuth):
    assert tile.unique_cover_fraction(knuth, 18, 1024) >= 0.98


def test_knuth_boundary_dimension_band(knuth):
    report = tile.boundary_boxdim(knuth, (64, 128, 256), 18)
    assert report.resolutions == (64, 128, 256)
    assert all(b > a for a, b in zip(report.counts, report.counts[1:]))
    assert 1.2 <= report.dimension <= 1.9


# ------------------------------------------------------------- raster edges


def test_rasterize_single_point(knuth):
    raster = tile.rasterize(tile.tile_points(knuth, 0), 8)
    assert int(raster.occupancy.sum()) == 1
    for lo, hi in raster.bbox:
        assert hi - lo == 1.0


def test_rasterize_rejects_empty_cloud():
    empty = TileCloud(0, np.zeros((0, 2)), "coordinate")
    with pytest.raises(DomainError):
        tile.rasterize(empty, 16)
    with pytest.raises(UsageError):
        tile.rasterize(TileCloud(0, np.zeros((1, 2)), "coordinate"), 0)


def test_boxdim_needs_three_resolutions(knuth):
    with pytest.raises(UsageError):
        tile.boundary_boxdim(knuth, (256, 512), 10)
