"""Gauss quadrature vs crossing combinatorics for linking numbers."""

import numpy as np
import pytest

from vortexlink.curves import PolygonalCurve, borromean_rings, circle, hopf_link, split_link
from vortexlink.errors import CurvesIntersect, DegenerateProjection
from vortexlink.linking import (
    crossing_linking,
    find_crossings,
    gauss_linking,
    gauss_writhe,
    stable_crossing_linking,
    writhe_framing,
)

HOPF = hopf_link(centered=False)
DIRS = np.random.default_rng(11).standard_normal((20, 3))


def test_hopf_gauss_vs_crossing():
    c1, c2 = HOPF.components
    lk = gauss_linking(c1, c2)
    n = crossing_linking(c1, c2, (0.13, 0.21, 0.95))
    assert abs(n) == 1
    assert abs(lk - n) < 1e-3


def test_split_pair_zero():
    c1, c2 = split_link().components
    assert abs(gauss_linking(c1, c2)) < 1e-3
    assert crossing_linking(c1, c2, (0.1, 0.2, 0.97)) == 0


def test_borromean_pairs_zero():
    comps = borromean_rings().components
    for i in range(3):
        for j in range(i + 1, 3):
            assert abs(gauss_linking(comps[i], comps[j])) < 1e-3
            assert crossing_linking(comps[i], comps[j], (0.11, 0.23, 0.96)) == 0


def test_crossing_direction_independence():
    c1, c2 = HOPF.components
    values = set()
    for d in DIRS:
        try:
            values.add(crossing_linking(c1, c2, d))
        except DegenerateProjection:
            continue
    assert len(values) == 1


def test_orientation_reversal_negates():
    c1, c2 = HOPF.components
    d = (0.17, -0.08, 0.98)
    assert crossing_linking(c1.reversed(), c2, d) == -crossing_linking(c1, c2, d)
    lk = gauss_linking(c1, c2)
    assert abs(gauss_linking(c1.reversed(), c2) + lk) < 2e-3


def test_gauss_symmetry():
    c1, c2 = HOPF.components
    assert gauss_linking(c1, c2) == gauss_linking(c2, c1)


def test_random_circle_pairs_agree(rng):
    made = 0
    while made < 8:
        center = rng.uniform(-1.0, 1.0, size=3)
        normal = rng.standard_normal(3)
        r1, r2 = rng.uniform(0.6, 1.4, size=2)
        c1 = circle((0, 0, 0), (0, 0, 1), r1, n_samples=128)
        c2 = circle(center, normal, r2, n_samples=128)
        try:
            lk = gauss_linking(c1, c2)
            n = stable_crossing_linking(c1, c2, rng)
        except (CurvesIntersect, DegenerateProjection):
            continue
        made += 1
        assert abs(lk - n) < 1e-3, (center, normal, r1, r2)


def test_intersecting_curves_rejected():
    c1 = circle((0, 0, 0), (0, 0, 1), 1.0)
    c2 = circle((0, 0, 0), (0, 1, 0), 1.0)  # meets c1 at (+-1, 0, 0)
    with pytest.raises(CurvesIntersect):
        gauss_linking(c1, c2)


def test_degenerate_projection_detected():
    c1 = circle((0, 0, 0), (0, 0, 1), 1.0, n_samples=64)
    c2 = circle((0, 0, 0.5), (0, 0, 1), 1.0, n_samples=64)  # identical shadow
    with pytest.raises(DegenerateProjection):
        find_crossings([c1, c2], (0, 0, 1.0))


def test_planar_convex_curve_framing_and_writhe():
    c = circle((0, 0, 0), (0, 0, 1), 1.0, n_samples=128)
    w, fr = writhe_framing(c, (0.05, -0.03, 0.99))
    assert fr == 0
    assert abs(w) < 1e-3  # identically zero for planar curves


def figure_eight_curve(z_sign=-1.0, n=160):
    # phase offset keeps the self-crossing away from polygon vertices
    t = 2 * np.pi * (np.arange(n) + 0.37) / n
    verts = np.stack(
        [np.sin(2 * t), np.sin(t), z_sign * 0.3 * np.cos(t)], axis=1
    )
    return PolygonalCurve(verts)


def test_figure_eight_framing():
    c = figure_eight_curve()
    _, fr = writhe_framing(c, (0, 0, 1.0))
    assert fr == +1


def test_knife_edge_crossing_rejected():
    t = 2 * np.pi * np.arange(160) / 160  # vertex exactly at the crossing
    c = PolygonalCurve(np.stack([np.sin(2 * t), np.sin(t), -0.3 * np.cos(t)], axis=1))
    with pytest.raises(DegenerateProjection):
        find_crossings([c], (0, 0, 1.0))


def test_writhe_mirror_negates():
    c = figure_eight_curve()
    mirror = PolygonalCurve(c.vertices * np.array([1.0, 1.0, -1.0]))
    w1 = gauss_writhe(c)
    w2 = gauss_writhe(mirror)
    assert abs(w1 + w2) < 1e-6
