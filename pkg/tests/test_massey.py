"""Masked-domain machinery at unit-test scale.

The full Borromean pipeline at N = 96 lives in the acceptance suite; these
tests cover the solver contract, the gates and the algebraic identities on
cheap scenes.
"""

import numpy as np
import pytest

from vortexlink.curves import hopf_link, split_triple
from vortexlink.errors import MissingPrimitive, ObstructedClass
from vortexlink.grid import Grid3, GridField
from vortexlink.massey import (
    MaskedDomain,
    MasseyConfig,
    MasseyHierarchy,
    NilpotentConnection,
    bianchi_residual,
    connection_curvature,
    involution_report,
    solve_primitive,
)
from vortexlink.operators import ext_d
from vortexlink.random_fields import random_form


@pytest.fixture(scope="module")
def grid48():
    return Grid3(48, 2 * np.pi)


@pytest.fixture(scope="module")
def split_hierarchy(grid48):
    link = split_triple(tube_radius=0.42)
    h = MasseyHierarchy.from_scene(link, grid48)
    h.obstruction_form(1, 2)
    h.obstruction_form(2, 3)
    h.solve(1, 2)
    h.solve(2, 3)
    h.massey_triple()
    return h


def test_mask_structure(grid48):
    link = split_triple(tube_radius=0.42)
    dom = MaskedDomain.build(link, grid48)
    assert dom.mask.min() == 0.0 and dom.mask.max() == 1.0
    # core lives strictly inside the mask-zero region
    assert float(np.max(dom.mask * dom.core)) == 0.0
    # mask is exactly one away from all tubes
    assert dom.mask[0, 0, 0] == 1.0


def test_manufactured_primitive(grid48, rng):
    # exact case: omega = d(beta) with the mask identically one
    link = split_triple(tube_radius=0.42)
    dom = MaskedDomain(
        grid48,
        np.ones(grid48.shape),
        np.zeros(grid48.shape),
        link,
        1.25 * 0.42,
        1.5 * 0.42,
    )
    beta = random_form(grid48, 1, rng, kmax=3)
    omega = ext_d(beta)
    v, info = solve_primitive(omega, dom)
    resid = (ext_d(v) + omega).l2_norm() / omega.l2_norm()
    assert resid < 1e-6
    assert info["masked_residual"] < 1e-6


def test_split_scene_trivial(split_hierarchy):
    h = split_hierarchy
    # disjoint disc slabs: the obstruction forms vanish identically
    assert h.omega[(1, 2)].sup_norm() == 0.0
    assert h.omega[(2, 3)].sup_norm() == 0.0
    assert h.v[(1, 2)].sup_norm() == 0.0
    assert h.omega[(1, 2, 3)].sup_norm() == 0.0
    assert h.triple_linking(3) == 0.0
    assert all(abs(p) < 1e-12
               for p in h.certificates[("periods", (1, 2))].values())


def test_split_involution_trivial(split_hierarchy):
    rep = involution_report(split_hierarchy)
    for section in ("iota", "lie", "pb"):
        for key, value in rep[section].items():
            assert value < 1e-6, (section, key, value)


def test_hopf_obstruction_gate(grid48):
    link = hopf_link(tube_radius=0.42)
    h = MasseyHierarchy.from_scene(link, grid48)
    om = h.obstruction_form(1, 2)
    periods = h.certificates[("periods", (1, 2))]
    # the pair is essentially linked: some meridian period is order one
    assert max(abs(p) for p in periods.values()) > 0.5
    with pytest.raises(ObstructedClass) as exc:
        h.solve(1, 2)
    assert exc.value.periods


def test_missing_primitive(grid48):
    link = split_triple(tube_radius=0.42)
    h = MasseyHierarchy.from_scene(link, grid48)
    h.obstruction_form(1, 2)
    with pytest.raises(MissingPrimitive):
        h.massey_triple()


def test_connection_curvature_matches_hierarchy(split_hierarchy):
    h = split_hierarchy
    lvl1 = NilpotentConnection.from_hierarchy(h, 1)
    w1 = connection_curvature(lvl1)
    # entries (1,3) and (2,4) of the paper's display: same arithmetic
    assert np.array_equal(w1[(0, 2)].comps, h.omega[(1, 2)].comps)
    assert np.array_equal(w1[(1, 3)].comps, h.omega[(2, 3)].comps)
    lvl2 = NilpotentConnection.from_hierarchy(h, 2)
    w2 = connection_curvature(lvl2)
    assert np.array_equal(w2[(0, 3)].comps, h.omega[(1, 2, 3)].comps)
    assert bianchi_residual(lvl1, h.dom) < 0.05
    assert bianchi_residual(lvl2, h.dom) < 0.05


def test_solver_determinism(grid48, rng):
    link = split_triple(tube_radius=0.42)
    dom = MaskedDomain.build(link, grid48)
    beta = random_form(grid48, 1, rng, kmax=3)
    omega = ext_d(beta)
    v1, info1 = solve_primitive(omega, dom)
    v2, info2 = solve_primitive(omega, dom)
    assert np.array_equal(v1.comps, v2.comps)
    assert info1["iterations"] == info2["iterations"]


def test_flux_scaling_is_cubic(grid48):
    # all fields are linear in flux, so the triple form scales cubically
    from vortexlink.curves import Link, TubeParams

    base = split_triple(tube_radius=0.42)
    scaled = Link(base.components, TubeParams(0.42, flux=2.0))
    h1 = MasseyHierarchy.from_scene(base, grid48)
    h2 = MasseyHierarchy.from_scene(scaled, grid48)
    v1 = h1.v[(1,)]
    v2 = h2.v[(1,)]
    assert np.allclose(v2.comps, 2.0 * v1.comps, atol=1e-12)
