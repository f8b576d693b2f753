"""Seeded random field ensembles for property suites.

Band limits are enforced on true mode magnitudes (Nyquist planes always
excluded).  The identity suites for the co-momentum tower draw solenoidal
fields from pairwise-disjoint Fourier shells: for shells S1, S2, S3 with
(Si + Sj) disjoint from Sk for all permutations, every product appearing in
the tower (cross products, brackets of pairs against the third field) has an
exactly vanishing zero mode, which is the torus realization of the
rapid-decay hypothesis.  Without this, the constant mode of xi1 x xi2 is a
genuine cohomological obstruction on the torus and the potential equations
only hold modulo constants.
"""

from __future__ import annotations

import numpy as np

from .grid import FORM_COMPONENTS, Grid3, GridField, VectorField
from .operators import _symbols, irfft3, rfft3

# default shells (integer mode magnitudes): pairwise disjoint and sumset-safe
TOWER_SHELLS = ((1.0, 2.0), (3.0, 4.0), (8.0, 10.0))


def _band_mask(grid: Grid3, kmin: float, kmax: float) -> np.ndarray:
    _, _, _, _, mode = _symbols(grid)
    return (mode >= kmin - 1e-9) & (mode <= kmax + 1e-9)


def random_form(grid: Grid3, degree: int, rng: np.random.Generator, kmax=6.0, kmin=1.0) -> GridField:
    """Random band-limited k-form with zero mean, sup-normalized."""
    mask = _band_mask(grid, kmin, kmax)
    comps = []
    for _ in range(FORM_COMPONENTS[degree]):
        w = rng.standard_normal(grid.shape)
        comps.append(irfft3(np.where(mask, rfft3(w), 0.0), grid.shape))
    comps = np.stack(comps)
    sup = np.max(np.abs(comps))
    if sup > 0:
        comps /= sup
    return GridField(grid, degree, comps)


def random_vector_field(grid: Grid3, rng, kmax=6.0, kmin=1.0) -> VectorField:
    f = random_form(grid, 1, rng, kmax=kmax, kmin=kmin)
    return VectorField(grid, f.comps)


def random_solenoidal(grid: Grid3, rng, kmax=6.0, kmin=1.0) -> VectorField:
    """Random divergence-free, zero-mean, band-limited vector field."""
    KX, KY, KZ, K2, _ = _symbols(grid)
    mask = _band_mask(grid, kmin, kmax)
    vh = []
    for _ in range(3):
        w = rng.standard_normal(grid.shape)
        vh.append(np.where(mask, rfft3(w), 0.0))
    kdot = KX * vh[0] + KY * vh[1] + KZ * vh[2]
    sym = (KX, KY, KZ)
    with np.errstate(divide="ignore", invalid="ignore"):
        vh = [np.where(K2 > 0, vh[i] - sym[i] * kdot / K2, 0.0) for i in range(3)]
    comps = np.stack([irfft3(c, grid.shape) for c in vh])
    sup = np.max(np.abs(comps))
    if sup > 0:
        comps /= sup
    return VectorField(grid, comps)


def shell_solenoidal(grid: Grid3, rng, shell) -> VectorField:
    """Solenoidal field supported on one Fourier shell (mode magnitudes)."""
    lo, hi = shell
    return random_solenoidal(grid, rng, kmax=hi, kmin=lo)


def tower_pair(grid: Grid3, rng) -> tuple[VectorField, VectorField]:
    """Solenoidal pair with structurally vanishing product zero modes."""
    return (
        shell_solenoidal(grid, rng, TOWER_SHELLS[0]),
        shell_solenoidal(grid, rng, TOWER_SHELLS[1]),
    )


def tower_triple(grid: Grid3, rng):
    """Solenoidal triple safe for the full tower of product identities."""
    return tuple(shell_solenoidal(grid, rng, s) for s in TOWER_SHELLS)
