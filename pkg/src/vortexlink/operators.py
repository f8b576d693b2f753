"""Spectral exterior calculus on the periodic grid.

All differential operators act by Fourier multipliers, so the structural
identities (d^2 = 0, delta^2 = 0, ** = id, adjointness of d and delta,
curl grad = 0, div curl = 0) hold to rounding error on band-limited fields.
The Nyquist wavenumber is zeroed in every differentiation symbol to keep
derivatives of real fields real and the operators skew-adjoint.

Sign conventions come from constants.py; the Laplacian is Riemannian
(Delta = d delta + delta d, Fourier symbol +|k|^2).
"""

from __future__ import annotations

import os
from functools import lru_cache

import numpy as np
import scipy.fft as sfft

from .constants import CODIFF_SIGN, DEFAULT_TOLERANCES
from .errors import NonzeroHarmonicPart, NonzeroMean, NotDivergenceFree
from .grid import FORM_COMPONENTS, Grid3, GridField, VectorField, _check_same_grid


def _workers() -> int:
    env = os.environ.get("VORTEXLINK_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@lru_cache(maxsize=16)
def _spectral(n: int, box_length: float):
    """Wavenumber arrays for an N^3 rfft grid, cached per grid."""
    h = box_length / n
    kfull = 2 * np.pi * sfft.fftfreq(n, d=h)
    krf = 2 * np.pi * sfft.rfftfreq(n, d=h)
    # derivative symbols: Nyquist zeroed
    kd = kfull.copy()
    kd[n // 2] = 0.0
    krd = krf.copy()
    krd[-1] = 0.0
    KX = kd[:, None, None]
    KY = kd[None, :, None]
    KZ = krd[None, None, :]
    K2 = KX**2 + KY**2 + KZ**2
    # true mode magnitudes (Nyquist not zeroed), in integer-mode units
    mode = np.sqrt(
        kfull[:, None, None] ** 2 + kfull[None, :, None] ** 2 + krf[None, None, :] ** 2
    ) * (box_length / (2 * np.pi))
    return KX, KY, KZ, K2, mode


def _symbols(grid: Grid3):
    return _spectral(grid.n_points, grid.box_length)


def rfft3(a: np.ndarray) -> np.ndarray:
    return sfft.rfftn(a, workers=_workers())


def irfft3(ah: np.ndarray, shape) -> np.ndarray:
    return sfft.irfftn(ah, s=shape, workers=_workers())


# -- component-level vector calculus ----------------------------------------

def _grad(grid, f):
    KX, KY, KZ, _, _ = _symbols(grid)
    fh = rfft3(f)
    s = grid.shape
    return np.stack(
        [irfft3(1j * KX * fh, s), irfft3(1j * KY * fh, s), irfft3(1j * KZ * fh, s)]
    )


def _div(grid, v):
    KX, KY, KZ, _, _ = _symbols(grid)
    s = grid.shape
    return irfft3(
        1j * (KX * rfft3(v[0]) + KY * rfft3(v[1]) + KZ * rfft3(v[2])), s
    )


def _curl(grid, v):
    KX, KY, KZ, _, _ = _symbols(grid)
    s = grid.shape
    vh = [rfft3(c) for c in v]
    return np.stack(
        [
            irfft3(1j * (KY * vh[2] - KZ * vh[1]), s),
            irfft3(1j * (KZ * vh[0] - KX * vh[2]), s),
            irfft3(1j * (KX * vh[1] - KY * vh[0]), s),
        ]
    )


def spectral_div(x: VectorField) -> np.ndarray:
    return _div(x.grid, x.comps)


def spectral_curl(x: VectorField) -> VectorField:
    return VectorField(x.grid, _curl(x.grid, x.comps))


def spectral_grad(grid: Grid3, f: np.ndarray) -> VectorField:
    return VectorField(grid, _grad(grid, f))


# -- algebraic (pointwise) operations ---------------------------------------

def hodge_star(f: GridField) -> GridField:
    """Euclidean Hodge dual.  In the fixed component bases this is a pure
    degree swap k -> 3-k with identical arrays, and ** = id exactly."""
    return GridField(f.grid, 3 - f.degree, f.comps.copy())


def musical(x: VectorField) -> GridField:
    """Flat: vector field -> 1-form (Euclidean metric, component copy)."""
    return GridField(x.grid, 1, x.comps.copy())


def musical_inv(f: GridField) -> VectorField:
    """Sharp: 1-form -> vector field."""
    if f.degree != 1:
        raise ValueError("sharp expects a 1-form")
    return VectorField(f.grid, f.comps.copy())


def alpha(x: VectorField) -> GridField:
    """iota_x nu = x^1 dy^dz + x^2 dz^dx + x^3 dx^dy  (= *(x flat))."""
    return GridField(x.grid, 2, x.comps.copy())


def alpha_inv(f: GridField) -> VectorField:
    """Inverse of alpha: (*beta) sharp."""
    if f.degree != 2:
        raise ValueError("alpha_inv expects a 2-form")
    return VectorField(f.grid, f.comps.copy())


def wedge(f: GridField, g: GridField) -> GridField:
    """Pointwise exterior product; graded anticommutativity is exact."""
    _check_same_grid(f, g)
    j, k = f.degree, g.degree
    if j + k > 3:
        raise ValueError(f"wedge degrees {j}+{k} exceed 3")
    if j > k:
        out = wedge(g, f)
        if (j * k) % 2 == 1:
            out = -out
        return out
    a, b = f.comps, g.comps
    if j == 0:
        return GridField(f.grid, k, a[0][None] * b)
    if j == 1 and k == 1:
        # (a dx + ...) ^ (b dx + ...) = cross product in the 2-form basis
        c = np.stack(
            [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]
        )
        return GridField(f.grid, 2, c)
    if j == 1 and k == 2:
        return GridField(f.grid, 3, np.sum(a * b, axis=0)[None])
    raise AssertionError("unreachable")


def contract(x: VectorField, f: GridField) -> GridField:
    """Interior product iota_x f (pointwise)."""
    _check_same_grid(x, f)
    k = f.degree
    if k < 1:
        raise ValueError("cannot contract a 0-form")
    v, a = x.comps, f.comps
    if k == 1:
        return GridField(f.grid, 0, np.sum(v * a, axis=0)[None])
    if k == 2:
        # iota_x beta = (beta_vec x x) flat
        c = np.stack(
            [
                a[1] * v[2] - a[2] * v[1],
                a[2] * v[0] - a[0] * v[2],
                a[0] * v[1] - a[1] * v[0],
            ]
        )
        return GridField(f.grid, 1, c)
    return GridField(f.grid, 2, a[0][None] * v)


def volume_form(grid: Grid3) -> GridField:
    return GridField(grid, 3, np.ones((1,) + grid.shape))


# -- differential operators ---------------------------------------------------

def ext_d(f: GridField) -> GridField:
    """Spectral exterior derivative (grad / curl / div in the fixed bases)."""
    k = f.degree
    if k > 2:
        raise ValueError("d on a 3-form")
    if k == 0:
        return GridField(f.grid, 1, _grad(f.grid, f.comps[0]))
    if k == 1:
        return GridField(f.grid, 2, _curl(f.grid, f.comps))
    return GridField(f.grid, 3, _div(f.grid, f.comps)[None])


def codiff(f: GridField) -> GridField:
    """Codifferential, the L2 adjoint of ext_d: delta = sign(k) * (*d*)."""
    k = f.degree
    if k < 1:
        raise ValueError("codifferential on a 0-form")
    dual = ext_d(hodge_star(f))
    out = hodge_star(dual)
    if CODIFF_SIGN[k] < 0:
        out = -out
    return out


def harmonic_proj(f: GridField) -> GridField:
    """Componentwise mean: the harmonic part on the flat torus."""
    means = f.comps.reshape(f.comps.shape[0], -1).mean(axis=1)
    out = np.broadcast_to(
        means[:, None, None, None], f.comps.shape
    ).copy()
    return GridField(f.grid, f.degree, out)


def laplace_inv(f: GridField, eps_harm: float | None = None) -> GridField:
    """Invert the Riemannian Hodge Laplacian (symbol +|k|^2) componentwise.

    Requires zero harmonic part; the output zero mode is set to zero.
    """
    if eps_harm is None:
        eps_harm = DEFAULT_TOLERANCES["eps_harm"]
    sup = f.sup_norm()
    means = np.abs(f.comps.reshape(f.comps.shape[0], -1).mean(axis=1))
    if sup > 0 and np.max(means) > eps_harm * sup:
        raise NonzeroHarmonicPart(
            f"harmonic part {np.max(means):.3e} exceeds {eps_harm:.1e} * sup"
        )
    _, _, _, K2, _ = _symbols(f.grid)
    s = f.grid.shape
    out = np.empty_like(f.comps)
    with np.errstate(divide="ignore", invalid="ignore"):
        for i in range(f.comps.shape[0]):
            fh = rfft3(f.comps[i])
            out[i] = irfft3(np.where(K2 > 0, fh / K2, 0.0), s)
    return GridField(f.grid, f.degree, out)


def divergence_residual(x: VectorField) -> float:
    sup = x.sup_norm()
    if sup == 0:
        return 0.0
    return float(np.max(np.abs(spectral_div(x)))) / sup


def require_divergence_free(x: VectorField, eps_div: float | None = None, what="field"):
    if eps_div is None:
        eps_div = DEFAULT_TOLERANCES["eps_div"]
    r = divergence_residual(x)
    if r > eps_div:
        raise NotDivergenceFree(f"{what}: relative divergence {r:.3e} > {eps_div:.1e}")


def require_zero_mean(x: VectorField, eps_mean: float | None = None, what="field"):
    if eps_mean is None:
        eps_mean = DEFAULT_TOLERANCES["eps_mean"]
    sup = x.sup_norm()
    if sup == 0:
        return
    if np.max(np.abs(x.mean())) > eps_mean * sup:
        raise NonzeroMean(f"{what}: component mean exceeds {eps_mean:.1e} * sup")


def solenoidal_part(x: VectorField) -> VectorField:
    """Leray projection: remove the gradient part spectrally (zero mode kept)."""
    KX, KY, KZ, K2, _ = _symbols(x.grid)
    s = x.grid.shape
    xh = [rfft3(c) for c in x.comps]
    kdot = KX * xh[0] + KY * xh[1] + KZ * xh[2]
    sym = (KX, KY, KZ)
    with np.errstate(divide="ignore", invalid="ignore"):
        comps = np.stack(
            [
                irfft3(np.where(K2 > 0, xh[i] - sym[i] * kdot / K2, xh[i]), s)
                for i in range(3)
            ]
        )
    return VectorField(x.grid, comps)


def curl_inv(b: VectorField, eps_div=None, eps_mean=None) -> VectorField:
    """Coulomb-gauge vector potential: curl B = b, div B = 0, zero mean.

    Fourier formula B(k) = i k x b(k) / |k|^2 with the zero mode set to zero.
    """
    require_divergence_free(b, eps_div, what="curl_inv input")
    require_zero_mean(b, eps_mean, what="curl_inv input")
    KX, KY, KZ, K2, _ = _symbols(b.grid)
    s = b.grid.shape
    bh = [rfft3(c) for c in b.comps]
    num = (
        1j * (KY * bh[2] - KZ * bh[1]),
        1j * (KZ * bh[0] - KX * bh[2]),
        1j * (KX * bh[1] - KY * bh[0]),
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        comps = np.stack([irfft3(np.where(K2 > 0, c / K2, 0.0), s) for c in num])
    return VectorField(b.grid, comps)


def lie_derivative(x: VectorField, f: GridField) -> GridField:
    """Cartan's formula: L_x f = d(iota_x f) + iota_x(d f)."""
    k = f.degree
    terms = []
    if k >= 1:
        terms.append(ext_d(contract(x, f)))
    if k <= 2:
        terms.append(contract(x, ext_d(f)))
    out = terms[0]
    for t in terms[1:]:
        out = out + t
    return out


# -- integrals ---------------------------------------------------------------

def l2_inner(f: GridField, g: GridField) -> float:
    """L2 inner product by the midpoint rule (exact for band-limited data)."""
    _check_same_grid(f, g)
    if f.degree != g.degree:
        raise ValueError("inner product of forms of different degree")
    return float(np.sum(f.comps * g.comps) * f.grid.cell_volume)


def l2_inner_exact(f: GridField, g: GridField) -> float:
    """Correctly rounded inner product (math.fsum): invariant under lattice
    translations of both fields, at the cost of speed."""
    import math

    _check_same_grid(f, g)
    if f.degree != g.degree:
        raise ValueError("inner product of forms of different degree")
    return math.fsum((f.comps * g.comps).ravel()) * f.grid.cell_volume


def integrate(f: GridField) -> float:
    """Integral of a 3-form over the box."""
    if f.degree != 3:
        raise ValueError("integrate expects a 3-form")
    return float(np.sum(f.comps) * f.grid.cell_volume)
