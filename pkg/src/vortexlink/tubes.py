"""Mollified Poincaré duals: tube 2-forms, disc-dual 1-forms, helicity.

The mollifier is one compactly supported quasi-Gaussian bump

    psi_r(d) = c_r * (1 - (d/r)^2)^6   for d < r,   0 outside,

normalized to unit 3-volume integral.  The exponent trades boundary
smoothness (C^5, spectral tail k^-8) against interior width; among compact
profiles fitting a 6h tube it minimizes the aliasing seen by the spectral
exterior derivative (measured: relative d-residual 4e-4 at r = 6h versus
3e-2 for a true C-infinity bump, whose boundary layer is far thinner).

Tube forms are mollified filament currents (line integral of the tangent
against psi_r); disc duals are the mollified surface currents of flat
discs.  Because both use the same mollifier, d(disc dual) equals the
boundary's tube form up to quadrature error, which is what the residual
certificates measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import DISC_DUAL_SIGN
from .curves import Link, PlanarCurve, TubeParams, as_polygon
from .errors import NotPlanar, TubeTooThin
from .grid import Grid3, GridField, VectorField
from .interpolate import trilinear
from .operators import (
    alpha,
    alpha_inv,
    curl_inv,
    ext_d,
    musical,
    solenoidal_part,
    wedge,
)

_BUMP_POWER = 6
# integral of (1-u^2)^p u^2 du on [0,1] = B(3/2, p+1)/2 in closed form
_BUMP_MOMENT = 0.5 * math.gamma(1.5) * math.gamma(_BUMP_POWER + 1) / math.gamma(
    _BUMP_POWER + 2.5
)


def bump_profile(u: np.ndarray) -> np.ndarray:
    """(1 - u^2)^6 on |u| < 1, zero outside (unnormalized)."""
    u = np.asarray(u, dtype=float)
    return np.where(np.abs(u) < 1.0, np.maximum(0.0, 1.0 - u * u) ** _BUMP_POWER, 0.0)


def mollifier_normalization(radius: float) -> float:
    """c_r with integral of c_r * bump(d/r) over R^3 equal to one."""
    return 1.0 / (4 * math.pi * radius**3 * _BUMP_MOMENT)


class _Depositor:
    """Accumulates point-weighted mollifier bumps onto grid arrays.

    Each bump touches a local index box narrower than the grid, so the
    scatter-add can use (fast, buffered) fancy indexing: indices within one
    box never repeat.
    """

    def __init__(self, grid: Grid3, radius: float, n_channels: int):
        self.grid = grid
        self.radius = radius
        self.norm = mollifier_normalization(radius)
        self.data = np.zeros((n_channels,) + grid.shape)
        h = grid.spacing
        self.width = min(int(np.ceil(2 * radius / h)) + 2, grid.n_points)
        offs = np.arange(self.width)
        dx = offs[:, None, None] * h
        dy = offs[None, :, None] * h
        dz = offs[None, None, :] * h
        self._box_d2 = dx * dx + dy * dy + dz * dz  # reused per call
        self._dx, self._dy, self._dz = dx, dy, dz
        self._offs = offs

    def add(self, point, weights):
        g = self.grid
        n, h, L, r = g.n_points, g.spacing, g.box_length, self.radius
        base = np.floor((point + L / 2 - r) / h).astype(np.int64)
        # distances from the point to the unwrapped box nodes
        cx = (-L / 2 + base[0] * h) - point[0]
        cy = (-L / 2 + base[1] * h) - point[1]
        cz = (-L / 2 + base[2] * h) - point[2]
        u2 = (
            (self._dx + cx) ** 2 + (self._dy + cy) ** 2 + (self._dz + cz) ** 2
        ) / (r * r)
        np.minimum(u2, 1.0, out=u2)
        vals = (1.0 - u2) ** _BUMP_POWER * self.norm
        jx = (base[0] + self._offs) % n
        jy = (base[1] + self._offs) % n
        jz = (base[2] + self._offs) % n
        sel = np.ix_(jx, jy, jz)
        for c, w in enumerate(weights):
            if w != 0.0:
                self.data[c][sel] += w * vals


def filament_field(curve, params: TubeParams, grid: Grid3) -> VectorField:
    """Unit-flux smeared filament: flux * closed line integral of the unit
    tangent times psi_r(distance to the curve)."""
    if params.radius < 3 * grid.spacing:
        raise TubeTooThin(
            f"radius {params.radius:.4g} < 3h = {3 * grid.spacing:.4g}"
        )
    poly = as_polygon(curve)
    step = min(grid.spacing, params.radius) / 2
    fine = poly.refined(step)
    verts = fine.vertices
    seg = np.roll(verts, -1, axis=0) - verts
    mids = verts + seg / 2
    dep = _Depositor(grid, params.radius, 3)
    for m, t in zip(mids, seg):
        dep.add(m, params.flux * t)
    return VectorField(grid, dep.data)


def tube_2form(curve, params: TubeParams, grid: Grid3) -> GridField:
    """Poincaré-dual 2-form of a closed curve, localized in a tube of the
    given radius with total fibre flux equal to params.flux."""
    return alpha(filament_field(curve, params, grid))


def _disc_quadrature(curve: PlanarCurve, spacing: float):
    """Polar quadrature points and weights covering the flat elliptic disc."""
    A = float(np.linalg.norm(curve.axis_u))
    B = float(np.linalg.norm(curve.axis_v))
    scale = max(A, B)
    n_rho = max(8, int(np.ceil(2 * scale / spacing)))
    n_th = max(16, int(np.ceil(2 * np.pi * scale / spacing)))
    rho = (np.arange(n_rho) + 0.5) / n_rho
    th = 2 * np.pi * np.arange(n_th) / n_th
    R, T = np.meshgrid(rho, th, indexing="ij")
    pts = (
        curve.center[None, :]
        + (R * np.cos(T)).reshape(-1)[:, None] * curve.axis_u[None, :]
        + (R * np.sin(T)).reshape(-1)[:, None] * curve.axis_v[None, :]
    )
    w = (R.reshape(-1) * A * B) * (1.0 / n_rho) * (2 * np.pi / n_th)
    return pts, w


def disc_dual_1form(curve: PlanarCurve, params: TubeParams, grid: Grid3) -> GridField:
    """Mollified Poincaré dual of the flat Seifert disc of a planar curve.

    Satisfies d(disc_dual) = DISC_DUAL_SIGN * tube_2form(curve) up to
    quadrature error; the sign convention makes dv_L + iota_{xi_L} nu = 0
    hold with xi_L = +alpha^{-1}(omega_L).
    """
    if not isinstance(curve, PlanarCurve):
        raise NotPlanar("disc duals need a planar component")
    if params.radius < 3 * grid.spacing:
        raise TubeTooThin(
            f"radius {params.radius:.4g} < 3h = {3 * grid.spacing:.4g}"
        )
    pts, w = _disc_quadrature(curve, min(grid.spacing, params.radius) / 2)
    normal = curve.normal
    dep = _Depositor(grid, params.radius, 1)
    for p, wq in zip(pts, w):
        dep.add(p, (wq,))
    comps = DISC_DUAL_SIGN * params.flux * dep.data[0][None] * normal[:, None, None, None]
    return GridField(grid, 1, comps.reshape((3,) + grid.shape))


# -- helicity -------------------------------------------------------------------

def helicity(v: GridField, w: GridField) -> float:
    """integral of v ^ w over the box (v a 1-form, w a 2-form)."""
    if v.degree != 1 or w.degree != 2:
        raise ValueError("helicity pairs a 1-form with a 2-form")
    three = wedge(v, w)
    return float(np.sum(three.comps) * v.grid.cell_volume)


@dataclass
class LinkFields:
    """Grid realizations of one link: per-component tube forms, filament
    fields and Coulomb primitives."""

    grid: Grid3
    link: Link
    omegas: list
    xis: list
    primitives: list

    @classmethod
    def build(cls, link: Link, grid: Grid3, validate=True) -> "LinkFields":
        if validate:
            link.validate(grid)
        omegas, xis, prims = [], [], []
        for comp in link.components:
            om = tube_2form(comp, link.tube, grid)
            xi = alpha_inv(om)
            omegas.append(om)
            xis.append(xi)
            # mollified filaments are solenoidal only up to quadrature error;
            # the Coulomb primitive sees the Leray projection (the curl_inv
            # Fourier formula is blind to the gradient part anyway)
            prims.append(musical(curl_inv(solenoidal_part(xi), eps_mean=1e-6)))
        return cls(grid, link, omegas, xis, prims)

    def omega_total(self) -> GridField:
        out = self.omegas[0].copy()
        for om in self.omegas[1:]:
            out = out + om
        return out

    def primitive_total(self) -> GridField:
        out = self.primitives[0].copy()
        for p in self.primitives[1:]:
            out = out + p
        return out

    def xi_total(self) -> VectorField:
        out = self.xis[0].copy()
        for x in self.xis[1:]:
            out = out + x
        return out

    def helicity_matrix(self) -> np.ndarray:
        n = len(self.omegas)
        H = np.zeros((n, n))
        for i in range(n):
            for j in range(n):
                H[i, j] = helicity(self.primitives[i], self.omegas[j])
        return H


def link_helicity(link: Link, grid: Grid3, fields: LinkFields | None = None) -> float:
    """Total helicity of the tube link: integral of v_L ^ omega_L with the
    gauge-independent Coulomb primitives (framing-free: planar components
    carry no self-term beyond quadrature noise)."""
    lf = fields or LinkFields.build(link, grid)
    return helicity(lf.primitive_total(), lf.omega_total())


def tube_d_residual(om: GridField, radius: float) -> float:
    """Closedness defect of a constructed tube 2-form, nondimensionalized by
    the mollifier scale (gradients of omega are of order sup|omega|/radius)."""
    n = om.sup_norm()
    return ext_d(om).sup_norm() * radius / n if n > 0 else 0.0


# -- surfaces -------------------------------------------------------------------

def disc_flux(form2: GridField, curve: PlanarCurve, spacing=None) -> float:
    """Flux of a 2-form through the flat disc spanned by a planar curve."""
    if spacing is None:
        spacing = form2.grid.spacing / 2
    pts, w = _disc_quadrature(curve, spacing)
    vals = trilinear(form2.grid, form2.comps, pts)  # (3, M)
    return float(np.sum((vals.T @ curve.normal) * w))


def meridian_torus_panels(curve: PlanarCurve, minor_radius: float, panels=(64, 256)):
    """Structured quadrilateral panels of the meridian torus around a planar
    curve: centers, and the two panel edge vectors (for 2-form pairing)."""
    n_th, n_t = panels
    th = 2 * np.pi * (np.arange(n_th) + 0.5) / n_th
    tt = 2 * np.pi * (np.arange(n_t) + 0.5) / n_t
    TH, T = np.meshgrid(th, tt, indexing="ij")
    th_f, t_f = TH.reshape(-1), T.reshape(-1)

    base = curve.point(t_f)
    tang = (
        -np.sin(t_f + curve.phase)[:, None] * curve.axis_u[None, :]
        + np.cos(t_f + curve.phase)[:, None] * curve.axis_v[None, :]
    )
    tang_unit = tang / np.linalg.norm(tang, axis=1)[:, None]
    n_hat = curve.normal
    m_hat = np.cross(tang_unit, np.tile(n_hat, (len(t_f), 1)))

    ring = np.cos(th_f)[:, None] * m_hat + np.sin(th_f)[:, None] * n_hat
    centers = base + minor_radius * ring
    d_theta = minor_radius * (
        -np.sin(th_f)[:, None] * m_hat + np.cos(th_f)[:, None] * n_hat
    ) * (2 * np.pi / n_th)
    # d/dt of the torus point: base tangent + minor-circle frame rotation
    eps = 1e-6
    base2 = curve.point(t_f + eps)
    tang2 = (
        -np.sin(t_f + eps + curve.phase)[:, None] * curve.axis_u[None, :]
        + np.cos(t_f + eps + curve.phase)[:, None] * curve.axis_v[None, :]
    )
    tang2_unit = tang2 / np.linalg.norm(tang2, axis=1)[:, None]
    m2_hat = np.cross(tang2_unit, np.tile(n_hat, (len(t_f), 1)))
    ring2 = np.cos(th_f)[:, None] * m2_hat + np.sin(th_f)[:, None] * n_hat
    centers2 = base2 + minor_radius * ring2
    d_t = (centers2 - centers) / eps * (2 * np.pi / n_t)
    return centers, d_theta, d_t


def meridian_period(form2: GridField, curve: PlanarCurve, minor_radius: float,
                    panels=(64, 256)) -> float:
    """Period of a 2-form over the meridian torus around one component."""
    from .interpolate import surface_integral_2form

    centers, du, dv = meridian_torus_panels(curve, minor_radius, panels)
    return surface_integral_2form(form2, centers, du, dv)
