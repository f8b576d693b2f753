"""The hydrodynamical homotopy co-momentum map and its bracket structures.

The tower is built from two maps on divergence-free fields:

    f1(b) = -(curl^-1 b) flat          (Coulomb gauge, so delta f1 = 0)
    f2(b, c) = Delta^-1 delta mu2(b, c)

with the closed 1-form

    mu2(b, c) = f1([b, c]) - nu(b, c, .)

where [.,.] is the Lie bracket entering the tower.  Closedness of mu2, the
bracket-defect identity and the triple evaluation identity force this to be
the standard Jacobi-Lie bracket, i.e. MINUS the hydrodynamical bracket
curl(b x c); see constants.TOWER_BRACKET_SIGN.  The hydrodynamical bracket
itself is kept for the vorticity dynamics.

On the torus the constant Fourier mode of mu2 is a genuine obstruction to
exactness (it equals -mean(b x c), which need not vanish); every identity
involving f2 therefore carries a harmonic certificate, and f2 refuses inputs
whose obstruction exceeds tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import DEFAULT_TOLERANCES, TOWER_BRACKET_SIGN
from .errors import ObstructedPotential, OpenCurve
from .grid import Grid3, GridField, VectorField, cross, dot
from .operators import (
    alpha,
    alpha_inv,
    codiff,
    contract,
    curl_inv,
    ext_d,
    harmonic_proj,
    laplace_inv,
    lie_derivative,
    musical,
    require_divergence_free,
    require_zero_mean,
    spectral_curl,
    spectral_div,
)


def hydro_bracket(x1: VectorField, x2: VectorField, eps_div=None) -> VectorField:
    """curl(x1 x x2); closes in the divergence-free algebra."""
    require_divergence_free(x1, eps_div, "hydro_bracket arg 1")
    require_divergence_free(x2, eps_div, "hydro_bracket arg 2")
    return spectral_curl(cross(x1, x2))


def tower_bracket(x1: VectorField, x2: VectorField, eps_div=None) -> VectorField:
    """The bracket entering mu2 / the wedge boundary / the defect identity."""
    return TOWER_BRACKET_SIGN * hydro_bracket(x1, x2, eps_div)


def pair_contraction(x1: VectorField, x2: VectorField) -> GridField:
    """iota_{x1 ^ x2} nu = nu(x1, x2, .) = (x1 x x2) flat."""
    return musical(cross(x1, x2))


def f1(b: VectorField, eps_div=None, eps_mean=None) -> GridField:
    """Hamiltonian 1-form of b: minus the Coulomb-gauge potential, flat."""
    B = curl_inv(b, eps_div, eps_mean)
    return -musical(B)


def hamiltonian_residual(h: GridField, b: VectorField) -> float:
    """Relative residual of d h + iota_b nu = 0."""
    lhs = ext_d(h) + alpha(b)
    den = alpha(b).sup_norm()
    return lhs.sup_norm() / den if den > 0 else lhs.sup_norm()


@dataclass
class HamiltonianPair:
    """A divergence-free field with its Hamiltonian 1-form and certificate."""

    field: VectorField
    form: GridField
    residual: float

    @classmethod
    def build(cls, b: VectorField, eps_ham=None) -> "HamiltonianPair":
        if eps_ham is None:
            eps_ham = DEFAULT_TOLERANCES["eps_ham"]
        h = f1(b)
        res = hamiltonian_residual(h, b)
        if res > eps_ham:
            raise ValueError(f"Hamiltonian residual {res:.3e} > {eps_ham:.1e}")
        return cls(b, h, res)


def mu2(x1: VectorField, x2: VectorField, eps_div=None) -> GridField:
    """The closed 1-form f1([x1,x2]) - nu(x1,x2,.) whose potential is f2."""
    b = tower_bracket(x1, x2, eps_div)
    return f1(b) - pair_contraction(x1, x2)


def mu2_certificates(m: GridField) -> dict:
    """Closedness and torus-exactness (harmonic part) certificates."""
    sup = m.sup_norm()
    dm = ext_d(m).sup_norm()
    harm = harmonic_proj(m).sup_norm()
    return {
        "closedness": dm / sup if sup > 0 else dm,
        "harmonic_part": harm / sup if sup > 0 else harm,
    }


def f2(x1: VectorField, x2: VectorField, eps_div=None, eps_obstruction=None) -> GridField:
    """Scalar potential of mu2 (zero mean): f2 = Delta^-1 delta mu2.

    Raises ObstructedPotential when mu2 has a harmonic part beyond
    tolerance, in which case no potential exists on the torus.
    """
    if eps_obstruction is None:
        eps_obstruction = DEFAULT_TOLERANCES["eps_obstruction"]
    m = mu2(x1, x2, eps_div)
    cert = mu2_certificates(m)
    if cert["harmonic_part"] > eps_obstruction:
        raise ObstructedPotential(
            f"harmonic part of mu2 is {cert['harmonic_part']:.3e} "
            f"(> {eps_obstruction:.1e}); no potential exists on the torus"
        )
    m_clean = m - harmonic_proj(m)
    return laplace_inv(codiff(m_clean), eps_harm=np.inf)


def boundary_pair(x1: VectorField, x2: VectorField) -> VectorField:
    """The boundary of x1 ^ x2: -[x1, x2] (tower bracket)."""
    return -1 * tower_bracket(x1, x2)


def boundary_triple_terms(x1, x2, x3):
    """Boundary of x1^x2^x3 as signed wedge pairs: sum of s * [xi,xj] ^ xk.

    Returns [(sign, bracket_field, partner_field), ...] following
    d(x1^x2^x3) = -[x1,x2]^x3 + [x1,x3]^x2 - [x2,x3]^x1.
    """
    return [
        (-1, tower_bracket(x1, x2), x3),
        (+1, tower_bracket(x1, x3), x2),
        (-1, tower_bracket(x2, x3), x1),
    ]


def f2_of_boundary_triple(x1, x2, x3) -> GridField:
    """f2 evaluated on the boundary of a wedge triple."""
    out = None
    for sign, br, partner in boundary_triple_terms(x1, x2, x3):
        term = sign * f2(br, partner)
        out = term if out is None else out + term
    return out


def poisson_bracket(h1: HamiltonianPair, h2: HamiltonianPair) -> GridField:
    """{f1(b), f1(c)}(.) = nu(b, c, .), equal to (b x c) flat pointwise."""
    return pair_contraction(h1.field, h2.field)


def bracket_defect_residual(b: VectorField, c: VectorField) -> float:
    """Relative residual of {f1(b),f1(c)} - f1([b,c]) + d f2(b^c) = 0,
    measured on the non-harmonic sector (the harmonic obstruction is
    reported by mu2_certificates)."""
    pb = pair_contraction(b, c)
    lhs = pb - f1(tower_bracket(b, c)) + ext_d(f2(b, c))
    lhs = lhs - harmonic_proj(lhs)
    den = pb.sup_norm()
    return lhs.sup_norm() / den if den > 0 else lhs.sup_norm()


def eq_potential_residual(b: VectorField, c: VectorField) -> float:
    """Relative residual of d f2(b^c) = mu2(b,c) (the potential equation),
    non-harmonic sector."""
    m = mu2(b, c)
    lhs = ext_d(f2(b, c)) - m
    lhs = lhs - harmonic_proj(lhs)
    den = m.sup_norm()
    return lhs.sup_norm() / den if den > 0 else lhs.sup_norm()


def triple_evaluation_residual(x1, x2, x3) -> float:
    """Pointwise relative residual of f2(boundary(x1^x2^x3)) = nu(x1,x2,x3)."""
    lhs = f2_of_boundary_triple(x1, x2, x3)
    target = dot(cross(x1, x2), x3)
    target = target - target.mean()
    den = float(np.max(np.abs(target)))
    res = float(np.max(np.abs(lhs.comps[0] - target)))
    return res / den if den > 0 else res


def equivariance_defect(xi: VectorField, b: VectorField, eps_div=None) -> GridField:
    """L_xi f1(b) - f1([xi, b]); nonzero in general (Theorem on
    non-equivariance).  For xi = b this equals -d<B, b>, minus the
    differential of the helicity density."""
    require_divergence_free(xi, eps_div, "equivariance xi")
    require_divergence_free(b, eps_div, "equivariance b")
    lie = lie_derivative(xi, f1(b))
    return lie - f1(tower_bracket(xi, b))


def kks_pairing(w: VectorField, b: VectorField, c: VectorField) -> float:
    """The coadjoint-orbit symplectic pairing: integral of det[w, b, c]."""
    integrand = dot(w, cross(b, c))
    return float(np.sum(integrand) * w.grid.cell_volume)


def euler_vorticity_rhs(w: VectorField, eps_div=None, eps_mean=None) -> VectorField:
    """Instantaneous right-hand side of the vorticity equation:
    dw/dt = -[w, v] with v = curl^-1 w (hydrodynamical bracket)."""
    require_zero_mean(w, eps_mean, "vorticity")
    v = curl_inv(w, eps_div, eps_mean)
    return -1 * hydro_bracket(w, v, eps_div)


# -- loop-space operations ---------------------------------------------------

def rasetti_regge(b: VectorField, gamma, eps_div=None, rel_tol=None, max_refine=8) -> float:
    """Transgressed co-momentum along a closed curve: the line integral of
    f1(b), which equals minus the loop current of b.

    The 1-form is interpolated trilinearly; each polygon segment uses the
    composite midpoint rule with dyadic refinement until two successive
    levels agree to `rel_tol` relative.
    """
    from .interpolate import sample_form1_along  # local: avoids cycle

    if rel_tol is None:
        rel_tol = DEFAULT_TOLERANCES["quad_refine"]
    if not gamma.closed:
        raise OpenCurve("rasetti_regge needs a closed curve")
    h = f1(b, eps_div)
    prev = None
    for level in range(max_refine):
        value = sample_form1_along(h, gamma, subdiv=2**level)
        if prev is not None:
            scale = max(abs(value), abs(prev), 1e-30)
            if abs(value - prev) <= rel_tol * scale:
                return value
        prev = value
    return prev


def loop_2form(gamma, u: np.ndarray, v: np.ndarray) -> float:
    """Transgression of the volume form to loop space:
    Omega_gamma(u, v) = integral of nu(gamma', u, v) dt by the per-segment
    midpoint rule, with gamma' from vertex differences."""
    verts = gamma.vertices
    n = len(verts)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (n, 3) or v.shape != (n, 3):
        raise ValueError(f"need tangent data shaped ({n}, 3) matching the curve")
    nxt = np.roll(np.arange(n), -1)
    seg = verts[nxt] - verts  # gamma' dt over the segment
    um = 0.5 * (u + u[nxt])
    vm = 0.5 * (v + v[nxt])
    return float(np.sum(seg * np.cross(um, vm)))


# -- assembled certificate pack ----------------------------------------------

@dataclass
class ComomentumPack:
    """Co-momentum data for a family of named solenoidal fields, with the
    residual certificates of the defining identities."""

    f1_forms: dict = field(default_factory=dict)
    f2_values: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)

    @classmethod
    def build(cls, fields: dict, triples=(), eps_ham=None) -> "ComomentumPack":
        if eps_ham is None:
            eps_ham = DEFAULT_TOLERANCES["eps_ham"]
        pack = cls()
        names = list(fields)
        eq25 = {}
        gauge = {}
        for name in names:
            b = fields[name]
            h = f1(b)
            pack.f1_forms[name] = h
            eq25[name] = hamiltonian_residual(h, b)
            sup = h.sup_norm()
            gauge[name] = codiff(h).sup_norm() / sup if sup > 0 else 0.0
        eq26, eq29, harm = {}, {}, {}
        for i, ni in enumerate(names):
            for nj in names[i + 1:]:
                key = f"{ni},{nj}"
                pack.f2_values[key] = f2(fields[ni], fields[nj])
                eq26[key] = eq_potential_residual(fields[ni], fields[nj])
                eq29[key] = bracket_defect_residual(fields[ni], fields[nj])
                harm[key] = mu2_certificates(mu2(fields[ni], fields[nj]))[
                    "harmonic_part"
                ]
        eq27 = {}
        for (na, nb, nc) in triples:
            eq27[f"{na},{nb},{nc}"] = triple_evaluation_residual(
                fields[na], fields[nb], fields[nc]
            )
        pack.certificates = {
            "eq25": eq25,
            "eq26": eq26,
            "eq27": eq27,
            "eq29": eq29,
            "gauge": gauge,
            "mu2_harmonic": harm,
        }
        return pack
