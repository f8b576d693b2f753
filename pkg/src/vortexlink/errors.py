"""Exception types raised by validation gates across the package."""


class VortexLinkError(Exception):
    """Base class for all package errors."""


class MixedGridError(VortexLinkError):
    """Fields living on different grids were combined."""


class NonzeroHarmonicPart(VortexLinkError):
    """Inversion input has a harmonic (constant) component; project first."""


class NotDivergenceFree(VortexLinkError):
    """A vector field failed the spectral divergence test."""


class NonzeroMean(VortexLinkError):
    """An inversion input has a nonzero component mean."""


class ObstructedPotential(VortexLinkError):
    """mu2 has a harmonic part on the torus; no scalar potential exists."""


class OpenCurve(VortexLinkError):
    """A closed curve was required."""


class CurvesIntersect(VortexLinkError):
    """Curves are too close for the Gauss kernel quadrature."""


class DegenerateProjection(VortexLinkError):
    """Projection direction produced tangencies, near-parallel crossings or
    coincident crossing points; the caller should retry with a perturbed
    direction."""


class TubeTooThin(VortexLinkError):
    """Tube radius below 3 grid spacings; the mollifier is unresolvable."""


class TubeOverlap(VortexLinkError):
    """Tubes of distinct components intersect."""


class NotPlanar(VortexLinkError):
    """A planar curve (flat Seifert disc) was required."""


class ObstructedClass(VortexLinkError):
    """A meridian period exceeds the gate: the cohomology class is nonzero
    and the Massey step is undefined."""

    def __init__(self, message, periods=None):
        super().__init__(message)
        self.periods = periods or {}


class NoConvergence(VortexLinkError):
    """Iterative solve hit its iteration cap above tolerance."""


class MissingPrimitive(VortexLinkError):
    """A Massey step requires a primitive that was not solved."""


class InconsistentDiagram(VortexLinkError):
    """Link-diagram incidence data is inconsistent."""


class IndeterminateInvariant(VortexLinkError):
    """A lower-order Milnor invariant is nonzero, so the requested one is
    defined only modulo it; carries the offending sub-index."""

    def __init__(self, message, sub_index=None):
        super().__init__(message)
        self.sub_index = tuple(sub_index) if sub_index is not None else None


class SceneError(VortexLinkError):
    """Scene or diagram JSON failed validation."""
