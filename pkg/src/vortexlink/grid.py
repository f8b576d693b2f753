"""Periodic grid and the field containers living on it.

The computational domain is the flat torus [-L/2, L/2)^3 sampled on N^3
points; all analytic objects (forms of every degree, vector fields) are
arrays of point samples.  Degree-k forms are stored in the coordinate bases

    k=0: 1            k=1: dx, dy, dz
    k=2: dy^dz, dz^dx, dx^dy            k=3: dx^dy^dz

so the Euclidean Hodge star and the musical isomorphisms are pure component
relabelings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MixedGridError

FORM_COMPONENTS = {0: 1, 1: 3, 2: 3, 3: 1}


@dataclass(frozen=True)
class Grid3:
    """Uniform periodic N^3 grid on a cube of side `box_length`."""

    n_points: int
    box_length: float

    def __post_init__(self):
        if self.n_points < 8:
            raise ValueError(f"need N >= 8, got {self.n_points}")
        if not self.box_length > 0:
            raise ValueError("box_length must be positive")

    @property
    def spacing(self) -> float:
        return self.box_length / self.n_points

    @property
    def shape(self):
        n = self.n_points
        return (n, n, n)

    @property
    def cell_volume(self) -> float:
        return self.spacing**3

    def axis(self) -> np.ndarray:
        """Sample coordinates along one axis, box centered at the origin."""
        n, L = self.n_points, self.box_length
        return -L / 2 + L / n * np.arange(n)

    def meshgrid(self):
        x = self.axis()
        return np.meshgrid(x, x, x, indexing="ij")

    def __eq__(self, other):
        return (
            isinstance(other, Grid3)
            and self.n_points == other.n_points
            and math.isclose(self.box_length, other.box_length, rel_tol=1e-14)
        )

    def __hash__(self):
        return hash((self.n_points, round(self.box_length, 14)))


def _check_same_grid(a, b):
    if a.grid != b.grid:
        raise MixedGridError(
            f"grids differ: N={a.grid.n_points},L={a.grid.box_length} vs "
            f"N={b.grid.n_points},L={b.grid.box_length}"
        )


@dataclass
class GridField:
    """A degree-k form sampled on a Grid3.

    `comps` has shape (C(3,k), N, N, N) with the component order fixed in the
    module docstring.
    """

    grid: Grid3
    degree: int
    comps: np.ndarray

    def __post_init__(self):
        if self.degree not in FORM_COMPONENTS:
            raise ValueError(f"degree must be 0..3, got {self.degree}")
        self.comps = np.asarray(self.comps, dtype=np.float64)
        want = (FORM_COMPONENTS[self.degree],) + self.grid.shape
        if self.comps.shape != want:
            raise ValueError(f"component shape {self.comps.shape}, expected {want}")

    @classmethod
    def zeros(cls, grid, degree):
        return cls(grid, degree, np.zeros((FORM_COMPONENTS[degree],) + grid.shape))

    @classmethod
    def from_scalar(cls, grid, values, degree=0):
        if degree not in (0, 3):
            raise ValueError("scalar constructor only for degrees 0 and 3")
        return cls(grid, degree, np.asarray(values, dtype=np.float64)[None])

    def copy(self):
        return GridField(self.grid, self.degree, self.comps.copy())

    def __add__(self, other):
        _check_same_grid(self, other)
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        return GridField(self.grid, self.degree, self.comps + other.comps)

    def __sub__(self, other):
        _check_same_grid(self, other)
        if self.degree != other.degree:
            raise ValueError("cannot subtract forms of different degree")
        return GridField(self.grid, self.degree, self.comps - other.comps)

    def __mul__(self, scalar):
        return GridField(self.grid, self.degree, self.comps * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return GridField(self.grid, self.degree, -self.comps)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.comps)))

    def l2_norm(self) -> float:
        """L2 norm with the midpoint-rule measure."""
        return float(np.sqrt(np.sum(self.comps**2) * self.grid.cell_volume))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.comps)))


@dataclass
class VectorField:
    """A vector field on a Grid3; `comps` has shape (3, N, N, N)."""

    grid: Grid3
    comps: np.ndarray

    def __post_init__(self):
        self.comps = np.asarray(self.comps, dtype=np.float64)
        want = (3,) + self.grid.shape
        if self.comps.shape != want:
            raise ValueError(f"component shape {self.comps.shape}, expected {want}")

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros((3,) + grid.shape))

    def copy(self):
        return VectorField(self.grid, self.comps.copy())

    def __add__(self, other):
        _check_same_grid(self, other)
        return VectorField(self.grid, self.comps + other.comps)

    def __sub__(self, other):
        _check_same_grid(self, other)
        return VectorField(self.grid, self.comps - other.comps)

    def __mul__(self, scalar):
        return VectorField(self.grid, self.comps * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return VectorField(self.grid, -self.comps)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.comps)))

    def pointwise_norm(self) -> np.ndarray:
        return np.sqrt(np.sum(self.comps**2, axis=0))

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(self.comps**2) * self.grid.cell_volume))

    def mean(self) -> np.ndarray:
        return self.comps.reshape(3, -1).mean(axis=1)


def cross(a: VectorField, b: VectorField) -> VectorField:
    _check_same_grid(a, b)
    u, v = a.comps, b.comps
    return VectorField(
        a.grid,
        np.stack(
            [
                u[1] * v[2] - u[2] * v[1],
                u[2] * v[0] - u[0] * v[2],
                u[0] * v[1] - u[1] * v[0],
            ]
        ),
    )


def dot(a: VectorField, b: VectorField) -> np.ndarray:
    _check_same_grid(a, b)
    return np.sum(a.comps * b.comps, axis=0)
