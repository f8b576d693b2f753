"""Link-scene documents (schema "vlink-1") and run configuration."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .constants import DEFAULT_TOLERANCES
from .curves import Link, PlanarCurve, PolygonalCurve, TubeParams, circle
from .errors import SceneError
from .grid import Grid3

SCENE_SCHEMA = "vlink-1"


def _require(doc, key, where="scene"):
    if key not in doc:
        raise SceneError(f"{where} document is missing the {key!r} key")
    return doc[key]


def component_from_doc(doc) -> PlanarCurve | PolygonalCurve:
    kind = _require(doc, "type", "component")
    n_samples = int(doc.get("samples", 256))
    if kind == "circle":
        c = circle(
            _require(doc, "center", "circle"),
            _require(doc, "normal", "circle"),
            float(_require(doc, "radius", "circle")),
            phase=float(doc.get("phase", 0.0)),
            n_samples=n_samples,
        )
        return c.reversed() if doc.get("reverse") else c
    if kind == "ellipse":
        c = PlanarCurve(
            np.asarray(_require(doc, "center", "ellipse"), dtype=float),
            np.asarray(_require(doc, "axis_u", "ellipse"), dtype=float),
            np.asarray(_require(doc, "axis_v", "ellipse"), dtype=float),
            phase=float(doc.get("phase", 0.0)),
            n_samples=n_samples,
        )
        return c.reversed() if doc.get("reverse") else c
    if kind == "polygon":
        c = PolygonalCurve(np.asarray(_require(doc, "vertices", "polygon"), dtype=float))
        return c.reversed() if doc.get("reverse") else c
    raise SceneError(f"unknown component type {kind!r}")


def component_to_doc(c) -> dict:
    if isinstance(c, PlanarCurve):
        return {
            "type": "ellipse",
            "center": c.center.tolist(),
            "axis_u": c.axis_u.tolist(),
            "axis_v": c.axis_v.tolist(),
            "phase": c.phase,
            "samples": c.n_samples,
        }
    return {"type": "polygon", "vertices": c.vertices.tolist()}


def scene_from_doc(doc) -> tuple[Grid3, Link]:
    if doc.get("schema") != SCENE_SCHEMA:
        raise SceneError(f"expected schema {SCENE_SCHEMA!r}, got {doc.get('schema')!r}")
    box = _require(doc, "box")
    grid = Grid3(int(_require(box, "N", "box")), float(_require(box, "L", "box")))
    tube_doc = _require(doc, "tube")
    tube = TubeParams(
        float(_require(tube_doc, "radius", "tube")),
        float(tube_doc.get("flux", 1.0)),
    )
    comps = [component_from_doc(c) for c in _require(doc, "components")]
    if not comps:
        raise SceneError("scene has no components")
    return grid, Link(comps, tube)


def load_scene(path) -> tuple[Grid3, Link]:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise SceneError(
                f"malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}"
            ) from None
    return scene_from_doc(doc)


def scene_to_doc(grid: Grid3, link: Link) -> dict:
    return {
        "schema": SCENE_SCHEMA,
        "box": {"N": grid.n_points, "L": grid.box_length},
        "tube": {"radius": link.tube.radius, "flux": link.tube.flux},
        "components": [component_to_doc(c) for c in link.components],
    }


def dump_scene(path, grid: Grid3, link: Link) -> None:
    with open(path, "w") as fh:
        json.dump(scene_to_doc(grid, link), fh, indent=2, sort_keys=True)
        fh.write("\n")


@dataclass
class Config:
    """Run configuration with documented defaults."""

    grid_n: int = 96
    grid_l: float = 2 * np.pi
    tube_radius: float = 0.3
    tube_flux: float = 1.0
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    seed: int = 0
    export_fields: bool = False

    @classmethod
    def from_doc(cls, doc) -> "Config":
        cfg = cls()
        grid = doc.get("grid", {})
        cfg.grid_n = int(grid.get("N", cfg.grid_n))
        cfg.grid_l = float(grid.get("L", cfg.grid_l))
        tube = doc.get("tube", {})
        cfg.tube_radius = float(tube.get("radius", cfg.tube_radius))
        cfg.tube_flux = float(tube.get("flux", cfg.tube_flux))
        tols = doc.get("tolerances", {})
        bad = set(tols) - set(cfg.tolerances)
        if bad:
            raise SceneError(f"unknown tolerance keys: {sorted(bad)}")
        for k, val in tols.items():
            if not val > 0:
                raise SceneError(f"tolerance {k} must be positive")
            cfg.tolerances[k] = float(val)
        cfg.seed = int(doc.get("seed", 0))
        out = doc.get("output", {})
        cfg.export_fields = bool(out.get("export_fields", False))
        if cfg.grid_n < 16:
            raise SceneError("grid N must be at least 16")
        return cfg

    @classmethod
    def load(cls, path) -> "Config":
        if path is None:
            return cls()
        with open(path) as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as e:
                raise SceneError(
                    f"malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}"
                ) from None
        return cls.from_doc(doc)
