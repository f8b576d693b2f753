"""Link diagrams, Wirtinger presentations and Milnor mu-bar invariants.

This is the combinatorial oracle: it shares no code with the grid pipeline.
A diagram is arcs (per-component cyclic sequences) plus crossings
(over-arc, split under-arc pair, sign).  Meridian generators are rewritten
to base meridians by depth-bounded conjugacy substitution, longitudes are
Magnus-expanded exactly over the integers, and mu-bar is a word
coefficient.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import InconsistentDiagram, IndeterminateInvariant, SceneError
from .magnus import MagnusSeries, word_series

DIAGRAM_SCHEMA = "vdiag-1"


@dataclass(frozen=True)
class DiagramCrossing:
    over: int        # arc id passing over
    under_in: int    # arc id entering the crossing below
    under_out: int   # arc id leaving the crossing below
    sign: int        # +1 or -1


@dataclass
class LinkDiagram:
    n_components: int
    arcs: list                 # per component: cyclic list of arc ids
    crossings: list            # DiagramCrossing records

    def __post_init__(self):
        self.validate()

    # -- structure ---------------------------------------------------------

    def arc_component(self, arc_id: int) -> int:
        for c, seq in enumerate(self.arcs):
            if arc_id in seq:
                return c
        raise InconsistentDiagram(f"arc {arc_id} belongs to no component")

    def validate(self):
        seen = set()
        for seq in self.arcs:
            if not seq:
                raise InconsistentDiagram("component with no arcs")
            for a in seq:
                if a in seen:
                    raise InconsistentDiagram(f"arc {a} in two components")
                seen.add(a)
        for x in self.crossings:
            if x.sign not in (-1, 1):
                raise InconsistentDiagram(f"bad sign {x.sign}")
            for a in (x.over, x.under_in, x.under_out):
                if a not in seen:
                    raise InconsistentDiagram(f"crossing uses unknown arc {a}")
            c = self.arc_component(x.under_in)
            seq = self.arcs[c]
            i = seq.index(x.under_in)
            if seq[(i + 1) % len(seq)] != x.under_out:
                raise InconsistentDiagram(
                    f"crossing does not split one under-arc: "
                    f"{x.under_in} -> {x.under_out}"
                )
        # every arc boundary must be produced by exactly one undercrossing
        for c, seq in enumerate(self.arcs):
            unders = [x for x in self.crossings if x.under_in in seq]
            if len(seq) > 1 and len(unders) != len(seq):
                raise InconsistentDiagram(
                    f"component {c}: {len(seq)} arcs but {len(unders)} "
                    "undercrossings"
                )

    def undercrossings_along(self, component: int):
        """Crossings under component, ordered by the arc sequence: entry t
        sits between arc t and arc t+1 (cyclically)."""
        seq = self.arcs[component]
        by_in = {x.under_in: x for x in self.crossings if x.under_in in seq}
        if not by_in:
            return []
        return [by_in[a] for a in seq if a in by_in]

    def self_writhe(self, component: int) -> int:
        seq = set(self.arcs[component])
        return sum(
            x.sign
            for x in self.crossings
            if x.under_in in seq and x.over in seq
        )

    # -- JSON ----------------------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "schema": DIAGRAM_SCHEMA,
            "components": self.n_components,
            "arcs": self.arcs,
            "crossings": [
                {"over": x.over, "under_in": x.under_in,
                 "under_out": x.under_out, "sign": x.sign}
                for x in self.crossings
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "LinkDiagram":
        doc = json.loads(text)
        if doc.get("schema") != DIAGRAM_SCHEMA:
            raise SceneError(f"expected schema {DIAGRAM_SCHEMA!r}")
        try:
            crossings = [
                DiagramCrossing(x["over"], x["under_in"], x["under_out"],
                                x["sign"])
                for x in doc["crossings"]
            ]
            return cls(doc["components"], doc["arcs"], crossings)
        except KeyError as k:
            raise SceneError(f"diagram document missing key {k}") from None


def diagram_from_curves(curves, direction, cross_angle=None, cross_sep=None) -> LinkDiagram:
    """Project curves along a generic direction and assemble the diagram.

    Arc ids are assigned per component in traversal order; raises
    DegenerateProjection through the crossing finder (the caller retries
    with a perturbed direction).
    """
    from .linking import find_crossings

    crossings = find_crossings(curves, direction, cross_angle, cross_sep)
    n = len(curves)
    # under-crossing parameter positions per component
    events = [[] for _ in range(n)]
    for idx, x in enumerate(crossings):
        events[x.comp_under].append((x.seg_under + x.s_under, idx))
    for ev in events:
        ev.sort()
    # arcs: component c has max(1, #under) arcs; arc t spans event t-1 -> t
    arc_ids = []
    next_id = 0
    for c in range(n):
        m = max(1, len(events[c]))
        arc_ids.append(list(range(next_id, next_id + m)))
        next_id += m

    def arc_at(comp: int, position: float) -> int:
        """Arc of `comp` containing the given parameter position."""
        ev = events[comp]
        if not ev:
            return arc_ids[comp][0]
        # arc t starts at event t-1: positions wrap cyclically
        for t in range(len(ev) - 1, -1, -1):
            if position >= ev[t][0]:
                return arc_ids[comp][(t + 1) % len(ev)]
        return arc_ids[comp][0]

    records = []
    for c in range(n):
        ev = events[c]
        for t, (_, idx) in enumerate(ev):
            x = crossings[idx]
            under_in = arc_ids[c][t]
            under_out = arc_ids[c][(t + 1) % len(ev)]
            over = arc_at(x.comp_over, x.seg_over + x.s_over)
            records.append(DiagramCrossing(over, under_in, under_out, x.sign))
    return LinkDiagram(n, arc_ids, records)


# -- Wirtinger presentation ------------------------------------------------------

@dataclass
class WirtingerPresentation:
    """One generator per arc, one conjugacy relation per crossing:
    out = over^-sign . in . over^sign."""

    generators: list
    relations: list  # (under_out, over, under_in, sign)


def wirtinger(d: LinkDiagram) -> WirtingerPresentation:
    gens = [a for seq in d.arcs for a in seq]
    rels = [(x.under_out, x.over, x.under_in, x.sign) for x in d.crossings]
    return WirtingerPresentation(gens, rels)


# -- meridian rewriting and longitudes --------------------------------------------

class _Rewriter:
    """Depth-bounded expansion of arc meridians into base-meridian words.

    Arc t+1 of a component equals the conjugate over^-sign . arc_t . over^sign
    (the direction matching our projection sign convention: with the other
    direction the degree-2 longitude coefficients fail to be projection
    invariants), unrolled to the component's base arc; over-arcs recurse
    with one less depth and bottom out at their component's meridian class
    (exact modulo weight > depth commutators).
    """

    def __init__(self, diagram: LinkDiagram):
        self.d = diagram
        self.base = {c: diagram.arcs[c][0] for c in range(diagram.n_components)}
        self.events = {
            c: diagram.undercrossings_along(c) for c in range(diagram.n_components)
        }
        self.arc_pos = {}
        for c, seq in enumerate(diagram.arcs):
            for t, a in enumerate(seq):
                self.arc_pos[a] = (c, t)
        self.memo = {}

    def arc_word(self, arc_id: int, depth: int):
        """Word in signed base-meridian letters (1-based component index)."""
        key = (arc_id, depth)
        if key in self.memo:
            return self.memo[key]
        c, t = self.arc_pos[arc_id]
        if depth <= 0 or t == 0:
            word = (c + 1,)
        else:
            conj = []
            for s in range(t - 1, -1, -1):  # o_{t-1} ... o_0, leftmost last
                x = self.events[c][s]
                over_word = self.arc_word(x.over, depth - 1)
                conj.extend(
                    _invert(over_word) if x.sign > 0 else over_word
                )
            word = tuple(conj) + (c + 1,) + _invert(tuple(conj))
        self.memo[key] = word
        return word


def _invert(word):
    return tuple(-w for w in reversed(word))


def longitude_word(d: LinkDiagram, component: int, depth: int = 3):
    """Longitude of a component as a word in base meridians: the over-arcs
    met while traversing it, with the blackboard framing removed by a
    g_component^(-writhe) tail.  The degree-1 self coefficient is zero."""
    rewriter = _Rewriter(d)
    letters = []
    for x in d.undercrossings_along(component):
        over = rewriter.arc_word(x.over, depth - 1)
        letters.extend(over if x.sign > 0 else _invert(over))
    w = d.self_writhe(component)
    mer = component + 1
    letters.extend([-mer if w > 0 else mer] * abs(w))
    return tuple(letters)


def _proper_subsequences(index):
    """Ordered proper subsequences of length >= 2."""
    n = len(index)
    out = set()
    for mask in range(1, 2**n - 1):
        sub = tuple(index[i] for i in range(n) if mask >> i & 1)
        if len(sub) >= 2:
            out.add(sub)
    return sorted(out, key=lambda s: (len(s), s))


def mu_bar(d: LinkDiagram, index, check_lower: bool = True) -> int:
    """Milnor mu-bar invariant of the multi-index (i_1 ... i_k i_last):
    the coefficient of X_{i_1}..X_{i_k} in the Magnus expansion of the
    longitude of component i_last.

    Requires all mu-bar over proper sub-multi-indices to vanish (the
    invariant is otherwise defined only modulo them): raises
    IndeterminateInvariant carrying the offending sub-index.
    """
    index = tuple(int(i) for i in index)
    if len(index) < 2:
        raise ValueError("mu-bar needs a multi-index of length >= 2")
    for i in index:
        if not 1 <= i <= d.n_components:
            raise ValueError(f"component index {i} out of range")
    if check_lower:
        for sub in _proper_subsequences(index):
            if mu_bar(d, sub, check_lower=False) != 0:
                raise IndeterminateInvariant(
                    f"lower invariant mu{''.join(map(str, sub))} is nonzero",
                    sub_index=sub,
                )
    truncation = len(index) - 1
    word = longitude_word(d, index[-1] - 1, depth=truncation)
    series = word_series(word, truncation)
    return series.coefficient(index[:-1])
