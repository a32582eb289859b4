"""Multicurves in Dehn-Thurston position, stored as combinatorial arc systems.

Points live on the boundary curves ``(edge, side)`` of the decomposition
system.  A pants arc joins an on-curve point to another on-curve point or to
a crossing point; crossing points come in over/under pairs, one pair per
come-back arc.  An annulus arc at edge ``e`` joins a point on side 0 to a
point on side 1 and carries an integer swift number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .errors import DomainError, ParityError, ValidationError
from .surface import (
    BoundaryCurve,
    DualGraph,
    SurfaceModel,
    ValidationReport,
    Violation,
    parse_graph_ref,
    standard_surface,
    validate_graph,
)


@dataclass(frozen=True)
class CrossingPair:
    over: str
    under: str
    pants: str


@dataclass(frozen=True)
class PantsArc:
    pants: str
    ends: tuple[str, str]

    kind = "pants"


@dataclass(frozen=True)
class AnnulusArc:
    edge: str
    ends: tuple[str, str]  # (point on side 0, point on side 1)
    swift: int = 0

    kind = "annulus"


Arc = Union[PantsArc, AnnulusArc]


@dataclass(frozen=True)
class ArcSystem:
    surface: SurfaceModel
    on_curve: dict[BoundaryCurve, tuple[str, ...]]
    crossing_pairs: tuple[CrossingPair, ...] = ()
    arcs: tuple[Arc, ...] = ()
    parallel: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        g = self.surface.graph
        on_curve = {(e, s): tuple(self.on_curve.get((e, s), ())) for e in g.edge_ids for s in (0, 1)}
        extra = {k: tuple(v) for k, v in self.on_curve.items() if k not in on_curve}
        on_curve.update(extra)
        object.__setattr__(self, "on_curve", on_curve)
        object.__setattr__(self, "crossing_pairs", tuple(self.crossing_pairs))
        object.__setattr__(self, "arcs", tuple(self.arcs))
        object.__setattr__(self, "parallel", {e: n for e, n in self.parallel.items() if n})

    def __hash__(self):
        return hash((self.surface, tuple(self.on_curve.items()), self.crossing_pairs, self.arcs,
                     tuple(sorted(self.parallel.items()))))

    @property
    def graph(self) -> DualGraph:
        return self.surface.graph

    def point_curve(self) -> dict[str, BoundaryCurve]:
        return {p: curve for curve, pts in self.on_curve.items() for p in pts}

    def pants_arcs(self) -> list[PantsArc]:
        return [a for a in self.arcs if isinstance(a, PantsArc)]

    def annulus_arcs(self) -> list[AnnulusArc]:
        return [a for a in self.arcs if isinstance(a, AnnulusArc)]

    def crossing_role(self) -> dict[str, tuple[str, CrossingPair]]:
        """Crossing point id -> ("over" | "under", its pair)."""
        out = {}
        for cp in self.crossing_pairs:
            out[cp.over] = ("over", cp)
            out[cp.under] = ("under", cp)
        return out

    def counts(self) -> dict[str, int]:
        return {e: len(self.on_curve[(e, 0)]) for e in self.graph.edge_ids}


@dataclass(frozen=True)
class IntersectionProfile:
    per_edge: dict[str, int]
    total: int
    max: int
    max_edge: str | None
    m_gamma: int

    def to_json(self) -> dict:
        return {
            "perEdge": dict(self.per_edge),
            "total": self.total,
            "max": self.max,
            "maxEdge": self.max_edge,
            "mGamma": self.m_gamma,
        }


@dataclass(frozen=True)
class PantsPattern:
    """Arc counts in one pants piece with boundary counts ``(n1, n2, n3)``."""

    x12: int
    x13: int
    x23: int
    comebacks: tuple[int, int, int]

    def between(self, i: int, j: int) -> int:
        return {frozenset((0, 1)): self.x12, frozenset((0, 2)): self.x13, frozenset((1, 2)): self.x23}[
            frozenset((i, j))
        ]


def build_pants_pattern(n1: int, n2: int, n3: int) -> PantsPattern:
    """Minimal-position arc counts for a pants piece.

    ``x_ij`` counts arcs between boundaries i and j.  When one boundary
    dominates (``n_i > n_j + n_k``) the excess is absorbed by
    ``(n_i - n_j - n_k) / 2`` come-back arcs at that boundary.
    """
    n = (n1, n2, n3)
    if any(x < 0 for x in n):
        raise DomainError(f"boundary counts must be non-negative: {n}")
    if sum(n) % 2:
        raise ParityError(f"boundary counts {n} have odd sum")
    cb = [0, 0, 0]
    x = {}
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        if n[i] > n[j] + n[k]:
            cb[i] = (n[i] - n[j] - n[k]) // 2
            x[frozenset((i, j))] = n[j]
            x[frozenset((i, k))] = n[k]
            x[frozenset((j, k))] = 0
            break
    else:
        for i in range(3):
            j, k = (i + 1) % 3, (i + 2) % 3
            x[frozenset((i, j))] = max(0, (n[i] + n[j] - n[k]) // 2)
    return PantsPattern(x[frozenset((0, 1))], x[frozenset((0, 2))], x[frozenset((1, 2))], tuple(cb))


# -- validation ---------------------------------------------------------------


def validate_arc_system(a: ArcSystem) -> ValidationReport:
    """Report every violated arc-system invariant; empty iff valid."""
    g = a.graph
    out: list[Violation] = []

    def bad(code, msg, *ids):
        out.append(Violation(code, msg, tuple(str(i) for i in ids)))

    valid_curves = {(e, s) for e in g.edge_ids for s in (0, 1)}
    for curve in a.on_curve:
        if curve not in valid_curves:
            bad("unknown-curve", f"boundary curve {curve} is not in the decomposition system", *map(str, curve))

    seen: dict[str, str] = {}
    for curve, pts in a.on_curve.items():
        for p in pts:
            if p in seen:
                bad("duplicate-point", f"point {p} listed more than once", p)
            seen[p] = "curve"
    role = {}
    for cp in a.crossing_pairs:
        if cp.pants not in g.rotations:
            bad("unknown-pants", f"crossing pair ({cp.over}, {cp.under}) in unknown pants {cp.pants}", cp.pants)
        if cp.over == cp.under:
            bad("crossing-pair", f"crossing pair uses {cp.over} as both over and under point", cp.over)
        for p in (cp.over, cp.under):
            if p in seen:
                bad("duplicate-point", f"crossing point {p} reused", p)
            seen[p] = "crossing"
            role[p] = cp

    point_curve = a.point_curve()
    pants_ends: dict[str, int] = {p: 0 for p in seen}
    annulus_ends: dict[str, int] = {p: 0 for p in seen}
    annulus_count = {e: 0 for e in g.edge_ids}
    comeback_at: dict[str, dict[BoundaryCurve, int]] = {v: {} for v in g.rotations}
    pair_curves: dict[CrossingPair, list[BoundaryCurve]] = {cp: [] for cp in a.crossing_pairs}

    for arc in a.arcs:
        if isinstance(arc, PantsArc):
            v = arc.pants
            if v not in g.rotations:
                bad("unknown-pants", f"pants arc {arc.ends} in unknown pants {v}", v)
                continue
            slots = set(g.slots(v))
            p, q = arc.ends
            for x in (p, q):
                if x not in seen:
                    bad("unknown-point", f"pants arc endpoint {x} is not declared", x)
                else:
                    pants_ends[x] += 1
            if p in role:
                bad("arc-orientation", f"pants arc must start at an on-curve point, not crossing point {p}", p)
                continue
            if p in point_curve and point_curve[p] not in slots:
                bad("wrong-pants", f"point {p} is not on a boundary of pants {v}", p, v)
            if q in role:
                cp = role[q]
                if cp.pants != v:
                    bad("wrong-pants", f"crossing point {q} belongs to pants {cp.pants}, arc is in {v}", q, v)
                if p in point_curve:
                    pair_curves[cp].append(point_curve[p])
            elif q in point_curve:
                if point_curve[q] not in slots:
                    bad("wrong-pants", f"point {q} is not on a boundary of pants {v}", q, v)
                if p in point_curve and point_curve[p] == point_curve[q]:
                    bad("unsplit-comeback", f"pants arc {p}-{q} returns to the same boundary without a crossing pair", p, q)
        else:
            e = arc.edge
            if e not in g.ends:
                bad("unknown-edge", f"annulus arc on unknown edge {e}", e)
                continue
            annulus_count[e] += 1
            p, q = arc.ends
            for x in (p, q):
                if x not in seen:
                    bad("unknown-point", f"annulus arc endpoint {x} is not declared", x)
                else:
                    annulus_ends[x] += 1
            if point_curve.get(p) != (e, 0) or point_curve.get(q) != (e, 1):
                bad("annulus-ends", f"annulus arc at {e} must join a point of ({e}, 0) to a point of ({e}, 1)", p, q)
            if not isinstance(arc.swift, int):
                bad("swift", f"swift number of annulus arc {p}-{q} is not an integer", p, q)

    for p, kind in seen.items():
        if kind == "curve":
            if pants_ends[p] != 1 or annulus_ends[p] != 1:
                bad("degree", f"on-curve point {p} has {pants_ends[p]} pants and {annulus_ends[p]} annulus arc ends", p)
        else:
            if pants_ends[p] != 1 or annulus_ends[p] != 0:
                bad("degree", f"crossing point {p} has degree {pants_ends[p] + annulus_ends[p]}", p)

    for cp, curves in pair_curves.items():
        if len(curves) == 2 and curves[0] != curves[1]:
            bad("comeback-ends", f"come-back pair ({cp.over}, {cp.under}) joins different boundary curves", cp.over, cp.under)
        if len(curves) == 2 and curves[0] == curves[1]:
            comeback_at[cp.pants][curves[0]] = comeback_at[cp.pants].get(curves[0], 0) + 1

    for e in g.edge_ids:
        n0, n1 = len(a.on_curve[(e, 0)]), len(a.on_curve[(e, 1)])
        if not (n0 == n1 == annulus_count[e]):
            bad("count", f"edge {e}: {n0} and {n1} boundary points but {annulus_count[e]} annulus arcs", e)

    for v in g.rotations:
        slots = g.slots(v)
        n = [len(a.on_curve[s]) for s in slots]
        if sum(n) % 2:
            bad("parity", f"pants {v} has odd boundary total {n}", v)
            continue
        cbs = comeback_at[v]
        carrying = [s for s in slots if cbs.get(s)]
        if len(carrying) > 1:
            bad("comeback", f"pants {v} has come-backs on more than one boundary", v)
        for i, s in enumerate(slots):
            others = sum(n) - n[i]
            expected = (n[i] - others) // 2 if n[i] > others else 0
            if cbs.get(s, 0) != expected:
                if cbs.get(s) and n[i] <= others:
                    msg = f"pants {v}: come-backs on {s} although {n[i]} <= {others}"
                else:
                    msg = f"pants {v}: {cbs.get(s, 0)} come-backs on {s}, minimal position needs {expected}"
                bad("comeback", msg, v, *map(str, s))

    for e, k in a.parallel.items():
        if e not in g.ends:
            bad("unknown-edge", f"parallel components on unknown edge {e}", e)
        elif not isinstance(k, int) or k < 0:
            bad("parallel", f"parallel component count on {e} must be a non-negative integer", e)

    return ValidationReport(tuple(out))


def _require_valid(a: ArcSystem) -> None:
    validate_arc_system(a).raise_if_invalid("arc system")


# -- derived data ---------------------------------------------------------------


def intersection_profile(a: ArcSystem) -> IntersectionProfile:
    _require_valid(a)
    per_edge = a.counts()
    total = sum(per_edge.values())
    top = max(per_edge.values(), default=0)
    max_edge = next((e for e, n in per_edge.items() if n == top), None) if top else None
    return IntersectionProfile(per_edge, total, top, max_edge, sum(1 for n in per_edge.values() if n))


def components(a: ArcSystem) -> int:
    """Number of closed components, parallel copies included."""
    adj: dict[str, list[str]] = {}

    def link(p, q):
        adj.setdefault(p, []).append(q)
        adj.setdefault(q, []).append(p)

    for arc in a.arcs:
        link(*arc.ends)
    for cp in a.crossing_pairs:
        link(cp.over, cp.under)
    seen: set[str] = set()
    cycles = 0
    for start in adj:
        if start in seen:
            continue
        cycles += 1
        stack = [start]
        while stack:
            p = stack.pop()
            if p in seen:
                continue
            seen.add(p)
            stack.extend(adj[p])
    return cycles + sum(a.parallel.values())


def split_parallel(a: ArcSystem) -> tuple[ArcSystem, dict[str, int]]:
    core = ArcSystem(a.surface, a.on_curve, a.crossing_pairs, a.arcs, {})
    return core, dict(a.parallel)


# -- construction from Dehn-Thurston coordinates ----------------------------------


def _swift(m: int, i: int, t: int) -> int:
    # angles in units of pi of the m points on each side of the annulus;
    # count quarter-turn reference crossings swept while unrolling i -> i - t
    def angle(u: int) -> Fraction:
        return -1 + Fraction(3 * (u % m) + 1, 3 * m) + 2 * (u // m)

    lo, hi = sorted((angle(i), angle(i - t)))
    first = math.ceil(lo + Fraction(1, 2))
    last = math.floor(hi + Fraction(1, 2))
    crossings = sum(1 for k in range(first, last + 1) if lo < k - Fraction(1, 2) < hi)
    return crossings if t > 0 else -crossings


def dehn_thurston_system(surface: SurfaceModel, m: Mapping[str, int], t: Mapping[str, int] | None = None) -> ArcSystem:
    """Build the arc system with intersection numbers ``m`` and twists ``t``.

    Edges with ``m_e = 0`` and ``t_e > 0`` contribute ``t_e`` parallel copies
    of their curve.  Point ids have the form ``"edge:side:index"``.
    """
    g = surface.graph
    t = dict(t or {})
    m = {e: int(m.get(e, 0)) for e in g.edge_ids}
    unknown = (set(m) | set(t)) - set(g.edge_ids)
    if unknown:
        raise DomainError(f"unknown edges {sorted(unknown)}")
    if any(v < 0 for v in m.values()):
        raise DomainError("intersection numbers must be non-negative")

    on_curve = {(e, s): tuple(f"{e}:{s}:{i}" for i in range(m[e])) for e in g.edge_ids for s in (0, 1)}
    arcs: list[Arc] = []
    pairs: list[CrossingPair] = []
    parallel: dict[str, int] = {}

    for v in g.vertex_ids:
        slots = g.slots(v)
        n = [m[e] for e, _ in slots]
        pat = build_pants_pattern(*n)
        blocks = []
        for i, curve in enumerate(slots):
            pts = list(on_curve[curve])
            nxt, prv = (i + 1) % 3, (i + 2) % 3
            a_n, a_c = pat.between(i, nxt), 2 * pat.comebacks[i]
            blocks.append((pts[:a_n], pts[a_n:a_n + a_c], pts[a_n + a_c:]))
        for i in range(3):
            to_next = blocks[i][0]
            from_prev = blocks[(i + 1) % 3][2]
            for p, q in zip(to_next, reversed(from_prev)):
                arcs.append(PantsArc(v, (p, q)))
            cb = blocks[i][1]
            for k in range(len(cb) // 2):
                lo_pt, hi_pt = cb[k], cb[len(cb) - 1 - k]
                over, under = f"{v}:cb{i}:{k}:o", f"{v}:cb{i}:{k}:u"
                pairs.append(CrossingPair(over, under, v))
                arcs.append(PantsArc(v, (lo_pt, over)))
                arcs.append(PantsArc(v, (hi_pt, under)))

    for e in g.edge_ids:
        twist = int(t.get(e, 0))
        if m[e] == 0:
            if twist < 0:
                raise DomainError(f"edge {e}: parallel copy count must be non-negative, got {twist}")
            if twist:
                parallel[e] = twist
            continue
        for i in range(m[e]):
            j = (i - twist) % m[e]
            arcs.append(AnnulusArc(e, (f"{e}:0:{i}", f"{e}:1:{j}"), _swift(m[e], i, twist)))

    return ArcSystem(surface, on_curve, tuple(pairs), tuple(arcs), parallel)


def smove_system() -> ArcSystem:
    """Curve meeting the loop curve of the genus-2 dumbbell once."""
    return dehn_thurston_system(standard_surface(2, "dumbbell"), {"e0": 1})


def amove_system() -> ArcSystem:
    """Curve meeting one theta-graph curve twice and missing the others."""
    return dehn_thurston_system(standard_surface(2, "theta"), {"e0": 2})


EXAMPLES = {"smove": smove_system, "amove": amove_system}


# -- relabeling -------------------------------------------------------------------


def relabel(a: ArcSystem, point_map: Mapping[str, str] | None = None,
            edge_map: Mapping[str, str] | None = None, vertex_map: Mapping[str, str] | None = None) -> ArcSystem:
    """Rename points, edges and pants by bijections (identity where omitted)."""
    g = a.graph
    pm = {p: p for p in _all_points(a)}
    pm.update(point_map or {})
    em = {e: e for e in g.edge_ids}
    em.update(edge_map or {})
    vm = {v: v for v in g.vertex_ids}
    vm.update(vertex_map or {})
    graph = g.relabeled(vm, em)
    surface = SurfaceModel(graph) if (edge_map or vertex_map) else a.surface
    return ArcSystem(
        surface,
        {(em[e], s): tuple(pm[p] for p in pts) for (e, s), pts in a.on_curve.items()},
        tuple(CrossingPair(pm[c.over], pm[c.under], vm[c.pants]) for c in a.crossing_pairs),
        tuple(
            PantsArc(vm[x.pants], (pm[x.ends[0]], pm[x.ends[1]])) if isinstance(x, PantsArc)
            else AnnulusArc(em[x.edge], (pm[x.ends[0]], pm[x.ends[1]]), x.swift)
            for x in a.arcs
        ),
        {em[e]: n for e, n in a.parallel.items()},
    )


def _all_points(a: ArcSystem) -> list[str]:
    pts = [p for ps in a.on_curve.values() for p in ps]
    for c in a.crossing_pairs:
        pts += [c.over, c.under]
    return pts


# -- JSON ---------------------------------------------------------------------------


def to_json(a: ArcSystem) -> dict:
    arcs = []
    for x in a.arcs:
        if isinstance(x, PantsArc):
            arcs.append({"type": "pants", "pantsPiece": x.pants, "ends": list(x.ends)})
        else:
            arcs.append({"type": "annulus", "edge": x.edge, "ends": list(x.ends), "swift": x.swift})
    return {
        "surface": a.surface.to_json(),
        "onCurvePoints": [
            {"edge": e, "side": s, "points": list(pts)} for (e, s), pts in a.on_curve.items() if pts
        ],
        "crossingPairs": [{"over": c.over, "under": c.under, "pantsPiece": c.pants} for c in a.crossing_pairs],
        "arcs": arcs,
        "parallelComponents": dict(sorted(a.parallel.items())),
    }


def surface_from_json(data) -> SurfaceModel:
    if isinstance(data, str):
        return parse_graph_ref(data)
    if isinstance(data, dict):
        graph = DualGraph.from_json(data)
        validate_graph(graph).raise_if_invalid("dual graph")
        return SurfaceModel(graph)
    raise DomainError("surface must be a catalog reference or a dual graph object")


def from_json(data: dict) -> ArcSystem:
    try:
        surface = surface_from_json(data["surface"])
        on_curve = {}
        for entry in data.get("onCurvePoints", []):
            key = (str(entry["edge"]), int(entry["side"]))
            if key in on_curve:
                raise DomainError(f"boundary curve {key} listed twice")
            on_curve[key] = tuple(str(p) for p in entry["points"])
        pairs = tuple(
            CrossingPair(str(c["over"]), str(c["under"]), str(c["pantsPiece"])) for c in data.get("crossingPairs", [])
        )
        arcs: list[Arc] = []
        for x in data.get("arcs", []):
            p, q = x["ends"]
            if x["type"] == "pants":
                arcs.append(PantsArc(str(x["pantsPiece"]), (str(p), str(q))))
            elif x["type"] == "annulus":
                swift = x.get("swift", 0)
                if isinstance(swift, bool) or not isinstance(swift, int):
                    raise DomainError(f"swift must be an integer, got {swift!r}")
                arcs.append(AnnulusArc(str(x["edge"]), (str(p), str(q)), swift))
            else:
                raise DomainError(f"unknown arc type {x['type']!r}")
        parallel = {str(e): int(n) for e, n in data.get("parallelComponents", {}).items()}
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"malformed arc system JSON: {exc!r}") from exc
    return ArcSystem(surface, on_curve, pairs, tuple(arcs), parallel)


def load(data: dict) -> ArcSystem:
    """Parse and validate; raises ValidationError with the full report."""
    a = from_json(data)
    _require_valid(a)
    return a


__all__ = [
    "Arc",
    "AnnulusArc",
    "ArcSystem",
    "CrossingPair",
    "IntersectionProfile",
    "PantsArc",
    "PantsPattern",
    "ValidationError",
    "amove_system",
    "build_pants_pattern",
    "components",
    "dehn_thurston_system",
    "from_json",
    "intersection_profile",
    "load",
    "relabel",
    "smove_system",
    "split_parallel",
    "to_json",
    "validate_arc_system",
]
