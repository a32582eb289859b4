"""Closed surfaces modelled by pants decompositions and their dual graphs.

A pants decomposition of a genus-g surface has 3g-3 curves and 2g-2 pants.
Its dual graph has one trivalent vertex per pants and one edge per curve;
each vertex carries a cyclic ordering of its half-edges (the banding).

Every curve ``alpha_e`` is doubled into ``alpha_e`` and ``alpha'_e`` to form
a decomposition system.  For an edge with ends ``(v1, v2)`` the copy
``alpha_e`` (side 0) bounds the pants at ``v1`` and ``alpha'_e`` (side 1)
bounds the pants at ``v2``.  For a loop both copies bound the same pants;
the first occurrence of the loop in the vertex rotation is side 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import networkx as nx

from .errors import DomainError, MoveError, ValidationError

#: A boundary curve of the decomposition system: ``(edge id, side)``.
BoundaryCurve = tuple[str, int]


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    ids: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"code": self.code, "message": self.message, "ids": list(self.ids)}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        # truthy when there is something to report
        return bool(self.violations)

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}

    def raise_if_invalid(self, what: str) -> None:
        if self.violations:
            lines = "; ".join(v.message for v in self.violations[:5])
            raise ValidationError(f"invalid {what}: {lines}", self)


@dataclass(frozen=True)
class DualGraph:
    """Banded trivalent multigraph dual to a pants decomposition.

    ``rotations`` maps each vertex to its half-edges in cyclic order, given as
    edge ids (a loop is listed twice).  ``ends`` maps each edge to its two end
    vertices.  Insertion order of both is the canonical vertex/edge order.
    """

    genus: int
    rotations: dict[str, tuple[str, ...]]
    ends: dict[str, tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "rotations", {str(v): tuple(str(e) for e in hs) for v, hs in self.rotations.items()})
        object.__setattr__(self, "ends", {str(e): (str(a), str(b)) for e, (a, b) in self.ends.items()})

    def __hash__(self):
        return hash((self.genus, tuple(self.rotations.items()), tuple(self.ends.items())))

    @property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(self.rotations)

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(self.ends)

    def is_loop(self, edge: str) -> bool:
        a, b = self.ends[edge]
        return a == b

    def loops(self) -> tuple[str, ...]:
        return tuple(e for e in self.ends if self.is_loop(e))

    def slots(self, vertex: str) -> tuple[BoundaryCurve, ...]:
        """Boundary curves of the pants at ``vertex``, in rotation order."""
        seen: dict[str, int] = {}
        out = []
        for e in self.rotations[vertex]:
            if self.is_loop(e):
                side = seen.get(e, 0)
                seen[e] = side + 1
            else:
                side = 0 if self.ends[e][0] == vertex else 1
            out.append((e, side))
        return tuple(out)

    def pants_of(self, curve: BoundaryCurve) -> str:
        edge, side = curve
        return self.ends[edge][side]

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self.rotations)
        for e, (a, b) in self.ends.items():
            g.add_edge(a, b, key=e)
        return g

    def relabeled(self, vertex_map: dict[str, str], edge_map: dict[str, str]) -> DualGraph:
        return DualGraph(
            self.genus,
            {vertex_map[v]: tuple(edge_map[e] for e in hs) for v, hs in self.rotations.items()},
            {edge_map[e]: (vertex_map[a], vertex_map[b]) for e, (a, b) in self.ends.items()},
        )

    def half_edges(self, vertex: str) -> tuple[tuple[str, int], ...]:
        """Rotation at ``vertex`` as ``(edge, end index)`` half-edges."""
        return tuple((e, _end_index(self, vertex, i)) for i, e in enumerate(self.rotations[vertex]))

    def same_banding(self, other: DualGraph) -> bool:
        """Equal ends and equal cyclic half-edge orders at every vertex."""
        if self.genus != other.genus or self.ends != other.ends or set(self.rotations) != set(other.rotations):
            return False
        for v in self.rotations:
            mine, theirs = self.half_edges(v), other.half_edges(v)
            if len(mine) != len(theirs):
                return False
            if not any(mine == theirs[k:] + theirs[:k] for k in range(len(theirs))):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "vertices": [{"id": v, "halfEdges": list(hs)} for v, hs in self.rotations.items()],
            "edges": [{"id": e, "ends": list(ab)} for e, ab in self.ends.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> DualGraph:
        try:
            genus = int(data["genus"])
            rotations = {str(v["id"]): tuple(str(e) for e in v["halfEdges"]) for v in data["vertices"]}
            ends = {}
            for e in data["edges"]:
                a, b = e["ends"]
                ends[str(e["id"])] = (str(a), str(b))
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed dual graph JSON: {exc}") from exc
        return cls(genus, rotations, ends)


@dataclass(frozen=True)
class DecompositionSystem:
    """Pants and annulus pieces of ``P u P'`` derived from a dual graph."""

    base: DualGraph
    pants: dict[str, tuple[BoundaryCurve, ...]] = field(init=False)
    annuli: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "pants", {v: self.base.slots(v) for v in self.base.vertex_ids})
        object.__setattr__(self, "annuli", self.base.edge_ids)

    def __hash__(self):
        return hash(self.base)


@dataclass(frozen=True)
class SurfaceModel:
    graph: DualGraph
    name: str | None = None

    @property
    def genus(self) -> int:
        return self.graph.genus

    @property
    def system(self) -> DecompositionSystem:
        return DecompositionSystem(self.graph)

    def to_json(self):
        if self.name is not None:
            if self.name in CATALOG.get(self.genus, {}):
                return f"catalog:{self.name}"
            return f"catalog:{self.name}:{self.genus}"
        return self.graph.to_json()


# -- catalog ----------------------------------------------------------------


def _from_edges(genus: int, edges: list[tuple[str, str]], nvert: int) -> DualGraph:
    rotations: dict[str, list[str]] = {f"v{i}": [] for i in range(nvert)}
    ends = {}
    for i, (a, b) in enumerate(edges):
        e = f"e{i}"
        ends[e] = (a, b)
        rotations[a].append(e)
        rotations[b].append(e)
    return DualGraph(genus, {v: tuple(hs) for v, hs in rotations.items()}, ends)


def caterpillar(genus: int) -> DualGraph:
    """Loops on g leaf vertices hung off a path of g-2 spine vertices.

    For genus 2 this is the dumbbell; for genus 3 the tripod.
    """
    if genus < 2:
        raise DomainError(f"genus must be >= 2, got {genus}")
    leaves = [f"v{i}" for i in range(genus)]
    edges = [(w, w) for w in leaves]
    if genus == 2:
        edges.insert(1, (leaves[0], leaves[1]))
        return _from_edges(genus, edges, 2)
    spine = [f"v{genus + i}" for i in range(genus - 2)]
    # first spine vertex takes leaves 0 and 1, the last takes the final leaf,
    # and every spine vertex takes one leaf in between
    edges.append((spine[0], leaves[0]))
    for i, s in enumerate(spine):
        edges.append((s, leaves[i + 1]))
        if i + 1 < len(spine):
            edges.append((s, spine[i + 1]))
    edges.append((spine[-1], leaves[-1]))
    return _from_edges(genus, edges, 2 * genus - 2)


CATALOG: dict[int, dict[str, list[tuple[str, str]]]] = {
    2: {
        "theta": [("v0", "v1")] * 3,
        "dumbbell": [("v0", "v0"), ("v0", "v1"), ("v1", "v1")],
    },
    3: {
        "k4": [("v0", "v1"), ("v0", "v2"), ("v0", "v3"), ("v1", "v2"), ("v1", "v3"), ("v2", "v3")],
        "ladder": [("v0", "v1"), ("v0", "v1"), ("v2", "v3"), ("v2", "v3"), ("v0", "v2"), ("v1", "v3")],
        "chain": [("v0", "v0"), ("v0", "v1"), ("v1", "v2"), ("v1", "v2"), ("v2", "v3"), ("v3", "v3")],
        "lollipop": [("v0", "v0"), ("v0", "v1"), ("v1", "v2"), ("v1", "v3"), ("v2", "v3"), ("v2", "v3")],
        "tripod": [("v0", "v1"), ("v0", "v2"), ("v0", "v3"), ("v1", "v1"), ("v2", "v2"), ("v3", "v3")],
    },
}


def catalog_names(genus: int) -> tuple[str, ...]:
    """Names accepted by :func:`standard_surface` for ``genus``."""
    if genus < 2:
        raise DomainError(f"genus must be >= 2, got {genus}")
    return tuple(CATALOG.get(genus, {})) + ("caterpillar",)


def standard_surface(genus: int, name: str | None = None) -> SurfaceModel:
    """Canonical surface model of the given genus.

    Genus 2 offers ``theta`` (default) and ``dumbbell``; genus 3 offers
    ``k4`` (default), ``ladder``, ``chain``, ``lollipop`` and ``tripod``;
    every genus offers ``caterpillar``.
    """
    if genus < 2:
        raise DomainError(f"genus must be >= 2, got {genus}")
    table = CATALOG.get(genus, {})
    if name is None:
        name = next(iter(table), "caterpillar")
    if name == "caterpillar":
        return SurfaceModel(caterpillar(genus), name)
    if name not in table:
        raise DomainError(f"no catalog surface {name!r} for genus {genus}; choose from {catalog_names(genus)}")
    edges = table[name]
    return SurfaceModel(_from_edges(genus, edges, 2 * genus - 2), name)


def parse_graph_ref(ref: str) -> SurfaceModel:
    """Resolve ``catalog:name`` or ``catalog:name:genus``."""
    parts = ref.split(":")
    if parts[0] != "catalog" or len(parts) not in (2, 3):
        raise DomainError(f"not a catalog reference: {ref!r}")
    name = parts[1]
    if len(parts) == 3:
        return standard_surface(int(parts[2]), name)
    for g, table in CATALOG.items():
        if name in table:
            return standard_surface(g, name)
    raise DomainError(f"catalog name {name!r} needs an explicit genus (catalog:{name}:<g>)")


# -- validation ---------------------------------------------------------------


def validate_graph(g: DualGraph) -> ValidationReport:
    """Check every dual-graph invariant; an empty report means valid."""
    out: list[Violation] = []
    if g.genus < 2:
        out.append(Violation("genus", f"genus {g.genus} < 2"))
    if len(g.rotations) != 2 * g.genus - 2:
        out.append(Violation("vertex-count", f"{len(g.rotations)} vertices, expected 2g-2 = {2 * g.genus - 2}"))
    if len(g.ends) != 3 * g.genus - 3:
        out.append(Violation("edge-count", f"{len(g.ends)} edges, expected 3g-3 = {3 * g.genus - 3}"))

    incidence: dict[str, dict[str, int]] = {v: {} for v in g.rotations}
    for e, (a, b) in g.ends.items():
        for v in (a, b):
            if v not in incidence:
                out.append(Violation("unknown-vertex", f"edge {e} ends at unknown vertex {v}", (e, v)))
                continue
            incidence[v][e] = incidence[v].get(e, 0) + 1

    for v, hs in g.rotations.items():
        degree = sum(incidence[v].values())
        if degree != 3:
            out.append(Violation("degree", f"vertex {v} has degree {degree}", (v,)))
        listed: dict[str, int] = {}
        for e in hs:
            listed[e] = listed.get(e, 0) + 1
        if listed != incidence[v]:
            out.append(Violation("rotation", f"rotation at {v} does not list exactly its half-edges", (v,)))

    if g.rotations:
        graph = nx.MultiGraph()
        graph.add_nodes_from(g.rotations)
        graph.add_edges_from((a, b) for a, b in g.ends.values() if a in incidence and b in incidence)
        if not nx.is_connected(graph):
            comps = sorted(sorted(c) for c in nx.connected_components(graph))
            out.append(Violation("disconnected", f"graph has {len(comps)} components", tuple(c[0] for c in comps)))
    return ValidationReport(tuple(out))


def is_isomorphic(g1: DualGraph, g2: DualGraph) -> bool:
    """Multigraph isomorphism (loops and multiplicities respected, banding ignored)."""
    return nx.is_isomorphic(g1.to_networkx(), g2.to_networkx())


def brute_force_isomorphic(g1: DualGraph, g2: DualGraph) -> bool:
    """Isomorphism by trying every vertex bijection; for small graphs only."""
    v1, v2 = list(g1.vertex_ids), list(g2.vertex_ids)
    if len(v1) != len(v2) or len(g1.ends) != len(g2.ends):
        return False

    def multiset(g, relabel):
        return sorted(tuple(sorted((relabel[a], relabel[b]))) for a, b in g.ends.values())

    target = multiset(g2, {v: v for v in v2})
    for perm in itertools.permutations(v2):
        if multiset(g1, dict(zip(v1, perm))) == target:
            return True
    return False


# -- elementary moves ----------------------------------------------------------


def _rotate_to(hs: tuple[str, ...], e: str) -> list[int]:
    # stored indices of the rotation, cyclically rotated to start at ``e``
    i = hs.index(e)
    n = len(hs)
    return [(i + k) % n for k in range(n)]


def _end_index(g: DualGraph, vertex: str, pos: int) -> int:
    edge = g.rotations[vertex][pos]
    if g.is_loop(edge):
        return g.rotations[vertex][:pos].count(edge)
    return 0 if g.ends[edge][0] == vertex else 1


def elementary_shift(g: DualGraph, edge: str) -> DualGraph:
    """Dual-graph effect of an A-move on the curve of ``edge``.

    Local rule: with rotations ``(e, a, b)`` at the first end ``u`` and
    ``(e, c, d)`` at the second end ``v`` (each rotated to start at ``e``),
    the half-edges ``b`` and ``c`` trade vertices, giving ``(e, a, c)`` and
    ``(e, b, d)``.  Applying the rule twice restores the original banding
    (see :meth:`DualGraph.same_banding`).
    """
    if edge not in g.ends:
        raise DomainError(f"unknown edge {edge!r}")
    if g.is_loop(edge):
        raise MoveError(f"edge {edge} is a loop; only S-moves apply and they leave the graph unchanged")
    u, v = g.ends[edge]
    ru = _rotate_to(g.rotations[u], edge)
    rv = _rotate_to(g.rotations[v], edge)
    hu = [(g.rotations[u][i], _end_index(g, u, i)) for i in ru]
    hv = [(g.rotations[v][i], _end_index(g, v, i)) for i in rv]
    (_, a, b), (_, c, d) = hu, hv

    ends = {k: list(x) for k, x in g.ends.items()}
    ends[b[0]][b[1]] = v
    ends[c[0]][c[1]] = u
    new_ends = {k: tuple(x) for k, x in ends.items()}
    rotations = dict(g.rotations)
    for w, order, halves in ((u, ru, (hu[0], a, c)), (v, rv, (hv[0], b, d))):
        loop = next((h for h in halves if new_ends[h[0]][0] == new_ends[h[0]][1] and h[1] == 0), None)
        if loop is None:
            rotations[w] = _place(order, tuple(h[0] for h in halves))
        else:
            # a loop's end 0 must be its first listed occurrence
            k = halves.index(loop)
            rotations[w] = tuple(h[0] for h in halves[k:] + halves[:k])
    return DualGraph(g.genus, rotations, new_ends)


def _place(order: list[int], values: tuple[str, ...]) -> tuple[str, ...]:
    # keep the stored starting point of the cyclic order
    out = [""] * len(order)
    for i, x in zip(order, values):
        out[i] = x
    return tuple(out)
