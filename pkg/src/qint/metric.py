"""Metrification of pair functions on finite sets, and path metrics.

The metrification of ``f`` is the infimum, over finite chains from x to y, of
the summed costs ``min(f(a, b), f(b, a))`` of consecutive steps.  On a finite
set a chain that revisits a point can be shortened without increasing its
cost, so the infimum is attained by simple chains and equals the all-pairs
shortest path closure of the symmetrized costs.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import DomainError

INF = math.inf


def _value(x):
    if x is INF or x == "inf":
        return INF
    if isinstance(x, float):
        if math.isinf(x) and x > 0:
            return INF
        raise DomainError(f"pair values must be exact rationals or 'inf', got {x!r}")
    return Fraction(x)


@dataclass(frozen=True)
class PairFunction:
    """Non-negative function on ordered pairs; absent pairs are +inf, the diagonal is 0."""

    points: tuple[str, ...]
    values: dict[tuple[str, str], Fraction]

    def __post_init__(self):
        pts = tuple(str(p) for p in self.points)
        if len(set(pts)) != len(pts):
            raise DomainError("duplicate point labels")
        vals = {}
        for (x, y), v in self.values.items():
            x, y = str(x), str(y)
            if x not in pts or y not in pts:
                raise DomainError(f"pair ({x}, {y}) is outside the point set")
            v = _value(v)
            if v < 0:
                raise DomainError(f"negative value {v} at ({x}, {y})")
            if x != y:
                vals[(x, y)] = v
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    def __call__(self, x: str, y: str):
        if x == y:
            return Fraction(0)
        return self.values.get((x, y), INF)

    def __hash__(self):
        return hash((self.points, tuple(sorted(self.values.items()))))

    def symmetrized(self, x: str, y: str):
        return min(self(x, y), self(y, x))


@dataclass(frozen=True)
class FiniteMetric:
    points: tuple[str, ...]
    d: dict[tuple[str, str], Fraction]

    def __call__(self, x: str, y: str):
        return self.d[(x, y)]

    def __hash__(self):
        return hash((self.points, tuple(sorted(self.d.items(), key=lambda kv: kv[0]))))

    def is_semimetric(self) -> bool:
        pts = self.points
        for x in pts:
            if self.d[(x, x)] != 0:
                return False
            for y in pts:
                if self.d[(x, y)] < 0 or self.d[(x, y)] != self.d[(y, x)]:
                    return False
                for z in pts:
                    if self.d[(x, z)] > self.d[(x, y)] + self.d[(y, z)]:
                        return False
        return True

    def is_metric(self) -> bool:
        return self.is_semimetric() and all(self.d[(x, y)] > 0 for x in self.points for y in self.points if x != y)

    def as_pair_function(self) -> PairFunction:
        return PairFunction(self.points, {k: v for k, v in self.d.items() if v != INF})

    def to_rows(self) -> list[tuple[str, str, str]]:
        return [(x, y, render(self.d[(x, y)])) for x in self.points for y in self.points]


def render(v) -> str:
    return "inf" if v == INF else str(v)


def metrify(f: PairFunction) -> FiniteMetric:
    """Largest semi-metric bounded by ``f`` (Floyd-Warshall on exact values)."""
    pts = f.points
    d = {(x, y): f.symmetrized(x, y) for x in pts for y in pts}
    for k in pts:
        for i in pts:
            dik = d[(i, k)]
            if dik == INF:
                continue
            for j in pts:
                via = dik + d[(k, j)]
                if via < d[(i, j)]:
                    d[(i, j)] = via
    return FiniteMetric(pts, {k: (v if v == INF else Fraction(v)) for k, v in d.items()})


def path_metric(vertices: Iterable[str], edges: Iterable[tuple[str, str]]) -> FiniteMetric:
    """Unit-length graph distance by breadth-first search; unreachable pairs are inf."""
    pts = tuple(str(v) for v in vertices)
    adj: dict[str, set[str]] = {v: set() for v in pts}
    for u, v in edges:
        u, v = str(u), str(v)
        if u not in adj or v not in adj:
            raise DomainError(f"edge ({u}, {v}) uses an unknown vertex")
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    d = {}
    for s in pts:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in sorted(adj[u]):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        for t in pts:
            d[(s, t)] = Fraction(dist[t]) if t in dist else INF
    return FiniteMetric(pts, d)


# -- property checks ------------------------------------------------------------


@dataclass
class PropertyReport:
    checks: dict[str, bool] = field(default_factory=dict)
    falsifications: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    def record(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks[name] = self.checks.get(name, True) and ok
        if not ok:
            self.falsifications.append(f"{name}: {detail}" if detail else name)

    @property
    def passed(self) -> bool:
        return not self.falsifications

    def to_json(self) -> dict:
        return {"checks": dict(self.checks), "falsifications": list(self.falsifications),
                "skipped": list(self.skipped), "passed": self.passed}


def check_metrification_properties(
    f: PairFunction,
    g: PairFunction | None = None,
    group: Iterable[Mapping[str, str]] = (),
    semimetrics: Iterable[FiniteMetric] = (),
    metrify_fn: Callable[[PairFunction], FiniteMetric] = metrify,
) -> PropertyReport:
    """Check the metrification properties on concrete inputs.

    Supplied semi-metrics not bounded by ``f`` are listed in ``skipped``.

    (a) ``d_f`` is a semi-metric with ``d_f <= f``; (b) every supplied
    semi-metric ``d <= f`` satisfies ``d <= d_f``; (c) if ``f >= B > 0`` off
    the diagonal then ``d_f`` is a metric; (d) ``d_f`` is invariant under
    every supplied permutation preserving ``f``; (e) ``f <= g`` implies
    ``d_f <= d_g``.
    """
    rep = PropertyReport()
    pts = f.points
    df = metrify_fn(f)
    rep.record("a", df.is_semimetric(), "not a semi-metric")
    for x in pts:
        for y in pts:
            if df(x, y) > f(x, y):
                rep.record("a", False, f"d_f({x},{y}) > f({x},{y})")

    for k, d in enumerate(semimetrics):
        dominated = all(d(x, y) <= f(x, y) for x in pts for y in pts)
        if not dominated:
            rep.skipped.append(f"b: semi-metric #{k} is not bounded by f")
            continue
        ok = all(d(x, y) <= df(x, y) for x in pts for y in pts)
        rep.record("b", ok, f"semi-metric #{k} exceeds d_f")

    off = [f(x, y) for x in pts for y in pts if x != y]
    bound = min(off) if off else None
    if bound is not None and bound > 0:
        rep.record("c", df.is_metric(), f"f >= {render(bound)} off the diagonal but d_f is not a metric")

    for k, act in enumerate(group):
        act = {str(x): str(y) for x, y in act.items()}
        if sorted(act) != sorted(pts) or sorted(act.values()) != sorted(pts):
            raise DomainError(f"group element #{k} is not a permutation of the points")
        if any(f(act[x], act[y]) != f(x, y) for x in pts for y in pts):
            raise DomainError(f"group element #{k} does not preserve f")
        ok = all(df(act[x], act[y]) == df(x, y) for x in pts for y in pts)
        rep.record("d", ok, f"d_f not invariant under element #{k}")

    if g is not None:
        if g.points != f.points:
            raise DomainError("f and g must share the point set")
        if not all(f(x, y) <= g(x, y) for x in pts for y in pts):
            raise DomainError("monotonicity check needs f <= g pointwise")
        dg = metrify_fn(g)
        rep.record("e", all(df(x, y) <= dg(x, y) for x in pts for y in pts), "d_f exceeds d_g")
    return rep


# -- quantum vs path metric ----------------------------------------------------------


@dataclass(frozen=True)
class ComparisonReport:
    d_qt: FiniteMetric
    d_pi: FiniteMetric
    nu: PairFunction
    all_edges_two: bool
    is_tree: bool
    checks: dict[str, bool]
    note: str = ("d_qt is the metrification over the supplied vertices only, so it bounds the "
                 "metric on the full pants graph from above")

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        pts = self.d_qt.points
        return {
            "pairs": [
                {"p": x, "q": y, "nu": render(self.nu.symmetrized(x, y)), "dQt": render(self.d_qt(x, y)),
                 "dPi": render(self.d_pi(x, y))}
                for i, x in enumerate(pts) for y in pts[i + 1:]
            ],
            "allEdgesTwo": self.all_edges_two,
            "isTree": self.is_tree,
            "checks": dict(self.checks),
            "passed": self.passed,
            "note": self.note,
        }


def compare_quantum_path(vertices: Iterable[str], edges: Iterable[tuple[str, str]], nu: PairFunction) -> ComparisonReport:
    """Compare the metrified quantum counts with the graph distance."""
    vertices = tuple(str(v) for v in vertices)
    edges = [(str(u), str(v)) for u, v in edges]
    if set(nu.points) != set(vertices):
        raise DomainError("quantum counts must be given on exactly the graph vertices")
    for u, v in edges:
        if nu.symmetrized(u, v) == INF:
            raise DomainError(f"no quantum count on graph edge ({u}, {v})")
    nu = PairFunction(vertices, nu.values)
    d_qt = metrify(nu)
    d_pi = path_metric(vertices, edges)
    two = all(nu.symmetrized(u, v) == 2 for u, v in edges)
    simple = {frozenset(e) for e in edges if e[0] != e[1]}
    connected = all(d_pi(vertices[0], v) != INF for v in vertices) if vertices else True
    tree = connected and len(simple) == len(vertices) - 1
    pairs = [(x, y) for x in vertices for y in vertices]
    checks = {"belowNu": all(d_qt(x, y) <= nu.symmetrized(x, y) for x, y in pairs)}
    if two:
        checks["belowTwicePath"] = all(d_qt(x, y) <= 2 * d_pi(x, y) for x, y in pairs)
        only_edges = all(nu.symmetrized(x, y) == INF or frozenset((x, y)) in simple for x, y in pairs if x != y)
        if tree and only_edges:
            checks["treeEquality"] = all(d_qt(x, y) == 2 * d_pi(x, y) for x, y in pairs)
    return ComparisonReport(d_qt, d_pi, nu, two, tree, checks)
