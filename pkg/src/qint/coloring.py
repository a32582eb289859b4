"""Admissible colorings of dual graphs and the diagonal curve operators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import DomainError
from .surface import DualGraph


@dataclass(frozen=True)
class AdmissibleColoring:
    r: int
    values: dict[str, int]

    def __hash__(self):
        return hash((self.r, tuple(sorted(self.values.items()))))

    def to_json(self) -> dict:
        return {"r": self.r, "values": dict(sorted(self.values.items()))}


@dataclass(frozen=True)
class LimitPoint:
    values: dict[str, Fraction]

    def __hash__(self):
        return hash(tuple(sorted(self.values.items())))


@dataclass(frozen=True)
class Eigenvalue:
    """``prod_e (-2 cos(pi c_e / r))^{n_e}`` as a float and as its factor list."""

    value: float
    factors: tuple[tuple[int, int, int], ...]  # (c_e, r, n_e) with n_e > 0

    @property
    def symbolic(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"(-2cos(pi*{c}/{r}))^{n}" for c, r, n in self.factors)


def _vertex_triples(g: DualGraph) -> list[tuple[str, str, str]]:
    return [tuple(hs) for hs in g.rotations.values()]


def _triple_ok(a: int, b: int, c: int, r: int) -> bool:
    s = a + b + c
    return s < 2 * r and s % 2 == 1 and a < b + c and b < a + c and c < a + b


def is_admissible(g: DualGraph, values: Mapping[str, int], r: int) -> bool:
    if set(values) != set(g.edge_ids):
        return False
    if any(not (1 <= values[e] <= r - 1) for e in g.edge_ids):
        return False
    return all(_triple_ok(values[a], values[b], values[c], r) for a, b, c in _vertex_triples(g))


def enumerate_colorings(g: DualGraph, r: int) -> list[AdmissibleColoring]:
    """All r-admissible colorings, in lexicographic order of edge-id order.

    Loop edges count twice at their vertex.
    """
    if r < 3:
        raise DomainError(f"r must be >= 3, got {r}")
    edges = g.edge_ids
    position = {e: i for i, e in enumerate(edges)}
    # check each vertex as soon as its last edge is assigned
    checks: list[list[tuple[str, str, str]]] = [[] for _ in edges]
    for t in _vertex_triples(g):
        checks[max(position[e] for e in t)].append(t)

    out: list[AdmissibleColoring] = []
    current: dict[str, int] = {}

    def extend(i: int) -> None:
        if i == len(edges):
            out.append(AdmissibleColoring(r, dict(current)))
            return
        for c in range(1, r):
            current[edges[i]] = c
            if all(_triple_ok(current[a], current[b], current[x], r) for a, b, x in checks[i]):
                extend(i + 1)
        del current[edges[i]]

    extend(0)
    return out


def dim_count(g: DualGraph, r: int) -> int:
    return len(enumerate_colorings(g, r))


def diagonal_eigenvalue(c: AdmissibleColoring, multiplicities: Mapping[str, int]) -> Eigenvalue:
    """Eigenvalue of the curve operator of parallel copies of decomposition curves."""
    missing = set(c.values) - set(multiplicities)
    if missing:
        raise DomainError(f"multiplicities missing for edges {sorted(missing)}")
    value = 1.0
    factors = []
    for e in sorted(c.values):
        n = multiplicities[e]
        if n < 0:
            raise DomainError(f"negative multiplicity on {e}")
        if n:
            value *= (-2.0 * math.cos(math.pi * c.values[e] / c.r)) ** n
            factors.append((c.values[e], c.r, n))
    return Eigenvalue(value, tuple(factors))


def in_limit_set(g: DualGraph, tau: Mapping[str, Fraction]) -> bool:
    if any(not (0 < tau[e] < 1) for e in g.edge_ids):
        return False
    for a, b, c in _vertex_triples(g):
        x, y, z = tau[a], tau[b], tau[c]
        if not (x + y + z < 2 and x < y + z and y < x + z and z < x + y):
            return False
    return True


def tau_embed(c: AdmissibleColoring, g: DualGraph | None = None) -> LimitPoint:
    point = LimitPoint({e: Fraction(v, c.r) for e, v in c.values.items()})
    if g is not None:
        assert in_limit_set(g, point.values), "admissible coloring left the limit set"
    return point
