"""Deterministic corpus of genus-2 and genus-3 test curves."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .curve import ArcSystem, dehn_thurston_system
from .surface import catalog_names, standard_surface


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    system: ArcSystem
    m: dict[str, int]
    t: dict[str, int]


def _parity_ok(surface, m) -> bool:
    g = surface.graph
    return all(sum(m[e] for e, _ in g.slots(v)) % 2 == 0 for v in g.vertex_ids)


def generate_corpus(size: int = 100, max_total: int = 10, seed: int = 20240607) -> list[CorpusEntry]:
    """``size`` distinct valid curves with total intersection at most ``max_total``."""
    rng = random.Random(seed)
    surfaces = [standard_surface(g, n) for g in (2, 3) for n in catalog_names(g) if n != "caterpillar"]
    out: list[CorpusEntry] = []
    seen = set()
    while len(out) < size:
        surface = surfaces[len(out) % len(surfaces)]
        edges = surface.graph.edge_ids
        total = rng.randint(1, max_total)
        m = {e: 0 for e in edges}
        for _ in range(total):
            m[rng.choice(edges)] += 1
        if not _parity_ok(surface, m):
            continue
        t = {e: rng.randint(-2, 2) if m[e] else rng.choice((0, 0, 0, 1)) for e in edges}
        key = (surface.name, tuple(m.values()), tuple(t.values()))
        if key in seen:
            continue
        seen.add(key)
        name = f"{surface.name}-" + "-".join(f"{m[e]}/{t[e]}" for e in edges)
        out.append(CorpusEntry(name, dehn_thurston_system(surface, m, t), m, t))
    return out
