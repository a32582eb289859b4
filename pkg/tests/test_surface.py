from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qint.errors import DomainError, MoveError
from qint.surface import (
    DecompositionSystem,
    DualGraph,
    brute_force_isomorphic,
    caterpillar,
    catalog_names,
    elementary_shift,
    is_isomorphic,
    standard_surface,
    validate_graph,
)


def all_catalog():
    return [standard_surface(g, n).graph for g in (2, 3) for n in catalog_names(g)] + [caterpillar(4), caterpillar(5)]


def test_genus_two_catalog():
    theta = standard_surface(2, "theta").graph
    assert len(theta.vertex_ids) == 2 and len(theta.edge_ids) == 3 and not theta.loops()
    dumbbell = standard_surface(2, "dumbbell").graph
    assert len(dumbbell.loops()) == 2
    assert standard_surface(2).name == "theta"


def test_genus_below_two_rejected():
    with pytest.raises(DomainError):
        standard_surface(1)
    with pytest.raises(DomainError):
        standard_surface(2, "k4")


@pytest.mark.parametrize("g", all_catalog())
def test_catalog_graphs_are_valid(g):
    assert validate_graph(g).ok


def test_deleted_edge_reports_degree_and_count():
    g = standard_surface(2, "theta").graph
    broken = DualGraph(2, {"v0": ("e0", "e1"), "v1": ("e0", "e1")}, {"e0": ("v0", "v1"), "e1": ("v0", "v1")})
    rep = validate_graph(broken)
    assert {"degree", "edge-count"} <= rep.codes()
    assert {"v0", "v1"} <= {i for v in rep.violations if v.code == "degree" for i in v.ids}
    assert validate_graph(g).ok


def test_disconnected_union_reported():
    rot = {"a0": ("x0", "x1", "x2"), "a1": ("x0", "x1", "x2"), "b0": ("y0", "y1", "y2"), "b1": ("y0", "y1", "y2")}
    ends = {f"x{i}": ("a0", "a1") for i in range(3)} | {f"y{i}": ("b0", "b1") for i in range(3)}
    rep = validate_graph(DualGraph(3, rot, ends))
    assert "disconnected" in rep.codes()


def test_bad_rotation_reported():
    g = DualGraph(2, {"v0": ("e0", "e1", "e1"), "v1": ("e0", "e1", "e2")}, {"e0": ("v0", "v1"), "e1": ("v0", "v1"), "e2": ("v0", "v1")})
    assert "rotation" in validate_graph(g).codes()


@pytest.mark.parametrize("edge", ["e0", "e1", "e2"])
def test_theta_shift_gives_dumbbell(edge):
    theta = standard_surface(2, "theta").graph
    dumbbell = standard_surface(2, "dumbbell").graph
    shifted = elementary_shift(theta, edge)
    assert is_isomorphic(shifted, dumbbell)
    assert brute_force_isomorphic(shifted, dumbbell)


def test_dumbbell_bridge_shift_gives_theta():
    dumbbell = standard_surface(2, "dumbbell").graph
    assert is_isomorphic(elementary_shift(dumbbell, "e1"), standard_surface(2, "theta").graph)


def test_loop_and_unknown_edges_rejected():
    dumbbell = standard_surface(2, "dumbbell").graph
    with pytest.raises(MoveError):
        elementary_shift(dumbbell, "e0")
    with pytest.raises(DomainError):
        elementary_shift(dumbbell, "nope")


def _random_walk(seed: int, steps: int):
    rng = random.Random(seed)
    g = caterpillar(rng.choice([2, 3, 4]))
    path = [g]
    for _ in range(steps):
        edges = [e for e in g.edge_ids if not g.is_loop(e)]
        g = elementary_shift(g, rng.choice(edges))
        path.append(g)
    return path


@given(st.integers(0, 10_000), st.integers(1, 8))
@settings(max_examples=60, deadline=None)
def test_shift_preserves_invariants_and_is_an_involution(seed, steps):
    path = _random_walk(seed, steps)
    for g in path:
        assert validate_graph(g).ok
        assert len(g.vertex_ids) == 2 * g.genus - 2 and len(g.edge_ids) == 3 * g.genus - 3
        for e in g.edge_ids:
            if not g.is_loop(e):
                back = elementary_shift(elementary_shift(g, e), e)
                assert back.same_banding(g)
                assert is_isomorphic(back, g)


@given(st.integers(0, 10_000), st.integers(0, 6))
@settings(max_examples=60, deadline=None)
def test_isomorphism_agrees_with_brute_force(seed, steps):
    rng = random.Random(seed)
    g1 = _random_walk(seed, steps)[-1]
    g2 = _random_walk(seed + 1, rng.randint(0, 6))[-1]
    if g1.genus == g2.genus and len(g1.vertex_ids) <= 6:
        assert is_isomorphic(g1, g2) == brute_force_isomorphic(g1, g2)
    verts = list(g1.vertex_ids)
    perm = verts[:]
    rng.shuffle(perm)
    relabeled = g1.relabeled(dict(zip(verts, perm)), {e: f"x{e}" for e in g1.edge_ids})
    assert is_isomorphic(g1, relabeled) and brute_force_isomorphic(g1, relabeled)


def test_genus_three_graphs_pairwise_distinct():
    graphs = [standard_surface(3, n).graph for n in ("k4", "ladder", "chain", "lollipop", "tripod")]
    for i, a in enumerate(graphs):
        for b in graphs[i + 1:]:
            assert not is_isomorphic(a, b)
            assert not brute_force_isomorphic(a, b)


def test_decomposition_system_matches_graph():
    g = standard_surface(2, "dumbbell").graph
    ds = DecompositionSystem(g)
    assert ds.annuli == g.edge_ids
    assert ds.pants["v0"] == (("e0", 0), ("e0", 1), ("e1", 0))
    assert ds.pants["v1"] == (("e1", 1), ("e2", 0), ("e2", 1))
    for g in all_catalog():
        ds = DecompositionSystem(g)
        slots = [s for v in g.vertex_ids for s in ds.pants[v]]
        assert sorted(slots) == sorted((e, s) for e in g.edge_ids for s in (0, 1))


@pytest.mark.parametrize("g", all_catalog())
def test_json_round_trip(g):
    assert DualGraph.from_json(json.loads(json.dumps(g.to_json()))) == g
