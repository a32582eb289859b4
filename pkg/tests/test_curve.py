from __future__ import annotations

import json
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qint import curve as cm
from qint.curve import (
    AnnulusArc,
    ArcSystem,
    CrossingPair,
    PantsArc,
    build_pants_pattern,
    components,
    dehn_thurston_system,
    intersection_profile,
    validate_arc_system,
)
from qint.corpus import generate_corpus
from qint.errors import DomainError, ParityError, ValidationError
from qint.surface import standard_surface

_CORPUS = generate_corpus()


def _min_pattern_oracle(n1, n2, n3):
    """Search all non-negative solutions for the one with fewest come-backs."""
    best = None
    n = (n1, n2, n3)
    for x12 in range(max(n) + 1):
        for x13 in range(max(n) + 1):
            for x23 in range(max(n) + 1):
                rest = (n1 - x12 - x13, n2 - x12 - x23, n3 - x13 - x23)
                if any(r < 0 or r % 2 for r in rest) or sum(1 for r in rest if r) > 1:
                    continue
                cand = (sum(rest) // 2, (x12, x13, x23), tuple(r // 2 for r in rest))
                best = min(best, cand) if best else cand
    return best


@given(st.integers(0, 7), st.integers(0, 7), st.integers(0, 7))
def test_pants_pattern_matches_search(n1, n2, n3):
    if (n1 + n2 + n3) % 2:
        with pytest.raises(ParityError):
            build_pants_pattern(n1, n2, n3)
        return
    pat = build_pants_pattern(n1, n2, n3)
    _, xs, cbs = _min_pattern_oracle(n1, n2, n3)
    assert (pat.x12, pat.x13, pat.x23) == xs
    assert pat.comebacks == cbs


def test_pants_pattern_examples():
    assert build_pants_pattern(2, 0, 0).comebacks == (1, 0, 0)
    p = build_pants_pattern(2, 2, 2)
    assert (p.x12, p.x13, p.x23, p.comebacks) == (1, 1, 1, (0, 0, 0))
    with pytest.raises(DomainError):
        build_pants_pattern(-1, 1, 0)


def test_smove_shape():
    a = cm.smove_system()
    assert validate_arc_system(a).ok
    prof = intersection_profile(a)
    assert prof.per_edge == {"e0": 1, "e1": 0, "e2": 0}
    assert (prof.total, prof.max, prof.max_edge, prof.m_gamma) == (1, 1, "e0", 1)
    assert components(a) == 1


def test_amove_shape():
    a = cm.amove_system()
    prof = intersection_profile(a)
    assert prof.per_edge == {"e0": 2, "e1": 0, "e2": 0}
    assert len(a.crossing_pairs) == 2
    assert components(a) == 1


def _corpus_params():
    return [(n, m, t) for n, m, t in [
        ("theta", {"e0": 2, "e1": 1, "e2": 1}, {"e0": 1, "e1": -1}),
        ("dumbbell", {"e0": 2, "e1": 2, "e2": 4}, {"e2": 2}),
        ("theta", {"e0": 3, "e1": 3, "e2": 0}, {"e2": 2}),
    ]]


@pytest.mark.parametrize("name,m,t", _corpus_params())
def test_generated_systems_are_valid(name, m, t):
    a = dehn_thurston_system(standard_surface(2, name), m, t)
    rep = validate_arc_system(a)
    assert rep.ok, rep.to_json()
    assert intersection_profile(a).total == sum(m.values())


def test_parallel_copies_counted():
    a = dehn_thurston_system(standard_surface(2, "theta"), {"e0": 3, "e1": 3}, {"e2": 2})
    assert a.parallel == {"e2": 2}
    assert components(a) == components(replace(a, parallel={})) + 2


def test_corpus_all_valid(corpus):
    assert len(corpus) == 100
    assert len({c.name for c in corpus}) == 100
    for entry in corpus:
        assert validate_arc_system(entry.system).ok
        assert 1 <= intersection_profile(entry.system).total <= 10
        assert entry.system.graph.genus in (2, 3)


def _mutated(a: ArcSystem):
    arcs = list(a.arcs)
    first_annulus = next(x for x in arcs if isinstance(x, AnnulusArc))
    yield "count", replace(a, arcs=tuple(x for x in arcs if x is not first_annulus))
    pa = next(x for x in arcs if isinstance(x, PantsArc))
    other = next(v for v in a.graph.vertex_ids if v != pa.pants)
    yield "wrong-pants", replace(a, arcs=tuple(PantsArc(other, x.ends) if x is pa else x for x in arcs))
    yield "unknown-point", replace(a, arcs=tuple(PantsArc(x.pants, (x.ends[0], "ghost")) if x is pa else x for x in arcs))
    ann = next(x for x in arcs if isinstance(x, AnnulusArc))
    yield "annulus-ends", replace(a, arcs=tuple(AnnulusArc(x.edge, (x.ends[0], x.ends[0]), x.swift) if x is ann else x for x in arcs))
    yield "unknown-edge", replace(a, parallel={"nope": 1})


@pytest.mark.parametrize("code,broken", list(_mutated(dehn_thurston_system(standard_surface(2, "theta"), {"e0": 2, "e1": 2, "e2": 2}, {"e0": 1}))))
def test_mutations_detected(code, broken):
    rep = validate_arc_system(broken)
    assert not rep.ok
    assert code in rep.codes()
    with pytest.raises(ValidationError) as info:
        intersection_profile(broken)
    assert info.value.report.codes() == rep.codes()


def test_unsplit_comeback_and_pair_checks():
    a = cm.amove_system()
    cp = a.crossing_pairs[0]
    rep = validate_arc_system(replace(a, crossing_pairs=(CrossingPair(cp.over, cp.over, cp.pants),) + a.crossing_pairs[1:]))
    assert "crossing-pair" in rep.codes()
    merged = []
    for x in a.arcs:
        if isinstance(x, PantsArc) and x.ends[1] in (cp.over, cp.under):
            continue
        merged.append(x)
    ends = [x.ends[0] for x in a.arcs if isinstance(x, PantsArc) and x.ends[1] in (cp.over, cp.under)]
    merged.append(PantsArc(cp.pants, tuple(ends)))
    rep = validate_arc_system(replace(a, arcs=tuple(merged), crossing_pairs=a.crossing_pairs[1:]))
    assert "unsplit-comeback" in rep.codes()


def test_stray_point_reported():
    a = cm.smove_system()
    on = dict(a.on_curve)
    on[("e1", 0)] = ("x",)
    rep = validate_arc_system(replace(a, on_curve=on))
    assert {"parity", "count", "degree"} <= rep.codes()


@given(st.integers(0, 99), st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_relabeling_preserves_profile(idx, seed):
    import random

    entry = _CORPUS[idx]
    a = entry.system
    rng = random.Random(seed)
    pts = cm._all_points(a)
    new = [f"p{k}" for k in range(len(pts))]
    rng.shuffle(new)
    b = cm.relabel(a, dict(zip(pts, new)))
    assert validate_arc_system(b).ok
    assert intersection_profile(b) == intersection_profile(a)
    assert components(b) == components(a)




@pytest.mark.parametrize("idx", range(0, 100, 7))
def test_json_round_trip(idx):
    a = _CORPUS[idx].system
    data = json.loads(json.dumps(cm.to_json(a)))
    assert cm.load(data) == a


def test_load_rejects_malformed():
    with pytest.raises(DomainError):
        cm.from_json({"arcs": []})
    data = cm.to_json(cm.smove_system())
    data["arcs"] = [dict(x, swift=0.5) if x["type"] == "annulus" else x for x in data["arcs"]]
    with pytest.raises(DomainError):
        cm.from_json(data)


@pytest.mark.parametrize("m,t", [(1, 0), (3, 1), (3, -1), (2, 2), (4, -3), (5, 7)])
def test_swift_numbers_bounded(m, t):
    swifts = [cm._swift(m, i, t) for i in range(m)]
    assert all(abs(s) <= abs(t) // m + 2 for s in swifts)
    if t == 0:
        assert swifts == [0] * m
    assert [cm._swift(m, i, -t) for i in range(m)] != swifts or t == 0
