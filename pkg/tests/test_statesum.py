from __future__ import annotations

from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qint import curve as cm
from qint.corpus import generate_corpus
from qint.errors import DomainError, OracleError, ResourceError
from qint.laurent import LaurentPoly
from qint.statesum import (
    NotApplicable,
    check_shift,
    coefficient,
    coefficient_bruteforce,
    coefficient_table,
    enumerate_shifts,
    enumerate_states,
    extremal_shift,
    iter_states,
    leading_term_oracle,
    loop_half_degree_check,
    numeric_state_sum,
    shift_key,
    state_cap,
    state_count,
    state_weight,
    top_degree_sign,
    triangle_values,
)

CORPUS = generate_corpus()
SMALL = [c for c in CORPUS if sum(state_count(c.system, s) for s in enumerate_shifts(c.system)) <= 8192]

AMOVE_DIAGONAL = LaurentPoly.from_pairs(
    [[-8, -1], [-6, -2], [-4, -4], [-2, -6], [0, -6], [2, -6], [4, -4], [6, -2], [8, -1]]
)


def test_smove_table():
    t = coefficient_table(cm.smove_system())
    assert set(t) == {(-1, 0, 0), (1, 0, 0)}
    for c in t.values():
        assert (c.n_pp, c.n_pm, c.poly) == (1, 0, LaurentPoly.one())


def test_amove_table():
    t = coefficient_table(cm.amove_system())
    off = LaurentPoly({4: 1, 0: -2, -4: 1})
    assert (t[(2, 0, 0)].n_pp, t[(2, 0, 0)].n_pm, t[(2, 0, 0)].poly) == (2, 2, off)
    assert t[(-2, 0, 0)] == t[(2, 0, 0)]
    assert (t[(0, 0, 0)].n_pp, t[(0, 0, 0)].n_pm, t[(0, 0, 0)].poly) == (0, 4, AMOVE_DIAGONAL)


def test_small_corpus_is_substantial():
    assert len(SMALL) >= 60


@pytest.mark.parametrize("entry", SMALL, ids=lambda c: c.name)
def test_transfer_matches_bruteforce(entry):
    a = entry.system
    table = coefficient_table(a)
    edges = list(a.graph.edge_ids)
    for sigma in enumerate_shifts(a):
        assert table[shift_key(sigma, edges)] == coefficient_bruteforce(a, sigma)


@pytest.mark.parametrize("entry", SMALL[::3], ids=lambda c: c.name)
def test_state_counts_and_exponent_invariant(entry):
    a = entry.system
    n_arcs = len(a.pants_arcs())
    for sigma in enumerate_shifts(a):
        states = enumerate_states(a, sigma)
        assert len(states) == state_count(a, sigma) == len(set(states))
        weights = [state_weight(a, s) for s in states]
        assert all(w.n_pp + w.n_pm + w.n_mm == n_arcs for w in weights if w.coeff)
        assert len({w.n_pm + 2 * w.n_mm for w in weights}) == 1


@pytest.mark.parametrize("theta", [0.2, 1 / 3, 0.4])
@pytest.mark.parametrize("entry", SMALL[::4], ids=lambda c: c.name)
def test_normalized_form_matches_numeric_sum(entry, theta):
    a = entry.system
    table = coefficient_table(a)
    edges = list(a.graph.edge_ids)
    for key, c in table.items():
        direct = numeric_state_sum(a, dict(zip(edges, key)), theta)
        assert abs(direct - c.evaluate(theta)) <= 1e-10 * max(1.0, abs(direct))


@given(st.floats(0.01, 0.65))
def test_triangle_relations(theta):
    dpp, dpm, z = triangle_values(theta)
    ratio = (z ** 2 + 1 + z ** -2).real
    assert dpp ** 2 / dpm ** 2 == pytest.approx(ratio, rel=1e-10)


@given(st.sampled_from(SMALL), st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_relabeling_leaves_coefficients_unchanged(entry, seed):
    import random

    a = entry.system
    rng = random.Random(seed)
    pts = cm._all_points(a)
    new = [f"q{k}" for k in range(len(pts))]
    rng.shuffle(new)
    b = cm.relabel(a, dict(zip(pts, new)))
    assert coefficient_table(b) == coefficient_table(a)


def test_shift_validation():
    a = cm.amove_system()
    assert check_shift(a, {"e0": 2}) == {"e0": 2, "e1": 0, "e2": 0}
    for bad in ({"e0": 1}, {"e0": 4}, {"e1": 2}, {"zz": 0}):
        with pytest.raises(DomainError):
            coefficient(a, bad)


def test_state_cap(monkeypatch):
    a = cm.amove_system()
    with pytest.raises(ResourceError):
        coefficient_table(a, cap=2)
    with pytest.raises(ResourceError):
        list(iter_states(a, {"e0": 0}, cap=2))
    monkeypatch.setenv("QINT_STATE_CAP", "3")
    assert state_cap() == 3
    with pytest.raises(ResourceError):
        coefficient(a, {"e0": 0})
    monkeypatch.setenv("QINT_STATE_CAP", "x")
    with pytest.raises(DomainError):
        state_cap()


def test_parallel_copies_do_not_change_states():
    a = cm.dehn_thurston_system(cm.standard_surface(2, "theta"), {"e0": 2}, {"e1": 1})
    assert coefficient_table(a) == coefficient_table(replace(a, parallel={}))


# -- leading terms --------------------------------------------------------------


def _extremal_cases(entries):
    for entry in entries:
        a = entry.system
        counts = a.counts()
        top = max(counts.values())
        for e0, n in counts.items():
            if n != top:
                continue
            for delta in range(-top, top + 1, 2):
                if delta:
                    yield entry, e0, delta


NONLOOP = [c for c in _extremal_cases(CORPUS) if not c[0].system.graph.is_loop(c[1])]
LOOP = [c for c in _extremal_cases(CORPUS) if c[0].system.graph.is_loop(c[1])]


def _bruteforce_leading(a, sigma):
    c = coefficient_bruteforce(a, sigma)
    return c.leading()


@pytest.mark.parametrize("entry,e0,delta", NONLOOP[::5], ids=lambda x: getattr(x, "name", str(x)))
def test_leading_term_prediction(entry, e0, delta):
    a = entry.system
    pred = leading_term_oracle(a, delta, e0)
    deg, signs, n = top_degree_sign(a, extremal_shift(a, delta, e0))
    assert (pred.degree, pred.count) == (deg, n)
    assert signs == {pred.sign}
    lead = _bruteforce_leading(a, extremal_shift(a, delta, e0))
    assert lead is not None and lead[0] == pred.degree and lead[2] == pred.count


def test_oracle_preconditions():
    a = cm.amove_system()
    with pytest.raises(OracleError):
        leading_term_oracle(a, 2, "e1")
    with pytest.raises(OracleError):
        leading_term_oracle(a, 1, "e0")
    assert leading_term_oracle(cm.smove_system(), 1, "e0") is NotApplicable


@pytest.mark.parametrize("entry,e0,delta", LOOP[::3], ids=lambda x: getattr(x, "name", str(x)))
def test_loop_half_degree_relation(entry, e0, delta):
    a = entry.system
    rel = loop_half_degree_check(a, delta, e0)
    assert rel.holds and rel.states_checked > 0
    deg, signs, _ = top_degree_sign(a, extremal_shift(a, delta, e0))
    assert len(signs) == 1
    assert coefficient_bruteforce(a, extremal_shift(a, delta, e0)).leading()[0] == deg


def test_tied_extremal_states_add_up():
    hits = [c for c in NONLOOP if leading_term_oracle(c[0].system, c[2], c[1]).count > 1]
    assert hits, "corpus should contain tied extremal states"
    for entry, e0, delta in hits[:5]:
        a = entry.system
        pred = leading_term_oracle(a, delta, e0)
        assert coefficient_bruteforce(a, extremal_shift(a, delta, e0)).leading()[2] == pred.count
