"""Limit coefficients of curve operators as exact state sums.

A state assigns a sign to every arc endpoint.  Its weight is the product of
arc weights, a monomial ``+-Dpp^n1 Dpm^n2 Dmm^n3 z^k`` in the triangle
coefficients and ``z``.  Summing over states with prescribed per-curve sign
totals gives the coefficient of a color shift, which is then normalized to
``Dpp^nPP Dpm^nPM P(z)`` with ``P`` an exact Laurent polynomial, using
``Dmm = -Dpp`` and ``Dpp^2 / Dpm^2 = z^2 + 1 + z^-2``.

Coefficients are determined up to one global sign depending only on the
curve; all consumers (nonvanishing, degrees, counts) are insensitive to it.
"""

from __future__ import annotations

import cmath
import itertools
import math
import os
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .curve import AnnulusArc, ArcSystem, PantsArc, intersection_profile, validate_arc_system
from .errors import DomainError, OracleError, ResourceError
from .laurent import TRIANGLE_RATIO, LaurentPoly

DEFAULT_STATE_CAP = 2 ** 24


def state_cap(override: int | None = None) -> int:
    if override is not None:
        cap = override
    else:
        raw = os.environ.get("QINT_STATE_CAP")
        try:
            cap = int(raw) if raw else DEFAULT_STATE_CAP
        except ValueError as exc:
            raise DomainError(f"QINT_STATE_CAP must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise DomainError(f"state cap must be >= 1, got {cap}")
    return cap


# -- shifts and states ------------------------------------------------------------

Shift = dict  # edge id -> int


def _counts(a: ArcSystem) -> dict[str, int]:
    validate_arc_system(a).raise_if_invalid("arc system")
    return a.counts()


def check_shift(a: ArcSystem, sigma: Mapping[str, int], counts: Mapping[str, int] | None = None) -> dict[str, int]:
    """Complete ``sigma`` with zeros and check the box and parity constraints."""
    counts = counts if counts is not None else _counts(a)
    unknown = set(sigma) - set(counts)
    if unknown:
        raise DomainError(f"shift names unknown edges {sorted(unknown)}")
    full = {e: int(sigma.get(e, 0)) for e in counts}
    for e, s in full.items():
        if abs(s) > counts[e] or (s - counts[e]) % 2:
            raise DomainError(f"shift {s} on edge {e} is incompatible with intersection number {counts[e]}")
    return full


def enumerate_shifts(a: ArcSystem) -> list[dict[str, int]]:
    """Every admissible shift, lexicographic in edge order."""
    counts = _counts(a)
    ranges = [range(-n, n + 1, 2) for n in counts.values()]
    return [dict(zip(counts, combo)) for combo in itertools.product(*ranges)]


def shift_key(sigma: Mapping[str, int], edges) -> tuple[int, ...]:
    return tuple(sigma.get(e, 0) for e in edges)


@dataclass(frozen=True)
class State:
    signs: dict[str, int]

    def __hash__(self):
        return hash(tuple(sorted(self.signs.items())))


def state_count(a: ArcSystem, sigma: Mapping[str, int]) -> int:
    counts = _counts(a)
    full = check_shift(a, sigma, counts)
    n = 2 ** len(a.crossing_pairs)
    for e, i in counts.items():
        n *= math.comb(i, (i + full[e]) // 2)
    return n


def _strands_by_edge(a: ArcSystem) -> dict[str, list[AnnulusArc]]:
    out: dict[str, list[AnnulusArc]] = {e: [] for e in a.graph.edge_ids}
    for arc in a.annulus_arcs():
        out[arc.edge].append(arc)
    return out


def iter_states(a: ArcSystem, sigma: Mapping[str, int], cap: int | None = None) -> Iterator[State]:
    """States of nonzero weight for ``sigma``, in a fixed order."""
    n = state_count(a, sigma)
    if n > state_cap(cap):
        raise ResourceError(f"{n} states exceed the cap of {state_cap(cap)}")
    full = check_shift(a, sigma)
    strands = _strands_by_edge(a)
    per_edge = []
    for e, arcs in strands.items():
        plus = (len(arcs) + full[e]) // 2
        per_edge.append([(arcs, set(chosen)) for chosen in itertools.combinations(range(len(arcs)), plus)])
    pairs = a.crossing_pairs
    for choice in itertools.product(*per_edge):
        base: dict[str, int] = {}
        for arcs, plus in choice:
            for k, arc in enumerate(arcs):
                s = 1 if k in plus else -1
                base[arc.ends[0]] = s
                base[arc.ends[1]] = s
        for over_signs in itertools.product((1, -1), repeat=len(pairs)):
            signs = dict(base)
            for cp, s in zip(pairs, over_signs):
                signs[cp.over] = s
                signs[cp.under] = -s
            yield State(signs)


def enumerate_states(a: ArcSystem, sigma: Mapping[str, int], cap: int | None = None) -> list[State]:
    return list(iter_states(a, sigma, cap))


# -- weights --------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightMonomial:
    coeff: int
    n_pp: int = 0
    n_pm: int = 0
    n_mm: int = 0
    z_pow: int = 0

    def __mul__(self, other: WeightMonomial) -> WeightMonomial:
        c = self.coeff * other.coeff
        if c == 0:
            return ZERO_WEIGHT
        return WeightMonomial(c, self.n_pp + other.n_pp, self.n_pm + other.n_pm, self.n_mm + other.n_mm,
                              self.z_pow + other.z_pow)

    @property
    def folded_sign(self) -> int:
        """Sign after rewriting ``Dmm`` as ``-Dpp``."""
        return self.coeff * (-1) ** self.n_mm

    @property
    def degree(self) -> int:
        """z-degree with ``Dpp`` and ``Dmm`` of degree 1 and ``Dpm`` of degree 0."""
        return self.z_pow + self.n_pp + self.n_mm

    def evaluate(self, theta: float) -> complex:
        dpp, dpm, z = triangle_values(theta)
        return self.coeff * dpp ** self.n_pp * dpm ** self.n_pm * (-dpp) ** self.n_mm * z ** self.z_pow


ONE_WEIGHT = WeightMonomial(1)
ZERO_WEIGHT = WeightMonomial(0)


def _delta(s1: int, s2: int) -> WeightMonomial:
    if s1 == s2 == 1:
        return WeightMonomial(1, n_pp=1)
    if s1 == s2 == -1:
        return WeightMonomial(1, n_mm=1)
    return WeightMonomial(1, n_pm=1)


def annulus_weight(swift: int, sign: int) -> WeightMonomial:
    return WeightMonomial(sign ** ((swift + 1) % 2), z_pow=swift * sign)


def arc_weight(a: ArcSystem, arc, signs: Mapping[str, int], roles=None) -> WeightMonomial:
    """Weight of one arc under the endpoint signs ``signs``."""
    s1, s2 = signs[arc.ends[0]], signs[arc.ends[1]]
    if isinstance(arc, AnnulusArc):
        if s1 != s2:
            return ZERO_WEIGHT
        return annulus_weight(arc.swift, s1)
    roles = roles if roles is not None else a.crossing_role()
    role = roles.get(arc.ends[1])
    d = _delta(s1, s2)
    if role is None:
        return WeightMonomial(s1 * s2) * d
    if role[0] == "under":
        return WeightMonomial(s1) * d
    return WeightMonomial(s1 * s2, z_pow=2 * s2) * d


def state_weight(a: ArcSystem, state: State, roles=None) -> WeightMonomial:
    roles = roles if roles is not None else a.crossing_role()
    w = ONE_WEIGHT
    for arc in a.arcs:
        w = w * arc_weight(a, arc, state.signs, roles)
        if w.coeff == 0:
            break
    return w


# -- normalized coefficients ------------------------------------------------------------


@dataclass(frozen=True)
class NormalizedCoefficient:
    """``Dpp^n_pp * Dpm^n_pm * poly(z)``, determined up to a global sign."""

    n_pp: int
    n_pm: int
    poly: LaurentPoly
    up_to_sign: bool = True

    @property
    def nonzero(self) -> bool:
        return not self.poly.is_zero()

    def evaluate(self, theta: float) -> complex:
        dpp, dpm, z = triangle_values(theta)
        return dpp ** self.n_pp * dpm ** self.n_pm * self.poly.evaluate(z)

    def leading(self) -> tuple[int, int, Fraction] | None:
        """``(raw z-degree, sign, |coefficient|)`` of the top term, or None if zero."""
        if self.poly.is_zero():
            return None
        lc = self.poly.leading_coefficient()
        return self.poly.degree() + self.n_pp, (1 if lc > 0 else -1), abs(lc)

    def to_json(self) -> dict:
        return {
            "nPP": self.n_pp,
            "nPM": self.n_pm,
            "poly": self.poly.to_pairs(),
            "polyText": str(self.poly),
            "nonzero": self.nonzero,
            "upToSign": self.up_to_sign,
        }


def normalize(n_pants_arcs: int, terms: Mapping[tuple[int, int], int], n2_seen) -> NormalizedCoefficient:
    """Fold ``{(n2, z_pow): folded signed count}`` into normalized form.

    ``n2_seen`` lists the ``Dpm`` exponents of all states, including those whose
    contributions cancel; the reference exponent is their maximum.
    """
    top = max(n2_seen)
    poly = LaurentPoly.zero()
    by_k: dict[int, dict[int, int]] = defaultdict(dict)
    for (n2, zp), c in terms.items():
        if c:
            k = (top - n2) // 2
            by_k[k][zp] = by_k[k].get(zp, 0) + c
    for k, mono in by_k.items():
        poly = poly + LaurentPoly(mono) * TRIANGLE_RATIO ** k
    return NormalizedCoefficient(n_pants_arcs - top, top, poly)


def coefficient_bruteforce(a: ArcSystem, sigma: Mapping[str, int], cap: int | None = None) -> NormalizedCoefficient:
    """Normalized coefficient by explicit enumeration of all states."""
    roles = a.crossing_role()
    terms: dict[tuple[int, int], int] = defaultdict(int)
    seen = set()
    for st in iter_states(a, sigma, cap):
        w = state_weight(a, st, roles)
        seen.add(w.n_pm)
        terms[(w.n_pm, w.z_pow)] += w.folded_sign
    return normalize(len(a.pants_arcs()), terms, seen)


# Transfer evaluation.  Variables are annulus strands (one sign shared by both
# endpoints) and crossing pairs (over sign; the under point carries its
# negative).  Each variable meets exactly two pants-arc ends, so the pants
# arcs join the variables into disjoint cycles.


def _variables(a: ArcSystem):
    var_of: dict[str, tuple[int, int]] = {}  # point -> (variable, polarity)
    unary: list[AnnulusArc | None] = []
    edge_of: list[str | None] = []
    for arc in a.annulus_arcs():
        k = len(unary)
        unary.append(arc)
        edge_of.append(arc.edge)
        var_of[arc.ends[0]] = (k, 1)
        var_of[arc.ends[1]] = (k, 1)
    for cp in a.crossing_pairs:
        k = len(unary)
        unary.append(None)
        edge_of.append(None)
        var_of[cp.over] = (k, 1)
        var_of[cp.under] = (k, -1)
    return var_of, unary, edge_of


def _cycles(a: ArcSystem, var_of) -> list[list[tuple[int, PantsArc]]]:
    incident: dict[int, list[int]] = defaultdict(list)
    arcs = a.pants_arcs()
    for i, arc in enumerate(arcs):
        incident[var_of[arc.ends[0]][0]].append(i)
        incident[var_of[arc.ends[1]][0]].append(i)
    used = [False] * len(arcs)
    cycles = []
    for start in sorted(incident):
        if all(used[i] for i in incident[start]):
            continue
        # walk: (variable, arc leaving it)
        cyc = []
        v = start
        i = next(i for i in incident[v] if not used[i])
        while not used[i]:
            used[i] = True
            cyc.append((v, arcs[i]))
            p, q = arcs[i].ends
            vp, vq = var_of[p][0], var_of[q][0]
            w = vq if vp == v else vp
            if vp == vq:
                w = v
            v = w
            nxt = [j for j in incident[v] if not used[j]]
            if not nxt:
                break
            i = nxt[0]
        cycles.append(cyc)
    return cycles


def _merge(x: dict, y: dict) -> dict:
    out: dict = defaultdict(lambda: [0, 0])
    for (n2a, za, pa), (ca, na) in x.items():
        for (n2b, zb, pb), (cb, nb) in y.items():
            slot = out[(n2a + n2b, za + zb, tuple(i + j for i, j in zip(pa, pb)))]
            slot[0] += ca * cb
            slot[1] += na * nb
    return dict(out)


def _transfer(a: ArcSystem):
    """Aggregate all states: ``{(n2, z_pow, plus-counts per edge): [signed sum, #states]}``."""
    var_of, unary, edge_of = _variables(a)
    edges = list(a.graph.edge_ids)
    eidx = {e: i for i, e in enumerate(edges)}
    roles = a.crossing_role()
    zero_plus = (0,) * len(edges)

    def unit(var: int, s: int):
        arc = unary[var]
        plus = list(zero_plus)
        if arc is None:
            return (0, 0, zero_plus), 1
        w = annulus_weight(arc.swift, s)
        if s == 1:
            plus[eidx[edge_of[var]]] = 1
        return (w.n_pm, w.z_pow, tuple(plus)), w.folded_sign

    def factor(arc: PantsArc, assign: dict[int, int]):
        p, q = arc.ends
        signs = {p: var_of[p][1] * assign[var_of[p][0]], q: var_of[q][1] * assign[var_of[q][0]]}
        w = arc_weight(a, arc, signs, roles)
        return (w.n_pm, w.z_pow, zero_plus), w.folded_sign

    def shift(key, dk):
        return (key[0] + dk[0], key[1] + dk[1], tuple(i + j for i, j in zip(key[2], dk[2])))

    total = {(0, 0, zero_plus): [1, 1]}
    for cyc in _cycles(a, var_of):
        comp: dict = defaultdict(lambda: [0, 0])
        order = [v for v, _ in cyc]
        for s0 in (1, -1):
            key0, c0 = unit(order[0], s0)
            frontier = {s0: {key0: [c0, 1]}}  # sign of current variable -> partial sums
            for idx, (v, arc) in enumerate(cyc):
                closing = idx == len(cyc) - 1
                w = order[0] if closing else order[idx + 1]
                new: dict = defaultdict(lambda: defaultdict(lambda: [0, 0]))
                for s, table in frontier.items():
                    for s_next in ((s0,) if closing else (1, -1)):
                        dk, dc = factor(arc, {v: s, w: s_next})
                        if not closing:
                            uk, uc = unit(w, s_next)
                            dk, dc = shift(dk, uk), dc * uc
                        for key, (c, n) in table.items():
                            slot = new[s_next][shift(key, dk)]
                            slot[0] += c * dc
                            slot[1] += n
                frontier = new
            for table in frontier.values():
                for key, (c, n) in table.items():
                    comp[key][0] += c
                    comp[key][1] += n
        total = _merge(total, comp)
    return total


def coefficient_table(a: ArcSystem, cap: int | None = None) -> dict[tuple[int, ...], NormalizedCoefficient]:
    """Normalized coefficients of every admissible shift, keyed in edge order."""
    counts = _counts(a)
    limit = state_cap(cap)
    n_pairs = len(a.crossing_pairs)
    edges = list(counts)
    agg = _transfer(a)
    by_shift: dict[tuple[int, ...], tuple[dict, set]] = {}
    for (n2, zp, plus), (c, n) in agg.items():
        sigma = tuple(2 * p - counts[e] for p, e in zip(plus, edges))
        terms, seen = by_shift.setdefault(sigma, ({}, set()))
        if n:
            seen.add(n2)
        terms[(n2, zp)] = terms.get((n2, zp), 0) + c
    n_pants = len(a.pants_arcs())
    out = {}
    for sigma in (shift_key(s, edges) for s in enumerate_shifts(a)):
        n_states = 2 ** n_pairs * math.prod(math.comb(i, (i + s) // 2) for i, s in zip(counts.values(), sigma))
        if n_states > limit:
            raise ResourceError(f"shift {sigma} has {n_states} states, above the cap of {limit}")
        terms, seen = by_shift[sigma]
        out[sigma] = normalize(n_pants, terms, seen)
    return out


def coefficient(a: ArcSystem, sigma: Mapping[str, int], cap: int | None = None) -> NormalizedCoefficient:
    """Normalized limit coefficient of the shift ``sigma``."""
    counts = _counts(a)
    full = check_shift(a, sigma, counts)
    n = state_count(a, full)
    if n > state_cap(cap):
        raise ResourceError(f"{n} states exceed the cap of {state_cap(cap)}")
    return coefficient_table(a, cap)[shift_key(full, counts)]


def is_nonzero(a: ArcSystem, sigma: Mapping[str, int], cap: int | None = None) -> bool:
    return coefficient(a, sigma, cap).nonzero


# -- numeric checks ------------------------------------------------------------------------


def triangle_values(theta: float) -> tuple[float, float, complex]:
    """``(Dpp, Dpm, z)`` at the limit parameter ``theta`` in (0, 2/3)."""
    s = math.sin(math.pi * theta)
    dpp = math.sqrt(math.sin(1.5 * math.pi * theta) * math.sin(0.5 * math.pi * theta)) / s
    dpm = math.sin(0.5 * math.pi * theta) / s
    return dpp, dpm, cmath.exp(0.5j * math.pi * theta)


def numeric_state_sum(a: ArcSystem, sigma: Mapping[str, int], theta: float, cap: int | None = None) -> complex:
    roles = a.crossing_role()
    return sum((state_weight(a, st, roles).evaluate(theta) for st in iter_states(a, sigma, cap)), 0j)


# -- leading terms ---------------------------------------------------------------------------


class _NotApplicable:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NotApplicable"

    def __bool__(self):
        return False


NotApplicable = _NotApplicable()


@dataclass(frozen=True)
class LeadingTerm:
    degree: int
    sign: int
    count: int


@dataclass(frozen=True)
class LoopRelation:
    holds: bool
    offset: int | None  # B' with sign(W) = (-1)^(deg W + B')
    states_checked: int


def extremal_shift(a: ArcSystem, delta: int, e0: str) -> dict[str, int]:
    """``delta`` on ``e0`` and the full intersection number on every other edge."""
    counts = _counts(a)
    if e0 not in counts:
        raise DomainError(f"unknown edge {e0!r}")
    sigma = {e: n for e, n in counts.items()}
    sigma[e0] = delta
    return check_shift(a, sigma, counts)


def _oracle_preconditions(a: ArcSystem, delta: int, e0: str) -> dict[str, int]:
    prof = intersection_profile(a)
    if e0 not in prof.per_edge:
        raise OracleError(f"unknown edge {e0!r}")
    if prof.max == 0 or prof.per_edge[e0] != prof.max:
        raise OracleError(f"edge {e0} does not attain the maximal intersection number {prof.max}")
    i0 = prof.per_edge[e0]
    if abs(delta) > i0 or (delta - i0) % 2:
        raise OracleError(f"delta={delta} incompatible with intersection number {i0}")
    return prof.per_edge


def leading_term_oracle(a: ArcSystem, delta: int, e0: str):
    """Predict the top z-degree, sign and coefficient size of the extremal state sum.

    The prediction uses only the local shape of the arcs meeting ``e0``.  For a
    loop edge it returns ``NotApplicable``; use :func:`loop_sign_degree_check`.
    """
    counts = _oracle_preconditions(a, delta, e0)
    g = a.graph
    if g.is_loop(e0):
        return NotApplicable
    point_curve = a.point_curve()
    roles = a.crossing_role()
    on_e0 = {p for p, (e, _) in point_curve.items() if e == e0}
    pants_at: dict[str, PantsArc] = {}
    for arc in a.pants_arcs():
        pants_at[arc.ends[0]] = arc
        if arc.ends[1] in point_curve:
            pants_at[arc.ends[1]] = arc

    def far_end(arc: PantsArc, p: str) -> str:
        return arc.ends[1] if arc.ends[0] == p else arc.ends[0]

    base = 0
    for arc in a.arcs:
        if isinstance(arc, AnnulusArc):
            if arc.edge != e0:
                base += arc.swift
            continue
        if on_e0 & set(arc.ends):
            continue
        role = roles.get(arc.ends[1])
        base += {None: 1, "over": 3, "under": 0}[role[0] if role else None]

    taus = []
    plus_total = 0
    for arc in a.annulus_arcs():
        if arc.edge != e0:
            continue
        o = u = 0
        for p in arc.ends:
            q = far_end(pants_at[p], p)
            if q in on_e0:
                raise OracleError("a pants arc joins the two sides of a non-loop edge")
            role = roles.get(q)
            if role and role[0] == "over":
                o += 1
            elif role and role[0] == "under":
                u += 1
        t = arc.swift
        plus_total += t + 2 * o + 2 - u
        taus.append((t - u, (t + 1 + u) % 2))

    n_minus = (counts[e0] - delta) // 2
    taus.sort()
    degree = base + plus_total - sum(2 * (tau + 1) for tau, _ in taus[:n_minus])
    sign = (-1) ** sum(odd for _, odd in taus[:n_minus])
    if n_minus:
        level = taus[n_minus - 1][0]
        below = sum(1 for tau, _ in taus if tau < level)
        tie = sum(1 for tau, _ in taus if tau == level)
        count = math.comb(tie, n_minus - below)
    else:
        count = 1
    return LeadingTerm(degree, sign, count)


def loop_sign_degree_check(a: ArcSystem, delta: int, e0: str, cap: int | None = None) -> LoopRelation:
    """Test ``sign(W(s)) = (-1)^(deg W(s) + B')`` with one constant ``B'`` over every state.

    Kept as stated for reference; it does not hold in general, see
    :func:`loop_half_degree_check` for the relation that does.
    """
    _oracle_preconditions(a, delta, e0)
    sigma = extremal_shift(a, delta, e0)
    roles = a.crossing_role()
    offsets = set()
    checked = 0
    for st in iter_states(a, sigma, cap):
        w = state_weight(a, st, roles)
        checked += 1
        offsets.add(0 if w.folded_sign * (-1) ** w.degree == 1 else 1)
    holds = len(offsets) <= 1
    return LoopRelation(holds, next(iter(offsets)) if holds and offsets else None, checked)


def loop_half_degree_check(a: ArcSystem, delta: int, e0: str, cap: int | None = None) -> LoopRelation:
    """Test ``sign(W(s)) = (-1)^((deg W(s) + B') / 2)`` on the over-positive extremal states.

    Those states put +1 on every over point and on every point off ``e0``.
    Degrees then share one parity, so equal degree forces equal sign and the
    top-degree terms cannot cancel.  ``offset`` is ``B'`` reduced mod 4.
    """
    _oracle_preconditions(a, delta, e0)
    sigma = extremal_shift(a, delta, e0)
    roles = a.crossing_role()
    overs = {cp.over for cp in a.crossing_pairs}
    offsets = set()
    checked = 0
    for st in iter_states(a, sigma, cap):
        if any(st.signs[p] != 1 for p in overs):
            continue
        w = state_weight(a, st, roles)
        checked += 1
        # the B' in {0..3} with deg + B' even and (-1)^((deg + B')/2) = sign
        offsets.add(next(b for b in range(4) if (w.degree + b) % 2 == 0
                         and (-1) ** ((w.degree + b) // 2) == w.folded_sign))
    holds = len(offsets) <= 1
    return LoopRelation(holds, next(iter(offsets)) if holds and offsets else None, checked)


def top_degree_sign(a: ArcSystem, sigma: Mapping[str, int], cap: int | None = None) -> tuple[int, set[int], int]:
    """``(top degree, signs of the states reaching it, number of such states)``."""
    roles = a.crossing_role()
    best = None
    signs: set[int] = set()
    n = 0
    for st in iter_states(a, sigma, cap):
        w = state_weight(a, st, roles)
        if best is None or w.degree > best:
            best, signs, n = w.degree, {w.folded_sign}, 1
        elif w.degree == best:
            signs.add(w.folded_sign)
            n += 1
    return best, signs, n
