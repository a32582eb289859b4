"""Quantum intersection counts at the limit and their geometric bounds."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .curve import ArcSystem, intersection_profile, split_parallel
from .statesum import coefficient_table, enumerate_shifts, extremal_shift, shift_key


def nonzero_shifts(a: ArcSystem, cap: int | None = None) -> list[tuple[int, ...]]:
    """Nonzero shifts with a nonvanishing coefficient, keyed in edge order."""
    core, _ = split_parallel(a)
    table = coefficient_table(core, cap)
    return [k for k, c in table.items() if any(k) and c.nonzero]


def quantum_count(a: ArcSystem, cap: int | None = None) -> int:
    """Number of nonzero shifts whose limit coefficient does not vanish.

    Parallel copies of decomposition curves are ignored.  A vanishing limit
    does not force the finite-level coefficient to vanish, so this is a lower
    bound for the count at finite level.
    """
    return len(nonzero_shifts(a, cap))


@dataclass(frozen=True)
class BoundsReport:
    n_lim: int
    total: int
    genus: int
    lower: Fraction
    upper: int
    max_bound: int
    two_pow: int
    verdicts: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> dict:
        return {
            "nLim": self.n_lim,
            "total": self.total,
            "genus": self.genus,
            "lower": str(self.lower),
            "upper": self.upper,
            "maxBound": self.max_bound,
            "twoPow": self.two_pow,
            "twoPowHolds": self.two_pow <= self.n_lim,
            "twoPowAsserted": False,
            "verdicts": dict(self.verdicts),
            "passed": self.passed,
        }


def bounds_report(a: ArcSystem, cap: int | None = None) -> BoundsReport:
    prof = intersection_profile(a)
    g = a.graph.genus
    n = quantum_count(a, cap)
    lower = Fraction(prof.total, 3 * g - 3)
    upper = (prof.total + 1) ** (3 * g - 3) - 1
    two_pow = 2 ** prof.m_gamma if prof.total else 0
    verdicts = {"lower": lower <= n, "upper": n <= upper, "max": prof.max <= n}
    return BoundsReport(n, prof.total, g, lower, upper, prof.max, two_pow, verdicts)


@dataclass(frozen=True)
class FamilyReport:
    max_intersection: int
    witnesses: list[dict] = field(default_factory=list)
    falsifications: list[dict] = field(default_factory=list)

    @property
    def vacuous(self) -> bool:
        return self.max_intersection == 0

    @property
    def passed(self) -> bool:
        return not self.falsifications

    def distinct_witnesses(self) -> int:
        return len({tuple(w["shift"]) for w in self.witnesses})

    def to_json(self) -> dict:
        return {
            "max": self.max_intersection,
            "vacuous": self.vacuous,
            "witnesses": self.witnesses,
            "distinctWitnesses": self.distinct_witnesses(),
            "falsifications": self.falsifications,
            "passed": self.passed,
        }


def verify_theorem_family(a: ArcSystem, cap: int | None = None) -> FamilyReport:
    """Check the extremal shifts of every edge of maximal intersection.

    For each such edge ``e0`` and each ``delta != 0`` with ``|delta| <= M``
    and ``delta = M (mod 2)``, the shift ``delta`` on ``e0`` and full
    intersection elsewhere must have a nonvanishing coefficient.
    """
    core, _ = split_parallel(a)
    prof = intersection_profile(core)
    report = FamilyReport(prof.max)
    if prof.max == 0:
        return report
    edges = list(core.graph.edge_ids)
    table = coefficient_table(core, cap)
    for e0 in edges:
        if prof.per_edge[e0] != prof.max:
            continue
        for delta in range(-prof.max, prof.max + 1, 2):
            if delta == 0:
                continue
            key = shift_key(extremal_shift(core, delta, e0), edges)
            entry = {"edge": e0, "delta": delta, "shift": list(key)}
            (report.witnesses if table[key].nonzero else report.falsifications).append(entry)
    return report


__all__ = [
    "BoundsReport",
    "FamilyReport",
    "bounds_report",
    "enumerate_shifts",
    "nonzero_shifts",
    "quantum_count",
    "verify_theorem_family",
]
