"""Laurent polynomials in one variable with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact coefficients")
    return Fraction(value)


class LaurentPoly:
    """An element of Q[z, 1/z].

    Instances are immutable and hashable; terms with zero coefficient are
    never stored, so the zero polynomial has no terms.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for exp, coeff in items:
            c = _frac(coeff)
            if c:
                acc[int(exp)] = acc.get(int(exp), Fraction(0)) + c
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c))

    @classmethod
    def monomial(cls, coeff=1, exp: int = 0) -> LaurentPoly:
        return cls({exp: coeff})

    @classmethod
    def zero(cls) -> LaurentPoly:
        return cls()

    @classmethod
    def one(cls) -> LaurentPoly:
        return cls({0: 1})

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[int, Fraction], ...]:
        """``(exponent, coefficient)`` pairs sorted by increasing exponent."""
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, exp: int) -> Fraction:
        for e, c in self._terms:
            if e == exp:
                return c
        return Fraction(0)

    def degree(self) -> int:
        if not self._terms:
            raise ValueError("the zero polynomial has no degree")
        return self._terms[-1][0]

    def low_degree(self) -> int:
        if not self._terms:
            raise ValueError("the zero polynomial has no degree")
        return self._terms[0][0]

    def leading_coefficient(self) -> Fraction:
        if not self._terms:
            raise ValueError("the zero polynomial has no leading coefficient")
        return self._terms[-1][1]

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> LaurentPoly:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return LaurentPoly(list(self._terms) + list(other._terms))

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly((e, -c) for e, c in self._terms)

    def __sub__(self, other) -> LaurentPoly:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> LaurentPoly:
        return (-self) + other

    def __mul__(self, other) -> LaurentPoly:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc: dict[int, Fraction] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                acc[e1 + e2] = acc.get(e1 + e2, Fraction(0)) + c1 * c2
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (e, c), = self._terms
            return LaurentPoly({e * n: c ** n})
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by ``z**k``."""
        return LaurentPoly((e + k, c) for e, c in self._terms)

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    # -- evaluation and serialization ----------------------------------------

    def evaluate(self, z: complex) -> complex:
        return sum((complex(c) * z ** e for e, c in self._terms), 0j)

    def to_pairs(self) -> list[list]:
        """Serialize as ``[[exponent, "p/q"], ...]`` sorted by exponent."""
        return [[e, str(c)] for e, c in self._terms]

    @classmethod
    def from_pairs(cls, pairs) -> LaurentPoly:
        return cls((int(e), Fraction(c)) for e, c in pairs)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in reversed(self._terms):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "z" if e == 1 else f"z^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly({dict(self._terms)!r})"


def _coerce(value):
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return LaurentPoly({0: value})
    return NotImplemented


#: ``z^2 + 1 + z^-2``, the ratio of squared triangle coefficients.
TRIANGLE_RATIO = LaurentPoly({2: 1, 0: 1, -2: 1})
