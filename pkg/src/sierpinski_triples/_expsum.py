"""Exact finite sums of exponentials ``sum_b c_b * b**m`` with rational data.

Rule-based hole functions have level aggregates of this shape once the
level is past every prefix and level bound, so growth rates, limits and
geometric tails can be decided exactly.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction]


class ExpSum:
    """Immutable ``m -> sum(coeff * base**m)`` with nonnegative rational bases."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Number, Number] | Iterable[tuple[Number, Number]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Fraction, Fraction] = {}
        for base, coeff in items:
            base = Fraction(base)
            if base < 0:
                raise ValueError("bases must be nonnegative")
            acc[base] = acc.get(base, Fraction(0)) + Fraction(coeff)
        # base 0 only matters at m = 0, which callers never evaluate in tail form
        self._terms = {b: c for b, c in acc.items() if c != 0 and b != 0}

    @classmethod
    def constant(cls, c: Number) -> "ExpSum":
        return cls({1: c})

    @property
    def terms(self) -> dict[Fraction, Fraction]:
        return dict(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExpSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*{b}^m" for b, c in sorted(self._terms.items()))
        return f"ExpSum({body or '0'})"

    def __call__(self, m: int) -> Fraction:
        return sum((c * b**m for b, c in self._terms.items()), Fraction(0))

    def __add__(self, other: "ExpSum") -> "ExpSum":
        return ExpSum(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> "ExpSum":
        return ExpSum({b: -c for b, c in self._terms.items()})

    def __sub__(self, other: "ExpSum") -> "ExpSum":
        return self + (-other)

    def __mul__(self, other: Union["ExpSum", Number]) -> "ExpSum":
        if isinstance(other, ExpSum):
            return ExpSum(
                (b1 * b2, c1 * c2)
                for b1, c1 in self._terms.items()
                for b2, c2 in other._terms.items()
            )
        return ExpSum({b: c * other for b, c in self._terms.items()})

    __rmul__ = __mul__

    def shift(self, k: int) -> "ExpSum":
        """Return ``m -> self(m + k)``."""
        return ExpSum({b: c * b**k for b, c in self._terms.items()})

    def scale_base(self, factor: Number) -> "ExpSum":
        """Return ``m -> factor**m * self(m)``."""
        factor = Fraction(factor)
        return ExpSum({b * factor: c for b, c in self._terms.items()})

    def dominant(self) -> tuple[Fraction, Fraction] | None:
        if not self._terms:
            return None
        b = max(self._terms)
        return b, self._terms[b]

    def rate(self) -> Fraction:
        """``limsup |self(m)|**(1/m)``; exact because the bases are distinct."""
        dom = self.dominant()
        return Fraction(0) if dom is None else dom[0]

    def eventual_sign(self) -> int:
        dom = self.dominant()
        if dom is None:
            return 0
        return 1 if dom[1] > 0 else -1

    def sign_threshold(self, start: int = 0) -> int:
        """Smallest ``m >= start`` after which the sign never changes again."""
        dom = self.dominant()
        if dom is None:
            return start
        b0, c0 = dom
        rest = [(b, abs(c)) for b, c in self._terms.items() if b != b0]
        m = start
        # |c0| b0^m > sum |c| b^m is monotone in m once it holds since b < b0
        while sum((c * b**m for b, c in rest), Fraction(0)) >= abs(c0) * b0**m:
            m += 1
        return m

    def abs_bound(self) -> "ExpSum":
        """Termwise absolute values; dominates ``|self(m)|`` for every m."""
        return ExpSum({b: abs(c) for b, c in self._terms.items()})

    def geometric_tail(self, x: float, start: int) -> float:
        """``sum_{m >= start} self(m) * x**m`` for ``b * x < 1`` on every base."""
        total = 0.0
        for b, c in self._terms.items():
            q = float(b) * x
            if q >= 1.0:
                raise ValueError(f"geometric tail diverges: base {b} at x={x}")
            total += float(c) * q**start / (1.0 - q)
        return total
