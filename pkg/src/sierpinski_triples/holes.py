"""Rule-based integer functions on the hole sets HSG (gasket) and HSP (pyramid).

A :class:`HoleFunction` is a finite ordered rule list; a hole takes the value
of the first rule whose region contains it.  Regions are self-similar sets of
holes (an ancestor cell, an allowed digit set for the remaining address
digits, a level band and, on the pyramid, a set of face classes), so every
level aggregate is an exact sum of exponentials in the level once the level
is large enough.  That is what makes the summability and averaging
classifiers decidable instead of sampled.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

from ._expsum import ExpSum
from .topology import PyramidFaceAddress, TriAddress

_MAX_HEADS = 1 << 20


class Domain(enum.Enum):
    GASKET = "gasket"
    PYRAMID = "pyramid"

    @property
    def alphabet(self) -> tuple[int, ...]:
        return (0, 1, 2) if self is Domain.GASKET else (0, 1, 2, 3)

    @property
    def face_classes(self) -> tuple[int | None, ...]:
        return (None,) if self is Domain.GASKET else (1, 2, 3)

    @property
    def growth(self) -> int:
        """Number of cells per cell one level down: 3 for HSG, 4 for HSP."""
        return len(self.alphabet)

    def holes_at_level(self, m: int) -> int:
        return len(self.face_classes) * self.growth ** (m - 1)

    def holes_form(self) -> ExpSum:
        """``m -> holes_at_level(m)`` as an exponential sum."""
        g = self.growth
        return ExpSum({g: Fraction(len(self.face_classes), g)})


def _subsets(items: Sequence[int]) -> list[frozenset[int]]:
    return [
        frozenset(c) for r in range(len(items) + 1) for c in itertools.combinations(items, r)
    ]


@dataclass(frozen=True)
class Region:
    """Holes whose address starts with ``prefix`` and continues in ``digits``.

    ``digits=None`` allows every digit, ``ks=None`` every pyramid face class;
    the level band ``[min_level, max_level]`` is inclusive.
    """

    prefix: tuple[int, ...] = ()
    digits: frozenset[int] | None = None
    min_level: int = 1
    max_level: int | None = None
    ks: frozenset[int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(d) for d in self.prefix))
        if self.digits is not None:
            object.__setattr__(self, "digits", frozenset(int(d) for d in self.digits))
        if self.ks is not None:
            object.__setattr__(self, "ks", frozenset(int(k) for k in self.ks))
        if self.min_level < 1:
            raise ValueError("min_level must be at least 1")

    @classmethod
    def all(cls) -> "Region":
        return cls()

    @classmethod
    def cell(cls, up: TriAddress | Sequence[int]) -> "Region":
        """All holes inside ``F_{n,j}`` (gasket) or a tetrahedron cell (pyramid path)."""
        path = up.path if isinstance(up, TriAddress) else tuple(up)
        if isinstance(up, TriAddress) and not up.is_up:
            raise ValueError("a cell is an up triangle")
        return cls(prefix=path)

    @classmethod
    def hole(cls, hole: TriAddress | PyramidFaceAddress) -> "Region":
        if isinstance(hole, PyramidFaceAddress):
            if not hole.in_hsp:
                raise ValueError(f"{hole} is not a non-horizontal hole")
            return cls(prefix=hole.path, min_level=hole.n, max_level=hole.n, ks=frozenset({hole.k}))
        if hole.is_up:
            raise ValueError("a hole address is a DOWN address")
        return cls(prefix=hole.path, min_level=hole.level, max_level=hole.level)

    @property
    def is_all(self) -> bool:
        return (
            not self.prefix
            and self.digits is None
            and self.min_level == 1
            and self.max_level is None
            and self.ks is None
        )

    def effective_max_level(self) -> int | None:
        if self.digits is not None and not self.digits:
            top = len(self.prefix) + 1
            return top if self.max_level is None else min(top, self.max_level)
        return self.max_level

    def is_empty(self) -> bool:
        top = self.effective_max_level()
        lo = max(self.min_level, len(self.prefix) + 1)
        return (top is not None and lo > top) or (self.ks is not None and not self.ks)

    def contains(self, level: int, path: Sequence[int], k: int | None = None) -> bool:
        if level < self.min_level or (self.max_level is not None and level > self.max_level):
            return False
        n = len(self.prefix)
        if len(path) < n or tuple(path[:n]) != self.prefix:
            return False
        if self.digits is not None and any(d not in self.digits for d in path[n:]):
            return False
        if self.ks is not None and k not in self.ks:
            return False
        return True

    def head_compatible(self, head: Sequence[int]) -> bool:
        n = len(self.prefix)
        if tuple(head[:n]) != self.prefix:
            return False
        return self.digits is None or all(d in self.digits for d in head[n:])

    def intersect(self, other: "Region") -> "Region | None":
        a, b = (self, other) if len(self.prefix) <= len(other.prefix) else (other, self)
        if not a.head_compatible(b.prefix):
            return None
        if a.digits is None:
            digits = b.digits
        elif b.digits is None:
            digits = a.digits
        else:
            digits = a.digits & b.digits
        if a.ks is None:
            ks = b.ks
        elif b.ks is None:
            ks = a.ks
        else:
            ks = a.ks & b.ks
        hi = [x for x in (a.max_level, b.max_level) if x is not None]
        out = Region(
            prefix=b.prefix,
            digits=digits,
            min_level=max(a.min_level, b.min_level),
            max_level=min(hi) if hi else None,
            ks=ks,
        )
        return None if out.is_empty() else out

    def issubset(self, other: "Region") -> bool:
        """Conservative containment test (used only to prune shadowed rules)."""
        if self.min_level < other.min_level:
            return False
        if other.max_level is not None:
            mine = self.effective_max_level()
            if mine is None or mine > other.max_level:
                return False
        if other.ks is not None and (self.ks is None or not self.ks <= other.ks):
            return False
        if not other.head_compatible(self.prefix):
            return False
        if other.digits is None:
            return True
        return self.digits is not None and self.digits <= other.digits

    def to_json(self):
        if self.is_all:
            return "all"
        out: dict = {"level": len(self.prefix), "path": list(self.prefix)}
        if self.digits is not None:
            out["digits"] = sorted(self.digits)
        if self.min_level != 1:
            out["min_level"] = self.min_level
        if self.max_level is not None:
            out["max_level"] = self.max_level
        if self.ks is not None:
            out["k"] = sorted(self.ks)
        return out

    @classmethod
    def from_json(cls, data) -> "Region":
        if data == "all":
            return cls()
        path = tuple(data.get("path", ()))
        if "level" in data and int(data["level"]) != len(path):
            raise ValueError(f"region level {data['level']} does not match path {list(path)}")
        return cls(
            prefix=path,
            digits=frozenset(data["digits"]) if "digits" in data else None,
            min_level=int(data.get("min_level", 1)),
            max_level=int(data["max_level"]) if data.get("max_level") is not None else None,
            ks=frozenset(data["k"]) if "k" in data else None,
        )


def _as_value(value) -> ExpSum:
    if isinstance(value, ExpSum):
        v = value
    elif isinstance(value, int):
        v = ExpSum.constant(value)
    else:
        v = ExpSum(dict((int(b), int(c)) for b, c in value))
    for b, c in v.terms.items():
        if b.denominator != 1 or c.denominator != 1 or b < 1:
            raise ValueError(f"rule values must be integer sums c*b**m with b >= 1, got {v}")
    return v


def _value_json(v: ExpSum):
    terms = v.terms
    if not terms:
        return 0
    if set(terms) == {1}:
        return int(terms[Fraction(1)])
    return {"terms": [[int(b), int(c)] for b, c in sorted(terms.items())]}


def _value_from_json(data) -> ExpSum:
    if isinstance(data, dict):
        return _as_value([tuple(t) for t in data["terms"]])
    return _as_value(int(data))


@dataclass(frozen=True)
class Rule:
    region: Region
    value: ExpSum

    def value_at(self, m: int) -> int:
        return int(self.value(m))


@dataclass(frozen=True)
class LevelAggregate:
    m: int
    holes: int
    abs_sum: int
    signed_sum: int
    average: Fraction
    deviation: Fraction


@dataclass(frozen=True)
class _Tail:
    """Exponential-sum forms of the aggregates, exact for ``m >= start``."""

    start: int
    counts: tuple[ExpSum, ...]
    abs_sum: ExpSum
    signed_sum: ExpSum


def _exact_count(used: frozenset[int], t: int) -> int:
    """Number of words of length t over ``used`` that use every letter of it."""
    return sum(
        (-1) ** (len(used) - len(v)) * len(v) ** t for v in _subsets(sorted(used))
    )


def _exact_count_form(used: frozenset[int], shift: int) -> ExpSum:
    """``m -> _exact_count(used, m - shift)`` for ``m > shift``."""
    terms = []
    for v in _subsets(sorted(used)):
        if v:
            terms.append((len(v), Fraction((-1) ** (len(used) - len(v)), len(v) ** shift)))
    return ExpSum(terms)


@dataclass(frozen=True, eq=False)
class HoleFunction:
    """Integer function on HSG or HSP given by first-match rules.

    >>> from sierpinski_triples.topology import TriAddress
    >>> g = HoleFunction.from_rules("gasket", [(Region.cell(TriAddress.up(1, [0])), -1), (Region.all(), 1)])
    >>> g(TriAddress.down(3, [0, 2])), g(TriAddress.down(3, [1, 2]))
    (-1, 1)
    """

    domain: Domain
    rules: tuple[Rule, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self.rules or not self.rules[-1].region.is_all:
            raise ValueError("the last rule must cover all holes")
        if self.domain is Domain.GASKET and any(r.region.ks is not None for r in self.rules):
            raise ValueError("face-class filters only apply on the pyramid")
        alpha = set(self.domain.alphabet)
        for r in self.rules:
            if not set(r.region.prefix) <= alpha or (r.region.digits and not r.region.digits <= alpha):
                raise ValueError(f"region digits outside the {self.domain.value} alphabet")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rules(cls, domain, rules: Iterable[tuple[Region, object]]) -> "HoleFunction":
        return cls(Domain(domain), tuple(Rule(reg, _as_value(v)) for reg, v in rules))

    @classmethod
    def constant(cls, value: int, domain="gasket") -> "HoleFunction":
        return cls.from_rules(domain, [(Region.all(), value)])

    @classmethod
    def zero(cls, domain="gasket") -> "HoleFunction":
        return cls.constant(0, domain)

    @classmethod
    def indicator(cls, region: Region, domain="gasket", value: int = 1) -> "HoleFunction":
        return cls.from_rules(domain, [(region, value), (Region.all(), 0)])

    def to_json(self) -> dict:
        return {
            "schema": "hole-function/1",
            "domain": self.domain.value,
            "rules": [
                {"region": r.region.to_json(), "value": _value_json(r.value)} for r in self.rules
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "HoleFunction":
        return cls.from_rules(
            data.get("domain", "gasket"),
            [(Region.from_json(r["region"]), _value_from_json(r["value"])) for r in data["rules"]],
        )

    # -- evaluation -------------------------------------------------------

    def _coords(self, hole) -> tuple[int, tuple[int, ...], int | None]:
        if isinstance(hole, PyramidFaceAddress):
            if self.domain is not Domain.PYRAMID:
                raise ValueError("pyramid address given to a gasket function")
            if not hole.in_hsp:
                raise ValueError(f"face class k={hole.k} is not a non-horizontal hole")
            return hole.n, hole.path, hole.k
        if self.domain is not Domain.GASKET:
            raise ValueError("gasket address given to a pyramid function")
        if hole.is_up:
            raise ValueError("hole functions are evaluated on DOWN addresses")
        return hole.level, hole.path, None

    def rule_index(self, hole) -> int:
        level, path, k = self._coords(hole)
        for i, r in enumerate(self.rules):
            if r.region.contains(level, path, k):
                return i
        raise AssertionError("unreachable: last rule covers everything")

    def __call__(self, hole) -> int:
        level = self._coords(hole)[0]
        return self.rules[self.rule_index(hole)].value_at(level)

    eval = __call__

    # -- algebra ----------------------------------------------------------

    def _check_domain(self, other: "HoleFunction"):
        if self.domain is not other.domain:
            raise ValueError("cannot combine gasket and pyramid hole functions")

    @staticmethod
    def _pruned(domain: Domain, pairs: list[tuple[Region, ExpSum]]) -> "HoleFunction":
        kept: list[tuple[Region, ExpSum]] = []
        for reg, val in pairs:
            if any(reg.issubset(prev) for prev, _ in kept):
                continue
            kept.append((reg, val))
            if reg.is_all:
                break
        return HoleFunction(domain, tuple(Rule(r, v) for r, v in kept))

    def __add__(self, other: "HoleFunction") -> "HoleFunction":
        self._check_domain(other)
        pairs = []
        for r1 in self.rules:
            for r2 in other.rules:
                reg = r1.region.intersect(r2.region)
                if reg is not None:
                    pairs.append((reg, r1.value + r2.value))
        return self._pruned(self.domain, pairs)

    add = __add__

    def __neg__(self) -> "HoleFunction":
        return HoleFunction(self.domain, tuple(Rule(r.region, -r.value) for r in self.rules))

    def __sub__(self, other: "HoleFunction") -> "HoleFunction":
        return self + (-other)

    def scale(self, c: int) -> "HoleFunction":
        return HoleFunction(self.domain, tuple(Rule(r.region, r.value * c) for r in self.rules))

    def abs(self) -> "HoleFunction":
        """Pointwise absolute value (exact once each rule's value has a fixed sign)."""
        rules = []
        for i, r in enumerate(self.rules):
            v = r.value
            start = v.sign_threshold(1)
            sign = v.eventual_sign() or 1
            for m in range(1, start):
                # levels before the sign settles get their own single-level rules
                reg = Region(r.region.prefix, r.region.digits, m, m, r.region.ks).intersect(r.region)
                if reg is not None:
                    rules.append(Rule(reg, ExpSum.constant(abs(int(v(m))))))
            if start > 1 and not r.region.is_all:
                reg = Region(r.region.prefix, r.region.digits, start, None, r.region.ks).intersect(r.region)
                if reg is not None:
                    rules.append(Rule(reg, v * sign))
            elif start > 1:
                rules.append(Rule(Region(min_level=start), v * sign))
            else:
                rules.append(Rule(r.region, v * sign))
        if not rules[-1].region.is_all:
            rules.append(Rule(Region.all(), ExpSum()))
        return HoleFunction(self.domain, tuple(rules))

    def restrict(self, region: Region) -> "HoleFunction":
        """``f`` on ``region`` and 0 elsewhere."""
        pairs = []
        for r in self.rules:
            reg = r.region.intersect(region)
            if reg is not None:
                pairs.append((reg, r.value))
        pairs.append((Region.all(), ExpSum()))
        return self._pruned(self.domain, pairs)

    def equals_on(self, other: "HoleFunction", max_level: int) -> bool:
        return all(self(h) == other(h) for h in iter_holes(self.domain, max_level))

    # -- exact counting ---------------------------------------------------

    def _heads(self, rules_idx: list[int], plen: int):
        if len(self.domain.alphabet) ** plen > _MAX_HEADS:
            raise ValueError(f"rule prefixes too deep to enumerate ({plen} digits)")
        for head in itertools.product(self.domain.alphabet, repeat=plen):
            yield [i for i in rules_idx if self.rules[i].region.head_compatible(head)]

    def _first_match_table(self, compat: list[int]) -> list[tuple[frozenset[int], int | None, int]]:
        """(used digits, face class, first matching rule) for one head."""
        out = []
        for used in _subsets(self.domain.alphabet):
            for k in self.domain.face_classes:
                for i in compat:
                    reg = self.rules[i].region
                    if (reg.digits is None or used <= reg.digits) and (
                        reg.ks is None or k in reg.ks
                    ):
                        out.append((used, k, i))
                        break
        return out

    def rule_counts(self, m: int) -> list[int]:
        """Exact number of level-``m`` holes taking each rule."""
        key = ("counts", m)
        if key in self._cache:
            return self._cache[key]
        L = m - 1
        active = [
            i
            for i, r in enumerate(self.rules)
            if r.region.min_level <= m
            and (r.region.max_level is None or m <= r.region.max_level)
            and len(r.region.prefix) <= L
        ]
        plen = max((len(self.rules[i].region.prefix) for i in active), default=0)
        t = L - plen
        counts = [0] * len(self.rules)
        for compat in self._heads(active, plen):
            for used, _k, i in self._first_match_table(compat):
                if t == 0 and used:
                    continue
                counts[i] += _exact_count(used, t)
        self._cache[key] = counts
        return counts

    def level_aggregate(self, m: int) -> LevelAggregate:
        if m < 1:
            raise ValueError("levels start at 1")
        counts = self.rule_counts(m)
        vals = [r.value_at(m) for r in self.rules]
        holes = self.domain.holes_at_level(m)
        abs_sum = sum(c * abs(v) for c, v in zip(counts, vals))
        avg = Fraction(abs_sum, holes)
        dev = sum((c * abs(abs(v) - avg) for c, v in zip(counts, vals) if c), Fraction(0))
        return LevelAggregate(
            m=m,
            holes=holes,
            abs_sum=abs_sum,
            signed_sum=sum(c * v for c, v in zip(counts, vals)),
            average=avg,
            deviation=dev,
        )

    @cached_property
    def tail(self) -> _Tail:
        """Exact exponential-sum forms valid from ``tail.start`` on."""
        rules = self.rules
        start = 1
        for r in rules:
            start = max(start, r.region.min_level)
            if r.region.max_level is not None:
                start = max(start, r.region.max_level + 1)
        live = [i for i, r in enumerate(rules) if r.region.max_level is None]
        plen = max((len(rules[i].region.prefix) for i in live), default=0)
        start = max(start, plen + 2)
        counts = [ExpSum() for _ in rules]
        for compat in self._heads(live, plen):
            for used, _k, i in self._first_match_table(compat):
                if used:
                    counts[i] = counts[i] + _exact_count_form(used, plen + 1)
        abs_sum = ExpSum()
        signed = ExpSum()
        for c, r in zip(counts, rules):
            if not c:
                continue
            start = max(start, r.value.sign_threshold(start))
            abs_sum = abs_sum + c * (r.value * (r.value.eventual_sign() or 1))
            signed = signed + c * r.value
        return _Tail(start, tuple(counts), abs_sum, signed)

    def abs_sum_form(self) -> tuple[int, ExpSum]:
        t = self.tail
        return t.start, t.abs_sum

    # -- classification ---------------------------------------------------

    def root_limsup(self) -> Fraction:
        """``limsup_m (sum_k |f(m,k)|)**(1/m)``, exact."""
        return self.tail.abs_sum.rate()

    def average_form(self) -> ExpSum:
        holes = self.domain.holes_form()
        g = self.domain.growth
        # abs_sum(m) / holes(m) with holes(m) = c * g**m
        c = holes.terms[Fraction(g)]
        return self.tail.abs_sum.scale_base(Fraction(1, g)) * (1 / c)

    def deviation_rate(self) -> Fraction:
        """``limsup_m (sum_k ||f(m,k)| - a(m)|)**(1/m)``, exact."""
        t = self.tail
        avg = self.average_form()
        dev = ExpSum()
        for c, r in zip(t.counts, self.rules):
            if not c:
                continue
            diff = r.value * (r.value.eventual_sign() or 1) - avg
            dev = dev + c * diff * diff.eventual_sign()
        return dev.rate()

    def is_summable(self) -> bool:
        return self.root_limsup() <= self.domain.growth

    def averages_bounded(self) -> bool:
        return self.root_limsup() <= self.domain.growth

    def is_boundedly_almost_invariant(self) -> bool:
        return self.averages_bounded() and self.deviation_rate() < self.domain.growth

    def c1_witness(self) -> tuple[int, int] | None:
        """``(t, M)`` with ``f(m, k) = t`` for all ``m >= M``, minimal M, or None."""
        t = self.tail
        vals = set()
        for c, r in zip(t.counts, self.rules):
            if c:
                terms = r.value.terms
                if set(terms) - {Fraction(1)}:
                    return None
                vals.add(int(terms.get(Fraction(1), 0)))
        if len(vals) > 1:
            return None
        tval = vals.pop() if vals else 0
        M = t.start
        while M > 1:
            m = M - 1
            counts = self.rule_counts(m)
            if any(c and r.value_at(m) != tval for c, r in zip(counts, self.rules)):
                break
            M = m
        return tval, M

    def in_c1(self) -> bool:
        return self.c1_witness() is not None

    def classify(self) -> dict:
        c1 = self.c1_witness()
        return {
            "domain": self.domain.value,
            "summable": self.is_summable(),
            "bai": self.is_boundedly_almost_invariant(),
            "c1": c1 is not None,
            "c1_witness": None if c1 is None else {"t": c1[0], "M": c1[1]},
            "root_limsup": _frac_json(self.root_limsup()),
            "deviation_rate": _frac_json(self.deviation_rate()),
        }


def _frac_json(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def iter_holes(domain: Domain | str, max_level: int, min_level: int = 1):
    """Every hole of level ``min_level..max_level`` in canonical order."""
    domain = Domain(domain)
    for m in range(min_level, max_level + 1):
        for path in itertools.product(domain.alphabet, repeat=m - 1):
            if domain is Domain.GASKET:
                yield TriAddress.down(m, path)
            else:
                for k in (1, 2, 3):
                    yield PyramidFaceAddress.from_path(path, k)


def example_313() -> tuple[HoleFunction, HoleFunction, HoleFunction]:
    """The pair f = 1, g = -1 on F_{1,1} / 1 elsewhere, and h = f + g."""
    f = HoleFunction.constant(1)
    g = HoleFunction.from_rules(
        "gasket", [(Region.cell(TriAddress.up(1, [0])), -1), (Region.all(), 1)]
    )
    return f, g, f + g


def estimate_growth(func: Callable[[object], int], domain="gasket", max_level: int = 8) -> dict:
    """Numeric look at an arbitrary hole function up to ``max_level``.

    Limsups of arbitrary sequences cannot be decided from finitely many
    terms, so the verdict is always ``"inconclusive"``.
    """
    domain = Domain(domain)
    rows = []
    for m in range(1, max_level + 1):
        vals = [abs(int(func(h))) for h in iter_holes(domain, m, m)]
        s = sum(vals)
        a = Fraction(s, len(vals))
        dev = sum(abs(v - a) for v in vals)
        rows.append(
            {
                "m": m,
                "abs_sum": s,
                "root": s ** (1 / m) if s else 0.0,
                "deviation_root": float(dev) ** (1 / m) if dev else 0.0,
            }
        )
    last = rows[-1]
    return {
        "verdict": "inconclusive",
        "levels": rows,
        "root_estimate": last["root"],
        "deviation_rate_estimate": last["deviation_root"],
        "summable_hint": last["root"] <= domain.growth,
    }


def log_rate(rate: Fraction) -> float:
    """``log2(rate)``; ``-inf`` for eventually-zero functions."""
    return math.log2(rate) if rate > 0 else float("-inf")


def random_hole_function(
    rng,
    domain="gasket",
    n_rules: int = 4,
    max_prefix: int = 2,
    values: tuple[int, int] = (-3, 3),
    exponential: bool = False,
) -> HoleFunction:
    """A seeded random rule-based function (for property checks).

    With ``exponential=True`` some rule values grow like ``c * b**m``.
    """
    domain = Domain(domain)
    alpha = domain.alphabet
    rules = []
    for _ in range(n_rules):
        plen = rng.randint(0, max_prefix)
        prefix = tuple(rng.choice(alpha) for _ in range(plen))
        digits = None
        if rng.random() < 0.4:
            digits = frozenset(d for d in alpha if rng.random() < 0.6) or frozenset({rng.choice(alpha)})
        lo = rng.choice([1, 1, 1, 2, 3])
        hi = rng.choice([None, None, None, lo + rng.randint(0, 3)])
        ks = None
        if domain is Domain.PYRAMID and rng.random() < 0.4:
            ks = frozenset(rng.sample([1, 2, 3], rng.randint(1, 2)))
        region = Region(prefix, digits, lo, hi, ks)
        if region.is_empty():
            continue
        if exponential and rng.random() < 0.3:
            value = [(rng.randint(1, 5), rng.choice([-2, -1, 1, 2]))]
        else:
            value = rng.randint(*values)
        rules.append((region, value))
    rules.append((Region.all(), rng.randint(*values)))
    return HoleFunction.from_rules(domain, rules)
