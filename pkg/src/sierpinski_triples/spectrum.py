"""Spectral triples assembled from circle modules: spectra, zeta functions, residues.

A circle module at level ``l`` is the circle Dirac operator transported to a
triangle of circumference ``2*pi*2**-l``; its ``|D|`` has eigenvalues
``2**l * (j + 1/2)``, ``j >= 0``, each twice.  A :class:`TripleSpec` is a
direct sum of such modules, described by a few structured parts so that the
level counts ``N_l`` stay exact and, for large ``l``, become finite sums of
exponentials.  Everything spectral reduces to

    zeta(s) = 2 (2**s - 1) zeta_R(s) * sum_l N_l 2**(-l s).
"""
from __future__ import annotations

import enum
import heapq
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Union

import numpy as np

from ._expsum import ExpSum
from .holes import Domain, HoleFunction, iter_holes
from .topology import PyramidFaceAddress, TriAddress, outer_faces
from .zeta import riemann_zeta

LN2 = math.log(2.0)
#: largest truncation index used by zeta_direct in the per-circle sum
MAX_J = 1 << 26
_CHUNK = 1 << 22
_MAX_LEVELS = 4000

Source = Union[TriAddress, PyramidFaceAddress, tuple]


class ModuleOrientation(enum.Enum):
    POSITIVE = "positive"
    REVERSED = "reversed"

    @property
    def sign(self) -> int:
        return 1 if self is ModuleOrientation.POSITIVE else -1


class AbscissaAboveDimension(UserWarning):
    """The zeta function converges only beyond the fractal dimension."""


class PoleOrderError(ValueError):
    pass


def source_level(source: Source) -> int:
    if isinstance(source, TriAddress):
        return source.level
    if isinstance(source, PyramidFaceAddress):
        return source.n
    if isinstance(source, tuple) and source[0] == "pyramid-outer":
        return 0
    raise TypeError(f"unknown module source {source!r}")


def source_to_json(source: Source) -> dict:
    if isinstance(source, TriAddress):
        return source.to_json()
    if isinstance(source, PyramidFaceAddress):
        return source.to_json()
    return {"outer": source[1]}


def source_from_json(data: dict) -> Source:
    if "orient" in data:
        return TriAddress.from_json(data)
    if "outer" in data:
        k = int(data["outer"])
        if not 1 <= k <= 4:
            raise ValueError("outer pyramid faces are numbered 1..4")
        return ("pyramid-outer", k)
    return PyramidFaceAddress.from_json(data)


@dataclass(frozen=True)
class CircleModuleSpec:
    """``multiplicity`` copies of the circle module on ``source``."""

    source: Source
    orientation: ModuleOrientation = ModuleOrientation.POSITIVE
    multiplicity: int = 1

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")

    @property
    def level(self) -> int:
        return source_level(self.source)

    @property
    def domain(self) -> Domain:
        return Domain.GASKET if isinstance(self.source, TriAddress) else Domain.PYRAMID

    @property
    def signed_multiplicity(self) -> int:
        return self.orientation.sign * self.multiplicity

    def to_json(self) -> dict:
        return {
            "source": source_to_json(self.source),
            "orientation": self.orientation.value,
            "multiplicity": self.multiplicity,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CircleModuleSpec":
        return cls(
            source_from_json(data["source"]),
            ModuleOrientation(data.get("orientation", "positive")),
            int(data.get("multiplicity", 1)),
        )


@dataclass(frozen=True)
class ZeroPart:
    """The zero triple: outer boundary plus every hole (gasket or pyramid).

    Gasket: ``Delta_{0,1}`` reversed and each ``nabla_{m,k}`` positive.
    Pyramid: the four faces of ``P_0`` and all eight faces of every
    octahedron, each oriented by its outward normal.
    """

    domain: Domain

    def level_count(self, l: int) -> int:
        if self.domain is Domain.GASKET:
            return 1 if l == 0 else 3 ** (l - 1)
        return 4 if l == 0 else 8 * 4 ** (l - 1)

    def tail(self) -> tuple[int, ExpSum]:
        if self.domain is Domain.GASKET:
            return 1, ExpSum({3: Fraction(1, 3)})
        return 1, ExpSum({4: 2})


@dataclass(frozen=True)
class ExcludedPart:
    """One summand of the zero gasket triple removed."""

    address: TriAddress

    def __post_init__(self):
        if self.address.is_up and self.address.level != 0:
            raise ValueError("only Delta_{0,1} or a hole can be excluded")

    def level_count(self, l: int) -> int:
        return -1 if l == self.address.level else 0


@dataclass(frozen=True)
class HolePart:
    """``UFM(f)``: |f(h)| copies on each hole h, reversed where f < 0."""

    f: HoleFunction

    def level_count(self, l: int) -> int:
        return 0 if l == 0 else self.f.level_aggregate(l).abs_sum

    def tail(self) -> tuple[int, ExpSum]:
        return self.f.abs_sum_form()


@dataclass(frozen=True)
class ModulesPart:
    modules: tuple[CircleModuleSpec, ...]

    def level_count(self, l: int) -> int:
        return sum(c.multiplicity for c in self.modules if c.level == l)

    @property
    def top_level(self) -> int:
        return max((c.level for c in self.modules), default=-1)


Part = Union[ZeroPart, ExcludedPart, HolePart, ModulesPart]


@dataclass(frozen=True, eq=False)
class TripleSpec:
    """A spectral triple as a direct sum of circle modules.

    >>> zgt = TripleSpec.zgt()
    >>> [zgt.level_count(l) for l in range(4)]
    [1, 1, 3, 9]
    """

    domain: Domain
    parts: tuple[Part, ...]
    kind: str = "sum"
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for p in self.parts:
            d = None
            if isinstance(p, ZeroPart):
                d = p.domain
            elif isinstance(p, HolePart):
                d = p.f.domain
            elif isinstance(p, ExcludedPart):
                d = Domain.GASKET
            elif isinstance(p, ModulesPart):
                ds = {c.domain for c in p.modules}
                d = ds.pop() if len(ds) == 1 else (None if not ds else "mixed")
            if d is not None and d != self.domain:
                raise ValueError("all summands must live on the same fractal")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zgt(cls) -> "TripleSpec":
        return cls(Domain.GASKET, (ZeroPart(Domain.GASKET),), "ZGT")

    @classmethod
    def zpt(cls) -> "TripleSpec":
        return cls(Domain.PYRAMID, (ZeroPart(Domain.PYRAMID),), "ZPT")

    @classmethod
    def rgt(cls, excluded: TriAddress) -> "TripleSpec":
        return cls(Domain.GASKET, (ZeroPart(Domain.GASKET), ExcludedPart(excluded)), "RGT")

    @classmethod
    def st(cls, f: HoleFunction) -> "TripleSpec":
        """``ZGT + UFM(f)`` on the gasket, ``ZPT + UFM(f)`` on the pyramid."""
        kind = "STGasket" if f.domain is Domain.GASKET else "STPyramid"
        return cls(f.domain, (ZeroPart(f.domain), HolePart(f)), kind)

    @classmethod
    def ufm(cls, f: HoleFunction) -> "TripleSpec":
        return cls(f.domain, (HolePart(f),), "UFM")

    @classmethod
    def modules(cls, modules, domain: Domain | str | None = None) -> "TripleSpec":
        modules = tuple(modules)
        if domain is None:
            domain = modules[0].domain if modules else Domain.GASKET
        return cls(Domain(domain), (ModulesPart(modules),), "modules")

    @classmethod
    def single(cls, source: Source, orientation=ModuleOrientation.POSITIVE, multiplicity=1):
        mod = CircleModuleSpec(source, ModuleOrientation(orientation), multiplicity)
        return cls.modules([mod])

    def __add__(self, other: "TripleSpec") -> "TripleSpec":
        if self.domain is not other.domain:
            raise ValueError("cannot add gasket and pyramid triples")
        return TripleSpec(self.domain, self.parts + other.parts, "sum")

    direct_sum = __add__

    # -- level structure --------------------------------------------------

    def level_count(self, l: int) -> int:
        """Total number of circle modules ``N_l`` at level ``l``."""
        key = ("N", l)
        if key not in self._cache:
            n = sum(p.level_count(l) for p in self.parts)
            if n < 0:
                raise ValueError(f"negative module count at level {l}")
            self._cache[key] = n
        return self._cache[key]

    @property
    def tail(self) -> tuple[int, ExpSum]:
        """``(L, form)`` with ``N_l = form(l)`` exactly for ``l >= L``."""
        if "tail" not in self._cache:
            start, form = 0, ExpSum()
            for p in self.parts:
                if isinstance(p, (ZeroPart, HolePart)):
                    s0, fp = p.tail()
                    start, form = max(start, s0), form + fp
                elif isinstance(p, ExcludedPart):
                    start = max(start, p.address.level + 1)
                elif isinstance(p, ModulesPart):
                    start = max(start, p.top_level + 1)
            self._cache["tail"] = (start, form)
        return self._cache["tail"]

    @property
    def is_finite(self) -> bool:
        return not self.tail[1]

    def rate(self) -> Fraction:
        """Exponential growth rate of ``N_l``."""
        return self.tail[1].rate()

    # -- JSON -------------------------------------------------------------

    def to_json(self) -> dict:
        if self.kind in ("ZGT", "ZPT"):
            body = {"kind": self.kind}
        elif self.kind == "RGT":
            body = {"kind": "RGT", "excluded": self.parts[1].address.to_json()}
        elif self.kind in ("STGasket", "STPyramid", "UFM"):
            f = self.parts[-1].f.to_json()
            f.pop("schema", None)
            body = {"kind": self.kind, "f": f}
        elif self.kind == "modules":
            body = {"kind": "modules", "domain": self.domain.value,
                    "modules": [m.to_json() for m in self.parts[0].modules]}
        else:
            body = {"kind": "sum", "domain": self.domain.value,
                    "parts": [_part_json(p) for p in self.parts]}
        return {"schema": "triple-spec/1", **body}

    @classmethod
    def from_json(cls, data: dict) -> "TripleSpec":
        kind = data["kind"]
        if kind == "ZGT":
            return cls.zgt()
        if kind == "ZPT":
            return cls.zpt()
        if kind == "RGT":
            return cls.rgt(TriAddress.from_json(data["excluded"]))
        if kind in ("ST", "STGasket", "STPyramid"):
            f = HoleFunction.from_json(data["f"])
            spec = cls.st(f)
            if kind != "ST" and spec.kind != kind:
                raise ValueError(f"{kind} given a {f.domain.value} hole function")
            return spec
        if kind == "UFM":
            return cls.ufm(HoleFunction.from_json(data["f"]))
        if kind == "modules":
            mods = [CircleModuleSpec.from_json(m) for m in data["modules"]]
            return cls.modules(mods, data.get("domain"))
        if kind == "sum":
            domain = Domain(data.get("domain", "gasket"))
            return cls(domain, tuple(_part_from_json(p) for p in data["parts"]), "sum")
        raise ValueError(f"unknown triple kind {kind!r}")

    def summands(self, max_level: int) -> Iterator[tuple[CircleModuleSpec, int]]:
        """Explicit ``(module, +1 | -1)`` list up to ``max_level``; -1 marks a removal."""
        for p in self.parts:
            if isinstance(p, ZeroPart):
                if p.domain is Domain.GASKET:
                    yield CircleModuleSpec(TriAddress.up(0), ModuleOrientation.REVERSED), 1
                    for h in iter_holes(Domain.GASKET, max_level):
                        yield CircleModuleSpec(h), 1
                else:
                    for k, _tri in outer_faces():
                        yield CircleModuleSpec(("pyramid-outer", k)), 1
                    for n in range(1, max_level + 1):
                        for m in range(1, 4 ** (n - 1) + 1):
                            for k in range(1, 9):
                                yield CircleModuleSpec(PyramidFaceAddress(n, m, k)), 1
            elif isinstance(p, ExcludedPart):
                a = p.address
                orient = ModuleOrientation.REVERSED if a.is_up else ModuleOrientation.POSITIVE
                if a.level <= max_level:
                    yield CircleModuleSpec(a, orient), -1
            elif isinstance(p, HolePart):
                for h in iter_holes(p.f.domain, max_level):
                    v = p.f(h)
                    if v:
                        orient = ModuleOrientation.POSITIVE if v > 0 else ModuleOrientation.REVERSED
                        yield CircleModuleSpec(h, orient, abs(v)), 1
            else:
                for c in p.modules:
                    if c.level <= max_level:
                        yield c, 1


def _part_json(p: Part) -> dict:
    if isinstance(p, ZeroPart):
        return {"kind": "ZGT" if p.domain is Domain.GASKET else "ZPT"}
    if isinstance(p, ExcludedPart):
        return {"kind": "exclude", "address": p.address.to_json()}
    if isinstance(p, HolePart):
        f = p.f.to_json()
        f.pop("schema", None)
        return {"kind": "UFM", "f": f}
    return {"kind": "modules", "modules": [m.to_json() for m in p.modules]}


def _part_from_json(d: dict) -> Part:
    k = d["kind"]
    if k in ("ZGT", "ZPT"):
        return ZeroPart(Domain.GASKET if k == "ZGT" else Domain.PYRAMID)
    if k == "exclude":
        return ExcludedPart(TriAddress.from_json(d["address"]))
    if k == "UFM":
        return HolePart(HoleFunction.from_json(d["f"]))
    if k == "modules":
        return ModulesPart(tuple(CircleModuleSpec.from_json(m) for m in d["modules"]))
    raise ValueError(f"unknown part kind {k!r}")


# -- zeta functions -------------------------------------------------------


def circle_zeta(level: int, s: float) -> float:
    """Zeta function of one circle module: ``2**(1 - l s) (2**s - 1) zeta(s)``."""
    return 2.0 ** (1 - level * s) * (2.0**s - 1) * riemann_zeta(s)


def _weighted(n: int, l: int, s: float) -> float:
    """``n * 2**(-l s)`` without overflowing on huge ``n``."""
    if n == 0:
        return 0.0
    if n < 1e300:
        return n * 2.0 ** (-l * s)
    return math.exp(math.log(n) - l * s * LN2)


def level_series(spec: TripleSpec, s: float) -> float:
    """``sum_l N_l 2**(-l s)`` in closed form (finite head plus geometric tail)."""
    start, form = spec.tail
    x = 2.0**-s
    head = math.fsum(_weighted(spec.level_count(l), l, s) for l in range(start))
    return head + form.geometric_tail(x, start)


def abscissa(spec: TripleSpec) -> float:
    """Abscissa of convergence of the spec's zeta function.

    ``log2`` of the growth rate of ``N_l`` (log 3/log 2 for the gasket,
    2 for the pyramid), and 1 when the level counts grow slower than
    ``2**l``.  Rates above the fractal's own (3 resp. 4) trigger an
    :class:`AbscissaAboveDimension` warning.
    """
    r = spec.rate()
    if r > spec.domain.growth:
        d = math.log(r) / LN2
        warnings.warn(
            f"abscissa above fractal dimension: log(rate)/log 2 = {d:.6f}",
            AbscissaAboveDimension,
            stacklevel=2,
        )
    if r <= 2:
        return 1.0
    if r == 3:
        return math.log(3) / LN2
    if r == 4:
        return 2.0
    return math.log(r) / LN2


def _check_s(spec: TripleSpec, s: float, margin: float = 0.0) -> None:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AbscissaAboveDimension)
        d = abscissa(spec)
    if not s > d + margin:
        raise ValueError(f"s={s} is not above the abscissa {d:.10g}")


def zeta_closed(spec: TripleSpec, s: float) -> float:
    """Closed-form ``Tr |D|**-s``."""
    _check_s(spec, s)
    return 2.0 * (2.0**s - 1.0) * riemann_zeta(s) * level_series(spec, s)


def _half_integer_sum(s: float, J: int) -> float:
    """``sum_{j=0}^{J} (j + 1/2)**-s`` by chunked numpy summation."""
    parts = []
    for lo in range(0, J + 1, _CHUNK):
        j = np.arange(lo, min(J + 1, lo + _CHUNK), dtype=np.float64)
        parts.append(float(np.sum((j + 0.5) ** -s)))
    return math.fsum(parts)


@dataclass(frozen=True)
class DirectZeta:
    value: float
    tail_bound: float
    max_level: int
    J: int
    eps: float

    @property
    def achieved(self) -> bool:
        return self.tail_bound <= self.eps


def zeta_direct(
    spec: TripleSpec, s: float, eps: float = 1e-8, max_level: int | None = None
) -> DirectZeta:
    """Truncated summation of ``Tr |D|**-s`` with a certified bracket.

    Each circle contributes ``2 * 2**(-l s) * sum_j (j + 1/2)**-s``.  The
    ``j`` sum is cut at ``J``; the omitted part is bracketed between the
    integrals over ``[J+1, inf)`` and ``[J, inf)``, the lower one added to
    the value.  Levels beyond ``max_level`` are bounded by the geometric
    series of the termwise-absolute tail form of ``N_l``.  The true value
    lies in ``[value, value + tail_bound]``.
    """
    _check_s(spec, s)
    start, form = spec.tail
    bound_form = form.abs_bound()
    x = 2.0**-s

    def level_tail(L: int) -> float:
        # sum_{l > L} N_l x**l, exact counts up to the tail start
        head = math.fsum(_weighted(spec.level_count(l), l, s) for l in range(L + 1, start))
        return head + (bound_form.geometric_tail(x, max(start, L + 1)) if bound_form else 0.0)

    if max_level is None:
        # one circle contributes 2 (2**s - 1) zeta(s) before the level weight
        circle = 2 * (2.0**s - 1) * riemann_zeta(s)
        max_level = max(start, 0)
        while max_level < _MAX_LEVELS and level_tail(max_level) * circle > eps / 4:
            max_level += 1
    weights = math.fsum(_weighted(spec.level_count(l), l, s) for l in range(max_level + 1))

    # the j-tail gap per circle is at most (J+1/2)**-s; spread eps/2 over 2*weights
    J = 1024
    while J < MAX_J and 2 * weights * (J + 0.5) ** -s > eps / 2:
        J *= 2
    head = _half_integer_sum(s, J)
    lo = (J + 1.5) ** (1 - s) / (s - 1)
    hi = (J + 0.5) ** (1 - s) / (s - 1)
    w_lo = head + lo
    value = 2 * weights * w_lo
    j_gap = 2 * weights * (hi - lo)
    l_gap = 2 * level_tail(max_level) * (head + hi)
    # float slack: pairwise sums of J positive terms plus the level sum
    slack = 1e-14 * value
    return DirectZeta(value - slack, j_gap + l_gap + 2 * slack, max_level, J, eps)


# -- residues -------------------------------------------------------------


@dataclass(frozen=True)
class Residue:
    closed: float | None
    estimate: float
    dimension: float
    steps: tuple[tuple[float, float], ...]


def residue_closed(spec: TripleSpec) -> float | None:
    """``lim_{x->1+} (x - 1) zeta(x d)`` from the exact pole coefficient."""
    start, form = spec.tail
    rate = form.rate()
    if rate > 2:
        coeff = form.terms[rate]
        if coeff <= 0:
            raise PoleOrderError("dominant level term is negative")
        d = math.log(rate) / LN2
        # residue in s of the level series is coeff * rate**start * 2**(-d start) / ln 2 = coeff / ln 2
        res_s = 2 * (2**d - 1) * riemann_zeta(d) * float(coeff) / LN2
        return res_s / d
    if rate == 2:
        raise PoleOrderError("level counts grow like 2**l: double pole at s = 1")
    # the pole comes from zeta_R itself at s = 1
    return 2.0 * level_series(spec, 1.0)


def dixmier_residue(spec: TripleSpec) -> Residue:
    """Exact residue and a first-order Richardson estimate.

    The estimate uses ``phi(h) = h * zeta(d (1 + h))`` at ``h = 2**-j``,
    ``j = 4..12``; each step ``2 phi(h/2) - phi(h)`` removes the linear term
    and the last one is reported.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AbscissaAboveDimension)
        d = abscissa(spec)
    closed = residue_closed(spec)
    phis = [(2.0**-j, 2.0**-j * zeta_closed(spec, d * (1 + 2.0**-j))) for j in range(4, 13)]
    steps = tuple(
        (h2, 2 * p2 - p1) for (h1, p1), (h2, p2) in zip(phis, phis[1:])
    )
    est = steps[-1][1]
    first = steps[0][1]
    if not (math.isfinite(est) and est > 0) or abs(est) > 1e6 * max(abs(first), 1e-300):
        raise PoleOrderError("Richardson sequence does not settle: pole of order != 1")
    return Residue(closed, est, d, steps)


# -- eigenvalue streams ---------------------------------------------------


@dataclass(frozen=True)
class Eigen:
    """One distinct eigenvalue of ``|D|`` with its multiplicity and level."""

    value: Fraction
    multiplicity: int
    level: int

    @property
    def j(self) -> int:
        return int(self.value / Fraction(2) ** self.level - Fraction(1, 2))


def eigenvalue_stream(spec: TripleSpec) -> Iterator[Eigen]:
    """Nondecreasing stream of ``|D|`` eigenvalues.

    Level ``l`` contributes ``2**l (j + 1/2)`` with multiplicity ``2 N_l``.
    Values from different levels never coincide (the odd part of
    ``2 * value`` determines ``j`` and the power of two determines ``l``),
    so a k-way merge on the integer key ``(2j + 1) 2**l`` is exact.
    """
    start, form = spec.tail
    last = None if form else start - 1
    heap: list[tuple[int, int, int]] = []
    nxt = 0

    def push_level(l: int):
        n = spec.level_count(l)
        if n:
            heapq.heappush(heap, (1 << l, l, 0))

    while True:
        while (last is None or nxt <= last) and (not heap or (1 << nxt) <= heap[0][0]):
            push_level(nxt)
            nxt += 1
        if not heap:
            return
        key, l, j = heapq.heappop(heap)
        yield Eigen(Fraction(key, 2), 2 * spec.level_count(l), l)
        heapq.heappush(heap, ((2 * j + 3) << l, l, j + 1))


def eigenvalues(spec: TripleSpec, count: int) -> list[Eigen]:
    """The first ``count`` eigenvalues (with multiplicity) of ``|D|``."""
    if count < 1:
        raise ValueError("count must be positive")
    out = []
    left = count
    for e in eigenvalue_stream(spec):
        take = min(left, e.multiplicity)
        out.append(Eigen(e.value, take, e.level))
        left -= take
        if not left:
            break
    return out


def counting_function(spec: TripleSpec, cutoff: Fraction) -> int:
    """``#{lambda <= cutoff}`` with multiplicity, from the level counts."""
    cutoff = Fraction(cutoff)
    total = 0
    l = 0
    start, form = spec.tail
    while Fraction(2) ** l / 2 <= cutoff:
        n = spec.level_count(l)
        total += n * 2 * math.floor(cutoff / Fraction(2) ** l + Fraction(1, 2))
        l += 1
        if not form and l >= start:
            break
    return total
