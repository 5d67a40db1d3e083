"""Partial-sum approximations of Dixmier-trace measures localized to gasket cells.

The operator is ``|D|**-d`` with ``d`` the abscissa of the triple; a level-``l``
circle contributes the values ``2**(-l d) (j + 1/2)**-d`` twice for each
``j >= 0``.  Localizing to a region keeps only the circles on holes inside it,
and a weight attaches a nonnegative coefficient to disjoint regions.  The
partial trace ``sigma_N`` is the sum of the ``N`` largest values.

``sigma_N`` is computed without materializing the spectrum: a threshold
``tau`` is located by bisection on the counting function, every circle group
contributes a prefix of a harmonic-type sum, and only the few values close
to ``tau`` are sorted explicitly.
"""
from __future__ import annotations

import heapq
import math
import os
import warnings
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .holes import Domain, HoleFunction, Region, example_313 as _example_313_functions
from .spectrum import (
    AbscissaAboveDimension,
    ExcludedPart,
    HolePart,
    ModulesPart,
    TripleSpec,
    ZeroPart,
    abscissa,
)
from .topology import Orientation, TriAddress, enumerate_up

DEFAULT_MAX_N = 10**7


def max_trace_n() -> int:
    return int(os.environ.get("SIERPINSKI_MAX_TRACE_N", DEFAULT_MAX_N))


class NotApplicable(ValueError):
    """The requested check has no theorem behind it for this triple."""


@dataclass(frozen=True)
class LocalRegion:
    """``"all"``, ``"holes"``, a cell ``F_{n,j}``, or the holes of level ``<= n``."""

    kind: str
    path: tuple[int, ...] = ()
    n: int = 0

    @classmethod
    def all(cls) -> "LocalRegion":
        return cls("all")

    @classmethod
    def holes(cls) -> "LocalRegion":
        return cls("holes")

    @classmethod
    def cell(cls, up: TriAddress | Sequence[int]) -> "LocalRegion":
        path = tuple(up.path if isinstance(up, TriAddress) else up)
        return cls("cell", path, len(path))

    @classmethod
    def residual(cls, n: int) -> "LocalRegion":
        return cls("residual", (), n)

    @classmethod
    def parse(cls, text: str) -> "LocalRegion":
        """``all``, ``holes``, ``residual n`` or ``F n j`` (j from 1)."""
        parts = text.split()
        if parts == ["all"]:
            return cls.all()
        if parts == ["holes"]:
            return cls.holes()
        if len(parts) == 2 and parts[0] == "residual":
            return cls.residual(int(parts[1]))
        if len(parts) == 3 and parts[0] == "F":
            n, j = int(parts[1]), int(parts[2])
            return cls.cell(TriAddress.from_index(Orientation.UP, n, j))
        raise ValueError(f"cannot parse region {text!r}")

    def __str__(self) -> str:
        if self.kind == "cell":
            return str(TriAddress.up(self.n, self.path)).replace("Delta", "F")
        if self.kind == "residual":
            return f"residual {self.n}"
        return self.kind

    def holds_hole(self, level: int, path: Sequence[int]) -> bool:
        if self.kind in ("all", "holes"):
            return True
        if self.kind == "residual":
            return level <= self.n
        return level > self.n and tuple(path[: self.n]) == self.path

    def disjoint(self, other: "LocalRegion") -> bool:
        if self.kind == "cell" and other.kind == "cell":
            k = min(self.n, other.n)
            return self.path[:k] != other.path[:k]
        if {self.kind, other.kind} == {"cell", "residual"}:
            c, r = (self, other) if self.kind == "cell" else (other, self)
            return c.n >= r.n
        return False


def localized_multiplicity(spec: TripleSpec, region: LocalRegion, m: int) -> int:
    """Number of circles of level ``m`` of ``spec`` localized in ``region``.

    Circles on ``Delta_{0,1}`` (and on other up triangles) count only for
    ``"all"``.
    """
    if spec.domain is Domain.PYRAMID and region.kind != "all":
        raise NotApplicable("pyramid spectra are only traced globally")
    if region.kind == "all":
        return spec.level_count(m)
    total = 0
    for p in spec.parts:
        if isinstance(p, ZeroPart):
            if m >= 1:
                total += _zero_holes(region, m)
        elif isinstance(p, ExcludedPart):
            a = p.address
            if not a.is_up and a.level == m and region.holds_hole(a.level, a.path):
                total -= 1
        elif isinstance(p, HolePart):
            if m >= 1:
                total += _restricted(p.f, region).level_aggregate(m).abs_sum
        elif isinstance(p, ModulesPart):
            for c in p.modules:
                src = c.source
                if isinstance(src, TriAddress) and not src.is_up and src.level == m:
                    if region.holds_hole(src.level, src.path):
                        total += c.multiplicity
    return total


def _zero_holes(region: LocalRegion, m: int) -> int:
    if region.kind == "holes":
        return 3 ** (m - 1)
    if region.kind == "residual":
        return 3 ** (m - 1) if m <= region.n else 0
    return 3 ** (m - 1 - region.n) if m > region.n else 0


def _restricted(f: HoleFunction, region: LocalRegion) -> HoleFunction:
    if region.kind == "holes":
        return f
    if region.kind == "residual":
        return f.restrict(Region(max_level=region.n))
    return f.restrict(Region.cell(region.path))


Weights = Union[LocalRegion, str, Sequence[tuple[Union[LocalRegion, str], float]]]


def _normalize_weights(weights: Weights) -> list[tuple[LocalRegion, float]]:
    if isinstance(weights, (LocalRegion, str)):
        weights = [(weights, 1.0)]
    out = []
    for reg, c in weights:
        reg = LocalRegion.parse(reg) if isinstance(reg, str) else reg
        if c < 0:
            raise ValueError("weights must be nonnegative")
        out.append((reg, float(c)))
    for i, (r1, _) in enumerate(out):
        for r2, _ in out[i + 1 :]:
            if not r1.disjoint(r2):
                raise ValueError(f"weighted regions {r1} and {r2} overlap")
    return out


@dataclass(eq=False)
class LocalizedSpectrum:
    """Weighted localized spectrum of ``|D|**-d`` as circle groups per level."""

    spec: TripleSpec
    weights: list[tuple[LocalRegion, float]]
    d: float
    _mult: dict = field(default_factory=dict, repr=False)
    _harmonic: np.ndarray = field(default_factory=lambda: np.zeros(1), repr=False)

    @classmethod
    def build(cls, spec: TripleSpec, weights: Weights = "all") -> "LocalizedSpectrum":
        with warnings.catch_warnings():
            warnings.simplefilter("error", AbscissaAboveDimension)
            try:
                d = abscissa(spec)
            except AbscissaAboveDimension as exc:
                raise NotApplicable(f"spec is not summable at the fractal dimension: {exc}") from None
        return cls(spec, _normalize_weights(weights), d)

    def multiplicity(self, region: LocalRegion, l: int) -> int:
        key = (region, l)
        if key not in self._mult:
            self._mult[key] = localized_multiplicity(self.spec, region, l)
        return self._mult[key]

    def _top_level(self) -> int | None:
        start, form = self.spec.tail
        return None if form else start - 1

    def groups(self, tau: float):
        """``(scale, copies)`` for every level/region whose largest value is ``>= tau``."""
        top = self._top_level()
        cmax = max((c for _r, c in self.weights), default=0.0)
        if cmax == 0:
            return
        l = 0
        while top is None or l <= top:
            lead = 2.0 ** (-l * self.d)
            if cmax * lead * 2.0**self.d < tau:
                break
            for reg, c in self.weights:
                if c == 0:
                    continue
                mult = self.multiplicity(reg, l)
                if mult:
                    yield c * lead, 2 * mult
            l += 1

    def value(self, scale: float, j: int) -> float:
        return scale * (j + 0.5) ** -self.d

    def below(self, scale: float, tau: float) -> int:
        """``#{j >= 0 : value(scale, j) >= tau}``."""
        J = max(0, math.floor((scale / tau) ** (1.0 / self.d) - 0.5) + 1)
        while self.value(scale, J) >= tau:
            J += 1
        while J > 0 and self.value(scale, J - 1) < tau:
            J -= 1
        return J

    def count(self, tau: float) -> int:
        return sum(copies * self.below(scale, tau) for scale, copies in self.groups(tau))

    def harmonic(self, J: int) -> float:
        """``sum_{j < J} (j + 1/2)**-d``."""
        if J >= len(self._harmonic):
            size = max(J + 1, 2 * len(self._harmonic))
            j = np.arange(size - 1, dtype=np.float64)
            self._harmonic = np.concatenate(([0.0], np.cumsum((j + 0.5) ** -self.d)))
        return float(self._harmonic[J])


@dataclass(frozen=True)
class PartialSumTrace:
    N: int
    sigma_N: float
    estimate: float

    def to_row(self) -> dict:
        return {"N": self.N, "sigma_N": self.sigma_N, "sigma_over_logN": self.estimate}


def _sigma(ls: LocalizedSpectrum, N: int) -> float:
    # every value is at most cmax * 2**d (level 0, j = 0)
    hi = 2.0 * max((c for _r, c in ls.weights), default=0.0) * 2.0**ls.d
    if hi == 0:
        return 0.0
    lo = hi
    while True:
        lo /= 2.0
        if ls.count(lo) >= N:
            break
        if lo < 1e-300:
            raise ValueError("spectrum has fewer than N eigenvalues")
    # invariant: count(hi) < N <= count(lo)
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if not lo < mid < hi:
            break
        if ls.count(mid) >= N:
            lo = mid
        else:
            hi = mid
    total = 0.0
    taken = 0
    candidates = []
    for scale, copies in ls.groups(lo):
        j_hi = ls.below(scale, hi)
        j_lo = ls.below(scale, lo)
        total += copies * scale * ls.harmonic(j_hi)
        taken += copies * j_hi
        for j in range(j_hi, j_lo):
            candidates.append((ls.value(scale, j), copies))
    candidates.sort(reverse=True)
    for v, copies in candidates:
        k = min(copies, N - taken)
        total += k * v
        taken += k
        if taken == N:
            break
    return total


def partial_trace(spec: TripleSpec, weights: Weights = "all", N: int = 10**5) -> PartialSumTrace:
    """``sigma_N`` of the weighted localized spectrum and ``sigma_N / ln N``."""
    if N < 2:
        raise ValueError("N must be at least 2")
    if N > max_trace_n():
        raise ValueError(f"N={N} exceeds the trace cap {max_trace_n()}")
    ls = spec if isinstance(spec, LocalizedSpectrum) else LocalizedSpectrum.build(spec, weights)
    s = _sigma(ls, N)
    return PartialSumTrace(N, s, s / math.log(N))


def partial_trace_curve(spec: TripleSpec, weights: Weights, N: int) -> list[PartialSumTrace]:
    """Partial traces at ``N = 2, 4, 8, ...`` up to ``N`` (and ``N`` itself)."""
    ls = LocalizedSpectrum.build(spec, weights)
    Ns = [1 << k for k in range(1, N.bit_length()) if 1 << k <= N]
    if not Ns or Ns[-1] != N:
        Ns.append(N)
    return [partial_trace(ls, N=n) for n in Ns]


def merged_values(spec: TripleSpec, weights: Weights, count: int) -> list[float]:
    """The ``count`` largest values by explicit k-way merge (small-N oracle)."""
    ls = LocalizedSpectrum.build(spec, weights)
    heap = []
    for scale, copies in ls.groups(1e-12):
        heapq.heappush(heap, (-ls.value(scale, 0), scale, 0, copies))
    out: list[float] = []
    while heap and len(out) < count:
        negv, scale, j, copies = heapq.heappop(heap)
        out.extend([-negv] * min(copies, count - len(out)))
        heapq.heappush(heap, (-ls.value(scale, j + 1), scale, j + 1, copies))
    return out


# -- checks ---------------------------------------------------------------


def _hole_function(spec: TripleSpec) -> HoleFunction | None:
    fs = [p.f for p in spec.parts if isinstance(p, HolePart)]
    if not fs:
        return None
    f = fs[0]
    for g in fs[1:]:
        f = f + g
    return f


def scaling_check(spec: TripleSpec, n: int, N: int) -> dict:
    """Ratios of each level-``n`` cell's partial trace to that of all holes.

    The whole is the spectrum on all holes; the outer triangle's circle has
    a finite trace of ``|D|**-d`` and does not change the limit.
    """
    if spec.domain is not Domain.GASKET:
        raise NotApplicable("the cell scaling check is for the gasket")
    f = _hole_function(spec)
    if f is not None and not f.is_boundedly_almost_invariant():
        raise NotApplicable("hole function is not boundedly almost invariant")
    if any(isinstance(p, (ModulesPart, ExcludedPart)) for p in spec.parts):
        raise NotApplicable("scaling check expects ZGT or ST(f)")
    whole = partial_trace(spec, LocalRegion.holes(), N).sigma_N
    expected = 1.0 / 3**n
    cells = []
    for up in enumerate_up(n):
        s = partial_trace(spec, LocalRegion.cell(up), N).sigma_N
        cells.append({"cell": f"F_{{{n},{up.index}}}", "ratio": s / whole})
    resid = partial_trace(spec, LocalRegion.residual(n), N).sigma_N
    total = partial_trace(spec, LocalRegion.all(), N).sigma_N
    dev = max(abs(c["ratio"] - expected) / expected for c in cells)
    return {
        "schema": "scaling-check/1",
        "n": n,
        "N": N,
        "expected": expected,
        "cells": cells,
        "max_relative_deviation": dev,
        "residual_ratio": resid / whole,
        "holes_sigma_N": whole,
        "all_sigma_N": total,
    }


def example_313_spec() -> TripleSpec:
    _f, _g, h = _example_313_functions()
    return TripleSpec.st(h)


def example_313(N: int) -> dict:
    """Cell ratios ``F_{1,1}`` and ``F_{1,2}`` for ``ST(h)`` against all holes."""
    spec = example_313_spec()
    whole = partial_trace(spec, LocalRegion.holes(), N).sigma_N
    r11 = partial_trace(spec, LocalRegion.cell([0]), N).sigma_N / whole
    r12 = partial_trace(spec, LocalRegion.cell([1]), N).sigma_N / whole
    zgt = TripleSpec.zgt()
    zwhole = partial_trace(zgt, LocalRegion.holes(), N).sigma_N
    c11 = partial_trace(zgt, LocalRegion.cell([0]), N).sigma_N / zwhole
    c12 = partial_trace(zgt, LocalRegion.cell([1]), N).sigma_N / zwhole
    f_part = _hole_function(spec)
    return {
        "schema": "example-313/1",
        "N": N,
        "ratio_F11": r11,
        "ratio_F12": r12,
        "gap": r12 - r11,
        "control_zgt": {"ratio_F11": c11, "ratio_F12": c12},
        "f_part_multiplicity_F11": [
            _restricted(f_part, LocalRegion.cell([0])).level_aggregate(m).abs_sum for m in range(1, 8)
        ],
    }
