"""Riemann zeta on the real axis via Euler-Maclaurin with a certified remainder."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

#: Bernoulli terms kept in the expansion
N_BERNOULLI = 8


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with B_1 = -1/2 (Akiyama-Tanigawa)."""
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0] if n != 1 else Fraction(-1, 2)


def _em_term(s: float, k: int, N: int) -> float:
    """``B_2k/(2k)! * s(s+1)...(s+2k-2) * N**(-s-2k+1)``."""
    rising = 1.0
    for i in range(2 * k - 1):
        rising *= s + i
    return float(bernoulli(2 * k)) / math.factorial(2 * k) * rising * N ** (-s - 2 * k + 1)


def riemann_zeta_bound(s: float, tol: float = 1e-14) -> tuple[float, float]:
    """Return ``(zeta(s), bound)`` with ``|zeta(s) - value| <= bound``.

    The truncation bound is twice the first omitted Euler-Maclaurin term,
    which dominates the remainder for real ``s > 1``; a rounding allowance
    for the float evaluation is added on top.
    """
    s = float(s)
    if not s > 1.0:
        raise ValueError(f"riemann_zeta needs s > 1, got {s}")
    N = 8
    while 2 * abs(_em_term(s, N_BERNOULLI + 1, N)) > tol:
        N *= 2
    head = math.fsum(n ** -s for n in range(1, N))
    tail = N ** (1 - s) / (s - 1) + 0.5 * N ** -s
    corr = math.fsum(_em_term(s, k, N) for k in range(1, N_BERNOULLI + 1))
    value = head + tail + corr
    remainder = 2 * abs(_em_term(s, N_BERNOULLI + 1, N))
    rounding = 4 * N * 2.0**-53 * value
    return value, remainder + rounding


def riemann_zeta(s: float) -> float:
    return riemann_zeta_bound(s)[0]
