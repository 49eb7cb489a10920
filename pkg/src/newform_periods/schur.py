"""Schur polynomials evaluated exactly at a point.

Three independent algorithms are provided so they can check one another:
the bialternant quotient, the Jacobi-Trudi determinant in complete
homogeneous sums, and a brute-force sum over semistandard tableaux.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import RepeatedParameter, TooLarge
from .partitions import trim

__all__ = [
    "determinant",
    "complete_homogeneous",
    "schur_alternant",
    "schur_jacobi_trudi",
    "schur_ssyt_oracle",
    "schur",
    "SchurEvaluator",
]


def determinant(m: Sequence[Sequence]):
    """Division-free determinant by Laplace expansion along rows.

    Subset dynamic programming over columns, O(2^k k) ring operations, which
    is cheap for the small sizes used here and never needs an inverse.
    """
    k = len(m)
    if k == 0:
        return 1
    dp = {0: 1}
    for row in range(k):
        nxt = {}
        for mask, val in dp.items():
            if val == 0:
                continue
            for j in range(k):
                bit = 1 << j
                if mask & bit:
                    continue
                entry = m[row][j]
                if entry == 0:
                    continue
                # columns already used to the right of j flip the sign
                above = bin(mask >> (j + 1)).count("1")
                term = entry * val
                if above & 1:
                    term = -term
                key = mask | bit
                nxt[key] = nxt.get(key, 0) + term
        dp = nxt
    return dp.get((1 << k) - 1, 0)


def complete_homogeneous(x: Sequence, kmax: int) -> list:
    """``[h_0(x), ..., h_kmax(x)]`` via ``h_k(x, y) = h_k(x) + y h_{k-1}(x, y)``."""
    h = [1] + [0] * kmax
    for xi in x:
        for k in range(1, kmax + 1):
            h[k] = h[k] + xi * h[k - 1]
    return h


def _normalize(lam: Sequence[int], r: int):
    """Pad or trim ``lam`` to length ``r``; returns (weight, shift) with the
    Laurent shift split off, or None if s_lam vanishes identically."""
    lam = tuple(lam)
    if len(lam) > r:
        if any(p != 0 for p in lam[r:]):
            if all(p >= 0 for p in lam):
                return None
            raise ValueError(f"weight {lam} is longer than the {r} variables")
        lam = lam[:r]
    lam = lam + (0,) * (r - len(lam))
    if any(lam[i] < lam[i + 1] for i in range(r - 1)):
        raise ValueError(f"{lam} is not weakly decreasing")
    shift = lam[-1] if r and lam[-1] < 0 else 0
    return tuple(p - shift for p in lam), shift


def _product(x: Sequence):
    p = 1
    for xi in x:
        p = p * xi
    return p


def _shifted(value, x: Sequence, shift: int):
    if shift == 0:
        return value
    return value * _product(x) ** shift


def schur_alternant(lam: Sequence[int], x: Sequence):
    """``det(x_i^(lam_j + r - j)) / det(x_i^(r - j))``."""
    r = len(x)
    norm = _normalize(lam, r)
    if norm is None:
        return 0
    mu, shift = norm
    for i in range(r):
        for j in range(i + 1, r):
            if x[i] == x[j]:
                raise RepeatedParameter(
                    f"alternant needs distinct parameters; x[{i}] = x[{j}] = {x[i]}"
                )
    num = determinant([[xi ** (mu[j] + r - 1 - j) for j in range(r)] for xi in x])
    den = 1
    for i in range(r):
        for j in range(i + 1, r):
            den = den * (x[i] - x[j])
    if isinstance(num, int) and isinstance(den, int):
        val = Fraction(num, den)
    else:
        val = num / den
    return _shifted(val, x, shift)


def _jt(mu: tuple, h: Sequence):
    mu = trim(mu)
    k = len(mu)

    def entry(i, j):
        idx = mu[i] - i + j
        if idx < 0:
            return 0
        return h[idx]

    return determinant([[entry(i, j) for j in range(k)] for i in range(k)])


def schur_jacobi_trudi(lam: Sequence[int], x: Sequence):
    """``det(h_(lam_i - i + j))``; never divides, so parameters may repeat."""
    r = len(x)
    norm = _normalize(lam, r)
    if norm is None:
        return 0
    mu, shift = norm
    top = (mu[0] + r) if mu else 0
    h = complete_homogeneous(x, top)
    return _shifted(_jt(mu, h), x, shift)


def _ssyt(shape: tuple, r: int):
    """Yield each semistandard tableau as a flat list of entries (row major)."""
    cells = [(i, j) for i, row in enumerate(shape) for j in range(row)]
    filling: dict = {}

    def rec(idx):
        if idx == len(cells):
            yield [filling[c] for c in cells]
            return
        i, j = cells[idx]
        lo = 1
        if j > 0:
            lo = max(lo, filling[(i, j - 1)])
        if i > 0:
            lo = max(lo, filling[(i - 1, j)] + 1)
        for v in range(lo, r + 1):
            filling[(i, j)] = v
            yield from rec(idx + 1)
        filling.pop((i, j), None)

    yield from rec(0)


def schur_ssyt_oracle(lam: Sequence[int], x: Sequence):
    """Sum of ``x^T`` over semistandard tableaux of shape ``lam``."""
    r = len(x)
    if any(p < 0 for p in lam):
        raise ValueError("the tableau oracle needs a partition")
    shape = trim(lam)
    if sum(shape) > 8 or r > 4:
        raise TooLarge(f"tableau oracle limited to |lam| <= 8, r <= 4 (got {sum(shape)}, {r})")
    total = 0
    for tab in _ssyt(shape, r):
        term = 1
        for v in tab:
            term = term * x[v - 1]
        total = total + term
    return total


def schur(lam: Sequence[int], x: Sequence):
    """``s_lam(x)`` by Jacobi-Trudi, with the Laurent shift for negative parts.

    A partition with more nonzero parts than variables gives 0.
    """
    return schur_jacobi_trudi(lam, x)


class SchurEvaluator:
    """Memoized ``s_lam`` at a fixed point.

    The cache lives on the instance, so sharing is explicit; create one per
    task rather than one per process.
    """

    def __init__(self, x: Sequence):
        self.x = tuple(x)
        self._h = complete_homogeneous(self.x, 0)
        self._cache: dict = {}

    def _hs(self, top: int):
        if top >= len(self._h):
            self._h = complete_homogeneous(self.x, max(top, 2 * len(self._h)))
        return self._h

    def __call__(self, lam: Sequence[int]):
        key = tuple(lam)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        r = len(self.x)
        norm = _normalize(key, r)
        if norm is None:
            val = 0
        else:
            mu, shift = norm
            top = (mu[0] + r) if mu else 0
            val = _shifted(_jt(mu, self._hs(top)), self.x, shift)
        self._cache[key] = val
        return val
