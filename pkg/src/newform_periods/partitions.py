"""Partitions and dominant weights, as plain tuples of ints."""

from __future__ import annotations

from typing import Iterator, Sequence

from .errors import NotDominant

Partition = tuple
DominantWeight = tuple


def _bounded(r: int, n: int, cap: int) -> Iterator[tuple]:
    # partitions of exactly n into at most r parts, each <= cap,
    # lexicographically descending
    if n == 0:
        yield ()
        return
    if r == 0:
        return
    for first in range(min(n, cap), 0, -1):
        if first * r < n:
            break
        for rest in _bounded(r - 1, n - first, first):
            yield (first,) + rest


def partitions_of(n: int, max_parts: int) -> list[Partition]:
    """Partitions of exactly ``n`` with at most ``max_parts`` parts."""
    return list(_bounded(max_parts, n, n))


def enumerate_dominant(r: int, max_weight: int) -> list[Partition]:
    """All partitions with at most ``r`` parts and weight at most ``max_weight``.

    Graded by weight; within one weight, lexicographically descending.
    """
    if r < 0 or max_weight < 0:
        raise ValueError("length and weight must be nonnegative")
    out: list[Partition] = []
    for n in range(max_weight + 1):
        out.extend(_bounded(r, n, n))
    return out


def trim(lam: Sequence[int]) -> Partition:
    lam = list(lam)
    while lam and lam[-1] == 0:
        lam.pop()
    return tuple(lam)


def pad(lam: Sequence[int], r: int) -> tuple:
    if len(lam) > r:
        raise ValueError(f"{tuple(lam)} has more than {r} parts")
    return tuple(lam) + (0,) * (r - len(lam))


def weight(lam: Sequence[int]) -> int:
    return sum(lam)


def is_dominant(lam: Sequence[int]) -> bool:
    return all(lam[i] >= lam[i + 1] for i in range(len(lam) - 1))


def conjugate(lam: Sequence[int]) -> Partition:
    lam = trim(lam)
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0]))


def is_even_rows(lam: Sequence[int]) -> bool:
    return all(p % 2 == 0 for p in lam)


def double_columns(mu: Sequence[int]) -> Partition:
    """``(m1, m1, m2, m2, ...)``: every column of the result has even height."""
    return tuple(p for m in mu for p in (m, m))


def double_rows(mu: Sequence[int]) -> Partition:
    return tuple(2 * m for m in mu)


def interleave(b: Sequence[int], bp: Sequence[int]) -> DominantWeight:
    """``(b1, b'1, b2, b'2, ...)``, raising :class:`NotDominant` unless the
    result is weakly decreasing."""
    if len(b) - len(bp) not in (0, 1):
        raise ValueError(
            f"interleave needs len(b) - len(b') in (0, 1), got {len(b)} and {len(bp)}"
        )
    out = []
    for i, x in enumerate(b):
        out.append(x)
        if i < len(bp):
            out.append(bp[i])
    out = tuple(out)
    if not is_dominant(out):
        raise NotDominant(f"{out} is not weakly decreasing")
    return out
