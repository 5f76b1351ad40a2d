"""Integer partitions of d as zero-padded d-vectors, and the dominance order."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .kernels import dominance_matrix

Partition = tuple[int, ...]

MAX_D = 64
# full comparability table is materialized up to this d
TABLE_MAX_D = 20


class BVector(NamedTuple):
    counts: tuple[int, ...]
    q: int


def _check_d(d: int) -> None:
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise ValueError(f"d must be an integer >= 2, got {d!r}")
    if d > MAX_D:
        raise ValueError(f"d={d} exceeds the supported ceiling {MAX_D}")


def _check_q(d: int, q: int) -> None:
    if q <= d:
        raise ValueError(f"q must exceed d (got d={d}, q={q})")


def is_partition(parts, d: int | None = None) -> bool:
    parts = tuple(parts)
    if d is None:
        d = len(parts)
    return (
        len(parts) == d
        and all(x >= 0 for x in parts)
        and all(a >= b for a, b in zip(parts, parts[1:]))
        and sum(parts) == d
    )


def as_partition(parts) -> Partition:
    """Normalize to a padded d-vector; accepts short forms like ``(4, 1, 1)``."""
    parts = tuple(int(x) for x in parts)
    d = sum(parts)
    if len(parts) > d:
        if any(parts[d:]):
            raise ValueError(f"not a partition: {parts}")
        parts = parts[:d]
    parts = parts + (0,) * (d - len(parts))
    if not is_partition(parts, d):
        raise ValueError(f"not a partition: {parts}")
    return parts


@lru_cache(maxsize=None)
def _enumerate(d: int) -> tuple[Partition, ...]:
    out: list[Partition] = []

    def rec(prefix: list[int], remaining: int, cap: int) -> None:
        if remaining == 0:
            out.append(tuple(prefix) + (0,) * (d - len(prefix)))
            return
        for part in range(min(cap, remaining), 0, -1):
            prefix.append(part)
            rec(prefix, remaining - part, part)
            prefix.pop()

    rec([], d, d)
    return tuple(out)


def enumerate_partitions(d: int) -> list[Partition]:
    """All partitions of ``d`` in decreasing lexicographic order.

    ``(d, 0, ..., 0)`` comes first and ``(1, ..., 1)`` last.
    """
    _check_d(d)
    return list(_enumerate(d))


def dominance_leq(a: Partition, b: Partition) -> bool:
    """True iff every prefix sum of ``a`` is at most that of ``b``."""
    if len(a) != len(b) or sum(a) != sum(b):
        raise ValueError(f"partitions of different integers: {a} vs {b}")
    sa = sb = 0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa > sb:
            return False
    return True


def b_vector(ell: Partition, q: int) -> BVector:
    d = len(ell)
    _check_q(d, q)
    counts = [0] * (d + 1)
    for part in ell:
        counts[part] += 1
    counts[0] += q - d
    return BVector(tuple(counts), q)


def multinomial_d(ell: Partition) -> int:
    out = math.factorial(len(ell))
    for part in ell:
        out //= math.factorial(part)
    return out


def multinomial_q(ell: Partition, q: int) -> int:
    """``q! / prod_j b_j!`` as a falling factorial over the positive-part counts."""
    d = len(ell)
    _check_q(d, q)
    k = rho(ell)
    num = 1
    for i in range(k):
        num *= q - i
    counts = b_vector(ell, q).counts
    den = 1
    for c in counts[1:]:
        den *= math.factorial(c)
    return num // den


def ell_factorial(ell: Partition) -> int:
    out = 1
    for part in ell:
        out *= math.factorial(part)
    return out


def rho(ell: Partition) -> int:
    return sum(1 for part in ell if part > 0)


def partition_count(d: int) -> int:
    """p(d) via Euler's pentagonal-number recurrence."""
    p = [1] + [0] * d
    for n in range(1, d + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p[d]


def hardy_ramanujan_estimate(d: int) -> float:
    if d < 2:
        raise ValueError("d must be >= 2")
    return math.exp(math.pi * math.sqrt(2 * d / 3)) / (4 * d * math.sqrt(3))


class PartitionPoset:
    """Partitions of ``d`` under dominance, indexed in canonical order.

    Comparability is a dense boolean table for ``d <= TABLE_MAX_D`` and a
    memoized on-demand check above that.
    """

    def __init__(self, d: int):
        _check_d(d)
        self.d = d
        self.elements: tuple[Partition, ...] = _enumerate(d)
        self.index = {ell: i for i, ell in enumerate(self.elements)}
        self._table: np.ndarray | None = None
        self._memo: dict[tuple[int, int], bool] = {}
        if d <= TABLE_MAX_D:
            self._table = dominance_matrix(np.array(self.elements, dtype=np.int64))
            self._table.setflags(write=False)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def top(self) -> int:
        return 0

    @property
    def bottom(self) -> int:
        return len(self.elements) - 1

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            self._table = dominance_matrix(np.array(self.elements, dtype=np.int64))
            self._table.setflags(write=False)
        return self._table

    def leq(self, i: int, j: int) -> bool:
        if self._table is not None:
            return bool(self._table[i, j])
        key = (i, j)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = dominance_leq(self.elements[i], self.elements[j])
        return hit

    def up_set(self, i: int) -> np.ndarray:
        """Indices ``j`` with ``elements[i] <= elements[j]``."""
        return np.flatnonzero(self.table[i])

    def covers(self) -> list[list[int]]:
        """Hasse diagram: ``covers()[i]`` lists the elements covering ``i``."""
        t = self.table
        m = len(self.elements)
        strict = t & ~np.eye(m, dtype=bool)
        # j covers i iff i < j and no k with i < k < j
        between = (strict.astype(np.int32) @ strict.astype(np.int32)) > 0
        cover = strict & ~between
        return [list(np.flatnonzero(cover[i])) for i in range(m)]


@lru_cache(maxsize=32)
def poset(d: int) -> PartitionPoset:
    return PartitionPoset(d)
