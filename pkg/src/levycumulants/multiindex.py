"""Multi-index partitions and decompositions.

A multi-index is a tuple of non-negative ints.  A partition of ``i`` is a
multiset of nonzero columns (multi-indices of the same length) whose
componentwise sum is ``i``; it is stored canonically as strictly increasing
distinct columns with their multiplicities.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

MultiIndex = tuple[int, ...]

DEFAULT_MAX_ORDER = 10


class CapacityError(ValueError):
    """Raised when a requested total order exceeds the configured cap."""


def as_multi_index(values: Sequence[int]) -> MultiIndex:
    idx = tuple(int(v) for v in values)
    if not idx:
        raise ValueError("multi-index must have at least one component")
    if any(v < 0 for v in idx):
        raise ValueError(f"multi-index components must be >= 0, got {idx}")
    if any(int(v) != v for v in values):
        raise ValueError(f"multi-index components must be integers, got {tuple(values)}")
    return idx


def order(i: Sequence[int]) -> int:
    """Total order |i|."""
    return sum(i)


def factorial(i: Sequence[int]) -> int:
    """i! = prod_s i_s!  (exact)."""
    return math.prod(math.factorial(v) for v in i)


def multinomial(i: Sequence[int], parts: Sequence[Sequence[int]]) -> int:
    """i! / prod_k parts_k!  for parts summing componentwise to i."""
    return factorial(i) // math.prod(factorial(p) for p in parts)


def unit(n: int, m: int, k: int = 1) -> MultiIndex:
    return tuple(k if s == m else 0 for s in range(n))


def all_indices(n: int, max_order: int, min_order: int = 1) -> list[MultiIndex]:
    """Every multi-index of length n with min_order <= |i| <= max_order.

    Sorted by total order, then lexicographically.
    """
    out = [
        j
        for j in itertools.product(range(max_order + 1), repeat=n)
        if min_order <= sum(j) <= max_order
    ]
    return sorted(out, key=lambda j: (sum(j), j))


def is_mixed(i: Sequence[int]) -> bool:
    """True when at least two components are nonzero."""
    return sum(1 for v in i if v) >= 2


def _check_cap(i: MultiIndex, max_order: int) -> None:
    if sum(i) > max_order:
        raise CapacityError(f"order |i| = {sum(i)} of {i} exceeds the cap {max_order}")


@dataclass(frozen=True)
class MultiIndexPartition:
    columns: tuple[MultiIndex, ...]
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        if len(self.columns) != len(self.multiplicities):
            raise ValueError("columns and multiplicities must align")
        if any(r <= 0 for r in self.multiplicities):
            raise ValueError("multiplicities must be positive")
        if any(not any(c) for c in self.columns):
            raise ValueError("a partition column cannot be the zero multi-index")
        if any(a >= b for a, b in zip(self.columns, self.columns[1:])):
            raise ValueError("columns must be strictly increasing")

    @property
    def length(self) -> int:
        """l(Λ): number of columns counted with multiplicity."""
        return sum(self.multiplicities)

    @property
    def weight(self) -> int:
        """|Λ|: sum of all entries."""
        return sum(r * sum(c) for c, r in zip(self.columns, self.multiplicities))

    @property
    def column_factorial(self) -> int:
        """Λ! = prod_j (λ_j!)^{r_j}."""
        return math.prod(factorial(c) ** r for c, r in zip(self.columns, self.multiplicities))

    @property
    def multiplicity_factorial(self) -> int:
        """m(Λ)! = prod_j r_j!."""
        return math.prod(math.factorial(r) for r in self.multiplicities)

    @property
    def max_column_order(self) -> int:
        return max((sum(c) for c in self.columns), default=0)

    def target(self, n: int | None = None) -> MultiIndex:
        """Reconstruct the partitioned multi-index sum_j r_j λ_j."""
        if not self.columns:
            if n is None:
                raise ValueError("empty partition needs an explicit dimension")
            return (0,) * n
        width = len(self.columns[0])
        return tuple(
            sum(r * c[s] for c, r in zip(self.columns, self.multiplicities)) for s in range(width)
        )

    def expanded(self) -> tuple[MultiIndex, ...]:
        """Columns repeated by multiplicity, in canonical order."""
        return tuple(c for c, r in zip(self.columns, self.multiplicities) for _ in range(r))

    def associated(self, g) -> float:
        """g_Λ = prod_j g(λ_j)^{r_j}; 1 for the empty partition."""
        out = 1.0
        for c, r in zip(self.columns, self.multiplicities):
            out *= g(c) ** r
        return out

    def __str__(self) -> str:
        if not self.columns:
            return "[]"
        parts = []
        for c, r in zip(self.columns, self.multiplicities):
            col = "(" + ",".join(map(str, c)) + ")"
            parts.append(col if r == 1 else f"{col}^{r}")
        return "[" + " ".join(parts) + "]"


def _columns_between(rem: MultiIndex, lower: MultiIndex | None) -> Iterator[MultiIndex]:
    # nonzero v <= rem componentwise, v >= lower lexicographically
    for v in itertools.product(*(range(x + 1) for x in rem)):
        if not any(v):
            continue
        if lower is not None and v < lower:
            continue
        yield v


def _descend(rem: MultiIndex, lower: MultiIndex | None, max_col: int | None):
    if not any(rem):
        yield ()
        return
    for col in _columns_between(rem, lower):
        if max_col is not None and sum(col) > max_col:
            continue
        nxt = tuple(x - y for x, y in zip(rem, col))
        for tail in _descend(nxt, col, max_col):
            yield (col,) + tail


def _group(cols: tuple[MultiIndex, ...]) -> MultiIndexPartition:
    distinct: list[MultiIndex] = []
    mult: list[int] = []
    for c in cols:
        if distinct and distinct[-1] == c:
            mult[-1] += 1
        else:
            distinct.append(c)
            mult.append(1)
    return MultiIndexPartition(tuple(distinct), tuple(mult))


@lru_cache(maxsize=None)
def _partitions(i: MultiIndex, max_col: int | None) -> tuple[MultiIndexPartition, ...]:
    return tuple(_group(cols) for cols in _descend(i, None, max_col))


def enumerate_partitions(
    i: Sequence[int], max_order: int = DEFAULT_MAX_ORDER
) -> tuple[MultiIndexPartition, ...]:
    """All partitions of ``i``, each exactly once, in a fixed order.

    The zero multi-index has exactly one partition, the empty one.
    """
    idx = as_multi_index(i)
    _check_cap(idx, max_order)
    return _partitions(idx, None)


def enumerate_p2_partitions(
    i: Sequence[int], max_order: int = DEFAULT_MAX_ORDER
) -> tuple[MultiIndexPartition, ...]:
    """Partitions of ``i`` whose columns all have total order <= 2."""
    idx = as_multi_index(i)
    _check_cap(idx, max_order)
    return _partitions(idx, 2)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _decompositions(i: MultiIndex, d: int) -> tuple[tuple[MultiIndex, ...], ...]:
    per_row = [tuple(_compositions(v, d)) for v in i]
    out = []
    for choice in itertools.product(*per_row):
        out.append(tuple(tuple(row[k] for row in choice) for k in range(d)))
    return tuple(out)


def enumerate_decompositions(
    i: Sequence[int], d: int, max_order: int = DEFAULT_MAX_ORDER
) -> tuple[tuple[MultiIndex, ...], ...]:
    """Ordered d-tuples (s_1, ..., s_d) of multi-indices with s_1 + ... + s_d = i."""
    if d < 1:
        raise ValueError(f"number of parts must be >= 1, got {d}")
    idx = as_multi_index(i)
    _check_cap(idx, max_order)
    return _decompositions(idx, d)
