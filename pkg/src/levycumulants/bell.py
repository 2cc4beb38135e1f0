"""Joint cumulants of Y = A Z(T(1)) through generalized Bell polynomials.

c_i(Y) is i! times a sum, over decompositions s_1 + ... + s_d = i and
partitions Λ_k of each s_k, of c_{(l(Λ_1), ..., l(Λ_d))}(T) times
prod_k g_{k,Λ_k} / (Λ_k! m(Λ_k)!).  A zero part s_k contributes the empty
partition (factor 1, l = 0).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .multiindex import (
    DEFAULT_MAX_ORDER,
    CapacityError,
    MultiIndex,
    MultiIndexPartition,
    as_multi_index,
    enumerate_decompositions,
    enumerate_p2_partitions,
    enumerate_partitions,
    multinomial,
)
from .providers import (
    JointCumulantProvider,
    UnivariateCumulants,
    brownian_inner_coefficient,
    generic_inner_coefficient,
)


@dataclass(frozen=True)
class SubordinatedModel:
    """Y(t) = A Z(T(t)) with independent base components Z_k and subordinator T."""

    A: tuple[tuple[float, ...], ...]
    bases: tuple[UnivariateCumulants, ...]
    subordinator: JointCumulantProvider

    def __init__(self, A, bases: Sequence[UnivariateCumulants], subordinator: JointCumulantProvider):
        rows = tuple(tuple(float(x) for x in row) for row in A)
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("A must be a non-empty rectangular matrix")
        d = len(rows[0])
        if len(bases) != d:
            raise ValueError(f"A has {d} columns but {len(bases)} base processes were given")
        if subordinator.dimension != d:
            raise ValueError(f"subordinator dimension {subordinator.dimension} != {d}")
        object.__setattr__(self, "A", rows)
        object.__setattr__(self, "bases", tuple(bases))
        object.__setattr__(self, "subordinator", subordinator)

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def d(self) -> int:
        return len(self.A[0])

    @property
    def is_brownian(self) -> bool:
        return all(b.kind in ("gaussian", "zero") for b in self.bases)


def _fsum_by_length(terms) -> dict[int, float]:
    buckets: dict[int, list[float]] = {}
    for l, v in terms:
        buckets.setdefault(l, []).append(v)
    return {l: math.fsum(vs) for l, vs in buckets.items()}


@lru_cache(maxsize=None)
def _inner(model: SubordinatedModel, k: int, column: MultiIndex, brownian: bool) -> float:
    if brownian:
        base = model.bases[k]
        mu, s2 = base.params if base.kind == "gaussian" else (0.0, 0.0)
        return brownian_inner_coefficient(column, k, model.A, mu, s2)
    return generic_inner_coefficient(column, k, model.A, model.bases[k])


@lru_cache(maxsize=None)
def _part_weights(
    model: SubordinatedModel, k: int, s: MultiIndex, brownian: bool, max_order: int
) -> dict[int, float]:
    """Map l -> sum over Λ ⊢ s with l(Λ) = l of s!/(Λ! m(Λ)!) * g_{k,Λ}."""
    parts = enumerate_p2_partitions(s, max_order) if brownian else enumerate_partitions(s, max_order)
    fs = math.prod(math.factorial(v) for v in s)
    terms = []
    for lam in parts:
        count = fs // (lam.column_factorial * lam.multiplicity_factorial)
        g = lam.associated(lambda c: _inner(model, k, c, brownian))
        if g != 0.0:
            terms.append((lam.length, count * g))
    return _fsum_by_length(terms)


def _evaluate(model: SubordinatedModel, i: MultiIndex, brownian: bool, max_order: int) -> float:
    if len(i) != model.n:
        raise ValueError(f"index {i} does not match model dimension n={model.n}")
    if sum(i) < 1:
        raise ValueError("cumulant order must be >= 1")
    if sum(i) > max_order:
        raise CapacityError(f"order |i| = {sum(i)} of {i} exceeds the cap {max_order}")
    T = model.subordinator
    terms = []
    for parts in enumerate_decompositions(i, model.d, max_order):
        weights = [_part_weights(model, k, s, brownian, max_order) for k, s in enumerate(parts)]
        if any(not w for w in weights):
            continue
        pref = multinomial(i, parts)
        for combo in itertools.product(*(w.items() for w in weights)):
            ls = tuple(l for l, _ in combo)
            c = T.cumulant(ls)
            if c == 0.0:
                continue
            prod = float(pref) * c
            for _, v in combo:
                prod *= v
            terms.append(prod)
    return math.fsum(terms)


def cumulant(model: SubordinatedModel, i: Sequence[int], max_order: int = DEFAULT_MAX_ORDER) -> float:
    """c_i(Y(1)) for a general subordinated model."""
    return _evaluate(model, as_multi_index(i), False, max_order)


def cumulant_brownian(
    model: SubordinatedModel, i: Sequence[int], max_order: int = DEFAULT_MAX_ORDER
) -> float:
    """c_i(Y(1)) when every base is Brownian; only columns with |λ| <= 2 survive."""
    if not model.is_brownian:
        raise ValueError("cumulant_brownian requires Gaussian base processes")
    return _evaluate(model, as_multi_index(i), True, max_order)


def univariate_bell_sum(
    i: Sequence[int],
    outer: UnivariateCumulants,
    inner,
    partitions: Sequence[MultiIndexPartition],
) -> float:
    """i! sum_Λ c_{l(Λ)}(outer) prod_s g(λ_s)^{r_s} / ((λ_s!)^{r_s} r_s!).

    The single-clock collapse of the Bell formula, used for one univariate
    subordinator driving a multivariate inner series ``inner(λ)``.
    """
    fi = math.prod(math.factorial(v) for v in i)
    terms = []
    for lam in partitions:
        g = lam.associated(inner)
        if g == 0.0:
            continue
        count = fi // (lam.column_factorial * lam.multiplicity_factorial)
        terms.append(count * outer.cumulant(lam.length) * g)
    return math.fsum(terms)


def cumulant_univariate(
    mu: float, sigma2: float, T: UnivariateCumulants, i: int, max_order: int = DEFAULT_MAX_ORDER
) -> float:
    """i-th cumulant of B(T(1)) for a Brownian B with drift mu and variance sigma2."""
    if i < 1:
        raise ValueError(f"cumulant order must be >= 1, got {i}")
    if sigma2 < 0:
        raise ValueError(f"variance must be >= 0, got {sigma2}")
    g = {(1,): mu, (2,): sigma2}
    return univariate_bell_sum((i,), T, g.__getitem__, enumerate_p2_partitions((i,), max_order))
