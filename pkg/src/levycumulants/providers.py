"""Cumulant sources: univariate sequences, joint subordinator cumulants and
the inner coefficients g_{k,λ} fed to the Bell machinery.

Inverse Gaussian convention: IG(a, b) has mean a/b and variance a/b**3, and
is additive in ``a`` at fixed ``b``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .multiindex import MultiIndex


def double_factorial(n: int) -> int:
    """n!! for n >= -1 (with (-1)!! = 0!! = 1), exact."""
    if n < -1:
        raise ValueError(f"double factorial undefined for {n}")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def ig_cumulant(a: float, b: float, k: int) -> float:
    """k-th cumulant of IG(a, b): a/b for k = 1, a (2k-3)!! / b^(2k-1) otherwise."""
    if a <= 0 or b <= 0:
        raise ValueError(f"IG parameters must be positive, got a={a}, b={b}")
    if k < 1:
        raise ValueError(f"cumulant order must be >= 1, got {k}")
    if k == 1:
        return a / b
    return a * double_factorial(2 * k - 3) / b ** (2 * k - 1)


def ig_scale(a: float, b: float, alpha: float) -> tuple[float, float]:
    """Parameters of alpha * X when X ~ IG(a, b)."""
    if a <= 0 or b <= 0 or alpha <= 0:
        raise ValueError(f"ig_scale needs positive inputs, got a={a}, b={b}, alpha={alpha}")
    root = math.sqrt(alpha)
    return a * root, b / root


@dataclass(frozen=True)
class UnivariateCumulants:
    """A univariate cumulant sequence c_1, c_2, ...

    Build with the classmethods rather than the constructor.
    """

    kind: str
    params: tuple[float, ...] = ()

    @classmethod
    def inverse_gaussian(cls, a: float, b: float) -> "UnivariateCumulants":
        """IG(a, b); a == 0 collapses to the zero subordinator."""
        if b <= 0 or a < 0:
            raise ValueError(f"IG parameters need a >= 0, b > 0, got a={a}, b={b}")
        if a == 0:
            return cls.zero()
        return cls("inverse_gaussian", (float(a), float(b)))

    @classmethod
    def gaussian(cls, mu: float, sigma2: float) -> "UnivariateCumulants":
        if sigma2 < 0:
            raise ValueError(f"variance must be >= 0, got {sigma2}")
        return cls("gaussian", (float(mu), float(sigma2)))

    @classmethod
    def table(cls, values: Sequence[float]) -> "UnivariateCumulants":
        return cls("table", tuple(float(v) for v in values))

    @classmethod
    def zero(cls) -> "UnivariateCumulants":
        return cls("zero")

    def __post_init__(self):
        if self.kind not in ("inverse_gaussian", "gaussian", "table", "zero"):
            raise ValueError(f"unknown cumulant kind {self.kind!r}")

    def cumulant(self, k: int) -> float:
        if k < 1:
            raise ValueError(f"cumulant order must be >= 1, got {k}")
        if self.kind == "inverse_gaussian":
            return ig_cumulant(self.params[0], self.params[1], k)
        if self.kind == "gaussian":
            return self.params[k - 1] if k <= 2 else 0.0
        if self.kind == "table":
            if k > len(self.params):
                raise ValueError(f"cumulant of order {k} not tabulated (have {len(self.params)})")
            return self.params[k - 1]
        return 0.0

    def cumulants(self, max_order: int) -> list[float]:
        return [self.cumulant(k) for k in range(1, max_order + 1)]

    def at_time(self, t: float) -> "UnivariateCumulants":
        """Law at time t of the Lévy process with this time-one law."""
        if t <= 0:
            raise ValueError(f"time must be positive, got {t}")
        if self.kind == "inverse_gaussian":
            return UnivariateCumulants.inverse_gaussian(t * self.params[0], self.params[1])
        if self.kind == "gaussian":
            return UnivariateCumulants.gaussian(t * self.params[0], t * self.params[1])
        if self.kind == "table":
            return UnivariateCumulants.table([t * v for v in self.params])
        return self


@dataclass(frozen=True)
class JointCumulantProvider:
    """Joint cumulants c_j(T) of a d-dimensional subordinator.

    Components are grouped into blocks: components of one block are
    comonotone copies of a single univariate law, different blocks are
    independent.  ``tabulated`` overrides this with explicit values.
    """

    dimension: int
    blocks: tuple[tuple[tuple[int, ...], UnivariateCumulants], ...] = ()
    table: tuple[tuple[MultiIndex, float], ...] = ()
    tag: str = "blocks"
    _lookup: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    @classmethod
    def independent(cls, bases: Sequence[UnivariateCumulants]) -> "JointCumulantProvider":
        return cls(len(bases), tuple(((k,), b) for k, b in enumerate(bases)), tag="independent_components")

    @classmethod
    def comonotone(cls, base: UnivariateCumulants, d: int) -> "JointCumulantProvider":
        return cls(d, ((tuple(range(d)), base),), tag="comonotone")

    @classmethod
    def from_blocks(
        cls, d: int, blocks: Sequence[tuple[Sequence[int], UnivariateCumulants]]
    ) -> "JointCumulantProvider":
        seen = sorted(k for comps, _ in blocks for k in comps)
        if seen != list(range(d)):
            raise ValueError(f"blocks must cover components 0..{d - 1} exactly once")
        return cls(d, tuple((tuple(comps), base) for comps, base in blocks))

    @classmethod
    def tabulated(cls, d: int, values: dict) -> "JointCumulantProvider":
        items = tuple(sorted((tuple(int(v) for v in j), float(c)) for j, c in values.items()))
        for j, _ in items:
            if len(j) != d:
                raise ValueError(f"tabulated index {j} does not have dimension {d}")
        return cls(d, table=items, tag="tabulated")

    def cumulant(self, j: Sequence[int]) -> float:
        j = tuple(j)
        if len(j) != self.dimension:
            raise ValueError(f"index {j} does not match subordinator dimension {self.dimension}")
        if not any(j):
            raise ValueError("no order-0 cumulant")
        if self.tag == "tabulated":
            lookup = self._lookup
            if lookup is None:
                lookup = dict(self.table)
                object.__setattr__(self, "_lookup", lookup)
            if j not in lookup:
                raise ValueError(f"joint cumulant {j} not tabulated")
            return lookup[j]
        support = {k for k, v in enumerate(j) if v}
        for comps, base in self.blocks:
            if support <= set(comps):
                return base.cumulant(sum(j))
        return 0.0


def brownian_inner_coefficient(
    column: Sequence[int], k: int, A, mu_k: float, sigma2_k: float
) -> float:
    """Inner coefficient g_{k,λ} for a Brownian base with drift mu_k and variance sigma2_k."""
    total = sum(column)
    if total == 0:
        raise ValueError("inner coefficient undefined for the zero column")
    if total > 2:
        return 0.0
    rows = [m for m, v in enumerate(column) for _ in range(v)]
    if total == 1:
        return A[rows[0]][k] * mu_k
    return A[rows[0]][k] * A[rows[1]][k] * sigma2_k


def generic_inner_coefficient(
    column: Sequence[int], k: int, A, base: UnivariateCumulants
) -> float:
    """g_{k,λ} = c_{|λ|}(Z_k) * prod_m a_{mk}^{λ_m}."""
    total = sum(column)
    if total == 0:
        raise ValueError("inner coefficient undefined for the zero column")
    out = base.cumulant(total)
    for m, v in enumerate(column):
        if v:
            out *= A[m][k] ** v
    return out
