"""Truncated multivariate formal power series.

Coefficients follow the exponential convention: the series is
sum_j c_j z^j / j!, so a cumulant generating function stores cumulants
directly.  Dense storage on a (D+1)^n grid; entries with |j| > D are kept
at zero.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .multiindex import MultiIndex, all_indices, as_multi_index


def _factorial_grid(n: int, degree: int) -> np.ndarray:
    facts = np.array([math.factorial(k) for k in range(degree + 1)], dtype=float)
    grid = np.ones((degree + 1,) * n)
    for axis in range(n):
        shape = [1] * n
        shape[axis] = degree + 1
        grid = grid * facts.reshape(shape)
    return grid


def _degree_mask(n: int, degree: int) -> np.ndarray:
    total = np.zeros((degree + 1,) * n, dtype=int)
    for axis in range(n):
        shape = [1] * n
        shape[axis] = degree + 1
        total = total + np.arange(degree + 1).reshape(shape)
    return total <= degree


class TruncatedSeries:
    def __init__(self, num_vars: int, max_total_degree: int = 8, coefficients=None):
        if num_vars < 1 or max_total_degree < 1:
            raise ValueError("series needs num_vars >= 1 and max_total_degree >= 1")
        self.num_vars = num_vars
        self.max_total_degree = max_total_degree
        self._c = np.zeros((max_total_degree + 1,) * num_vars)
        for j, v in (coefficients or {}).items():
            j = as_multi_index(j)
            if len(j) != num_vars:
                raise ValueError(f"index {j} does not have {num_vars} components")
            if sum(j) <= max_total_degree:
                self._c[j] = v

    @classmethod
    def _wrap(cls, n: int, degree: int, exp_coeffs: np.ndarray) -> "TruncatedSeries":
        out = cls(n, degree)
        out._c = np.where(_degree_mask(n, degree), exp_coeffs, 0.0)
        return out

    @classmethod
    def variable(cls, num_vars: int, m: int, max_total_degree: int = 8) -> "TruncatedSeries":
        j = tuple(1 if s == m else 0 for s in range(num_vars))
        return cls(num_vars, max_total_degree, {j: 1.0})

    @classmethod
    def linear(cls, weights: Sequence[float], max_total_degree: int = 8) -> "TruncatedSeries":
        """sum_m w_m z_m."""
        n = len(weights)
        return cls(
            n,
            max_total_degree,
            {tuple(1 if s == m else 0 for s in range(n)): float(w) for m, w in enumerate(weights)},
        )

    @classmethod
    def quadratic(cls, drift: Sequence[float], cov, max_total_degree: int = 8) -> "TruncatedSeries":
        """z.drift + z^T cov z / 2, the cgf of a Gaussian vector."""
        n = len(drift)
        out = cls.linear(drift, max_total_degree)
        if max_total_degree >= 2:
            for m in range(n):
                for l in range(m, n):
                    j = [0] * n
                    j[m] += 1
                    j[l] += 1
                    out._c[tuple(j)] = cov[m][l]
        return out

    @classmethod
    def univariate(cls, coefficients: Sequence[float], max_total_degree: int = 8) -> "TruncatedSeries":
        """sum_{k>=1} coefficients[k-1] u^k / k! (e.g. a univariate cgf from its cumulants)."""
        return cls(
            1,
            max_total_degree,
            {(k,): c for k, c in enumerate(coefficients, start=1) if k <= max_total_degree},
        )

    def coefficient(self, j: Sequence[int]) -> float:
        j = as_multi_index(j)
        if len(j) != self.num_vars:
            raise ValueError(f"index {j} does not have {self.num_vars} components")
        if sum(j) > self.max_total_degree:
            raise ValueError(f"index {j} beyond truncation degree {self.max_total_degree}")
        return float(self._c[j])

    def coefficients(self) -> dict[MultiIndex, float]:
        return {
            j: float(self._c[j])
            for j in all_indices(self.num_vars, self.max_total_degree, min_order=0)
            if self._c[j] != 0.0
        }

    def _check(self, other: "TruncatedSeries") -> None:
        if (self.num_vars, self.max_total_degree) != (other.num_vars, other.max_total_degree):
            raise ValueError(
                "series dimension mismatch: "
                f"({self.num_vars}, {self.max_total_degree}) vs ({other.num_vars}, {other.max_total_degree})"
            )

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return self._wrap(self.num_vars, self.max_total_degree, self._c + other._c)

    def scale(self, factor: float) -> "TruncatedSeries":
        return self._wrap(self.num_vars, self.max_total_degree, self._c * factor)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        n, D = self.num_vars, self.max_total_degree
        fact = _factorial_grid(n, D)
        a = self._c / fact
        b = other._c / fact
        out = np.zeros_like(a)
        for k in zip(*np.nonzero(a)):
            src = tuple(slice(0, D + 1 - ks) for ks in k)
            dst = tuple(slice(ks, D + 1) for ks in k)
            out[dst] += a[k] * b[src]
        return self._wrap(n, D, out * fact)

    @property
    def constant(self) -> float:
        return float(self._c[(0,) * self.num_vars])

    def __repr__(self) -> str:
        return f"TruncatedSeries(num_vars={self.num_vars}, degree={self.max_total_degree}, terms={len(self.coefficients())})"


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def series_multiply(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def series_compose_outer(f: TruncatedSeries, inner: Sequence[TruncatedSeries]) -> TruncatedSeries:
    """f(inner_1(z), ..., inner_d(z)) truncated at the inner series' degree."""
    if len(inner) != f.num_vars:
        raise ValueError(f"outer series has {f.num_vars} variables but {len(inner)} inner series given")
    n, D = inner[0].num_vars, inner[0].max_total_degree
    for g in inner:
        if (g.num_vars, g.max_total_degree) != (n, D):
            raise ValueError("inner series must share num_vars and max_total_degree")
        if g.constant != 0.0:
            raise ValueError("inner series must have zero constant term")
    if f.max_total_degree < D:
        raise ValueError(f"outer series truncated at {f.max_total_degree} < {D}")
    d = f.num_vars
    one = TruncatedSeries(n, D, {(0,) * n: 1.0})
    monomials: dict[MultiIndex, TruncatedSeries] = {(0,) * d: one}
    result = TruncatedSeries(n, D) if f.constant == 0.0 else one.scale(f.constant)
    # u^m / m! built incrementally from u^(m - e_k) / (m - e_k)!
    for m in all_indices(d, D):
        k = max(s for s in range(d) if m[s])
        prev = tuple(v - 1 if s == k else v for s, v in enumerate(m))
        monomials[m] = (monomials[prev] * inner[k]).scale(1.0 / m[k])
        c = f._c[m]
        if c != 0.0:
            result = result + monomials[m].scale(c)
    return result


def composed_cgf(model, max_total_degree: int = 8) -> TruncatedSeries:
    """cgf of Y = A Z(T(1)) by direct composition K_T(K_{Z_1}(a_1.z), ..., K_{Z_d}(a_d.z)).

    ``model`` needs ``A`` (n x d), ``bases`` (d univariate cumulant sources
    with ``.cumulant(k)``) and ``subordinator`` (with ``.cumulant(j)``).
    """
    A = np.asarray(model.A, dtype=float)
    n, d = A.shape
    D = max_total_degree
    inner = []
    for k in range(d):
        kz = TruncatedSeries.univariate([model.bases[k].cumulant(p) for p in range(1, D + 1)], D)
        inner.append(series_compose_outer(kz, [TruncatedSeries.linear(A[:, k], D)]))
    outer = TruncatedSeries(
        d, D, {j: model.subordinator.cumulant(j) for j in all_indices(d, D)}
    )
    return series_compose_outer(outer, inner)


def cumulants_by_composition(model, i: Sequence[int], max_total_degree: int | None = None) -> float:
    """c_i(Y) read off the composed cgf."""
    i = as_multi_index(i)
    D = max_total_degree if max_total_degree is not None else max(sum(i), 1)
    if sum(i) > D:
        raise ValueError(f"order {sum(i)} beyond truncation degree {D}")
    return composed_cgf(model, D).coefficient(i)


