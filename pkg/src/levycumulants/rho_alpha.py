"""The rho-alpha model with NIG marginals.

Y_j(t) = B_j(X_j(t)) + B_j^rho(Z(t)), with idiosyncratic clocks
X_j ~ IG(1 - a sqrt(alpha_j), alpha_j^{-1/2}) and a common clock Z ~ IG(a, 1).
Marginal parameters map as mu_j = beta_j delta_j^2, sigma_j = delta_j,
alpha_j^{-1/2} = delta_j sqrt(gamma_j^2 - beta_j^2).
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .bell import SubordinatedModel, cumulant_univariate, univariate_bell_sum
from .multiindex import (
    DEFAULT_MAX_ORDER,
    CapacityError,
    MultiIndex,
    all_indices,
    as_multi_index,
    enumerate_p2_partitions,
    is_mixed,
)
from .providers import JointCumulantProvider, UnivariateCumulants
from .series import TruncatedSeries, series_compose_outer

PSD_TOLERANCE = 1e-12
# a may exceed a_max by rounding only
A_MAX_SLACK = 1e-12

DEFAULT_TIMES = (1 / 252, 21 / 252, 1.0)


class ModelError(ValueError):
    """A parameter set violating the model invariants."""


@dataclass(frozen=True)
class RhoAlphaNigModel:
    gamma: tuple[float, ...]
    delta: tuple[float, ...]
    beta: tuple[float, ...]
    rho: tuple[tuple[float, ...], ...]
    a: float
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        for name in ("gamma", "delta", "beta"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        object.__setattr__(self, "rho", tuple(tuple(float(v) for v in row) for row in self.rho))
        object.__setattr__(self, "a", float(self.a))
        n = len(self.gamma)
        if n < 1 or len(self.delta) != n or len(self.beta) != n:
            raise ModelError("gamma, delta and beta must have the same positive length")
        for j in range(n):
            g, d, b = self.gamma[j], self.delta[j], self.beta[j]
            if not (g > 0 and d > 0 and abs(b) < g):
                raise ModelError(
                    f"asset {j + 1}: need gamma > 0, delta > 0, |beta| < gamma (got {g}, {d}, {b})"
                )
        rho = np.array(self.rho)
        if rho.shape != (n, n):
            raise ModelError(f"rho must be {n}x{n}, got shape {rho.shape}")
        if not np.allclose(rho, rho.T, rtol=0, atol=1e-14):
            raise ModelError("rho must be symmetric")
        if not np.all(np.diag(rho) == 1.0):
            raise ModelError("rho must have unit diagonal")
        if np.any(np.abs(rho) > 1.0):
            raise ModelError("rho entries must lie in [-1, 1]")
        if np.linalg.eigvalsh(rho).min() < -PSD_TOLERANCE:
            raise ModelError("rho must be positive semidefinite")
        if not (0 < self.a <= self.a_max * (1 + A_MAX_SLACK)):
            raise ModelError(f"a must lie in (0, a_max = {self.a_max:.12g}], got {self.a}")

    @classmethod
    def bivariate(cls, gamma, delta, beta, rho12: float, a: float) -> "RhoAlphaNigModel":
        return cls(gamma, delta, beta, ((1.0, rho12), (rho12, 1.0)), a)

    @property
    def n(self) -> int:
        return len(self.gamma)

    @property
    def inv_sqrt_alpha(self) -> tuple[float, ...]:
        """alpha_j^{-1/2} = delta_j sqrt(gamma_j^2 - beta_j^2)."""
        return tuple(d * math.sqrt(g * g - b * b) for g, d, b in zip(self.gamma, self.delta, self.beta))

    @property
    def alpha(self) -> tuple[float, ...]:
        return tuple(1.0 / v**2 for v in self.inv_sqrt_alpha)

    @property
    def mu(self) -> tuple[float, ...]:
        return tuple(b * d * d for d, b in zip(self.delta, self.beta))

    @property
    def sigma(self) -> tuple[float, ...]:
        return self.delta

    @property
    def a_max(self) -> float:
        return min(self.inv_sqrt_alpha)

    @property
    def mu_rho(self) -> tuple[float, ...]:
        return tuple(m * al for m, al in zip(self.mu, self.alpha))

    @property
    def sigma_rho(self) -> np.ndarray:
        s = np.array(self.sigma) * np.sqrt(self.alpha)
        return np.array(self.rho) * np.outer(s, s)

    @cached_property
    def idiosyncratic_clocks(self) -> tuple[UnivariateCumulants, ...]:
        out = []
        for b in self.inv_sqrt_alpha:
            shape = 1.0 - self.a / b
            # a == a_max up to rounding: degenerate clock
            if shape <= A_MAX_SLACK:
                shape = 0.0
            out.append(UnivariateCumulants.inverse_gaussian(shape, b))
        return tuple(out)

    @property
    def common_clock(self) -> UnivariateCumulants:
        return UnivariateCumulants.inverse_gaussian(self.a, 1.0)

    def with_rho12(self, rho12: float) -> "RhoAlphaNigModel":
        rho = [list(r) for r in self.rho]
        rho[0][1] = rho[1][0] = float(rho12)
        return replace(self, rho=tuple(map(tuple, rho)))

    def with_a(self, a: float) -> "RhoAlphaNigModel":
        return replace(self, a=a)

    def common_inner(self, column: Sequence[int]) -> float:
        """Coefficient of the Gaussian cgf z.mu_rho + z^T Sigma_rho z / 2 at ``column``."""
        rows = [m for m, v in enumerate(column) for _ in range(v)]
        if len(rows) == 1:
            return self.mu_rho[rows[0]]
        if len(rows) == 2:
            al = self.alpha
            m1, m2 = rows
            return self.rho[m1][m2] * self.sigma[m1] * self.sigma[m2] * math.sqrt(al[m1] * al[m2])
        return 0.0


def _common_part(model: RhoAlphaNigModel, i: MultiIndex, max_order: int) -> float:
    return univariate_bell_sum(
        i, model.common_clock, model.common_inner, enumerate_p2_partitions(i, max_order)
    )


def _idiosyncratic_part(model: RhoAlphaNigModel, i: MultiIndex, max_order: int) -> float:
    support = [m for m, v in enumerate(i) if v]
    if len(support) != 1:
        return 0.0
    j = support[0]
    return cumulant_univariate(
        model.mu[j], model.sigma[j] ** 2, model.idiosyncratic_clocks[j], i[j], max_order
    )


def rho_alpha_cumulant(
    model: RhoAlphaNigModel, i: Sequence[int], t: float = 1.0, max_order: int = DEFAULT_MAX_ORDER
) -> float:
    """Joint cumulant c_i(Y(t)) = t * (idiosyncratic part on the axes + common part)."""
    i = as_multi_index(i)
    if len(i) != model.n:
        raise ModelError(f"index {i} does not match the model dimension {model.n}")
    if sum(i) < 1:
        raise ModelError("cumulant order must be >= 1")
    if sum(i) > max_order:
        raise CapacityError(f"order |i| = {sum(i)} of {i} exceeds the cap {max_order}")
    if not t > 0:
        raise ModelError(f"time must be positive, got {t}")
    key = (i, max_order)
    c1 = model._cache.get(key)
    if c1 is None:
        c1 = _idiosyncratic_part(model, i, max_order) + _common_part(model, i, max_order)
        model._cache[key] = c1
    return t * c1


def marginal_variance(model: RhoAlphaNigModel, m: int, t: float = 1.0) -> float:
    e = tuple(2 if s == m else 0 for s in range(model.n))
    return rho_alpha_cumulant(model, e, t)


def normalized_cumulant(
    model: RhoAlphaNigModel, i: Sequence[int], t: float = 1.0, max_order: int = DEFAULT_MAX_ORDER
) -> float:
    """c_i(Y(t)) / prod_m c_2(Y_m(t))^{i_m / 2}."""
    i = as_multi_index(i)
    raw = rho_alpha_cumulant(model, i, t, max_order)
    denom = 1.0
    for m, v in enumerate(i):
        if v:
            var = marginal_variance(model, m, t)
            if var <= 0:
                raise ModelError(f"marginal variance of component {m + 1} is zero")
            denom *= var ** (v / 2)
    return raw / denom


def nig_marginal_clock(model: RhoAlphaNigModel, j: int) -> UnivariateCumulants:
    """IG(1, alpha_j^{-1/2}): the clock that makes Y_j(1) ~ NIG(gamma_j, delta_j, beta_j)."""
    return UnivariateCumulants.inverse_gaussian(1.0, model.inv_sqrt_alpha[j])


def cgf_series(model: RhoAlphaNigModel, max_total_degree: int = 8) -> TruncatedSeries:
    """K_Y = sum_j K_{X_j}(mu_j z_j + sigma_j^2 z_j^2 / 2) + K_Z(z.mu_rho + z^T Sigma_rho z / 2)."""
    n, D = model.n, max_total_degree
    total = TruncatedSeries(n, D)
    for j, clock in enumerate(model.idiosyncratic_clocks):
        drift = [model.mu[j] if m == j else 0.0 for m in range(n)]
        cov = np.zeros((n, n))
        cov[j, j] = model.sigma[j] ** 2
        outer = TruncatedSeries.univariate(clock.cumulants(D), D)
        total = total + series_compose_outer(outer, [TruncatedSeries.quadratic(drift, cov, D)])
    outer = TruncatedSeries.univariate(model.common_clock.cumulants(D), D)
    inner = TruncatedSeries.quadratic(model.mu_rho, model.sigma_rho, D)
    return total + series_compose_outer(outer, [inner])


def as_subordinated_model(model: RhoAlphaNigModel) -> SubordinatedModel:
    """Embed the model as A Z(T) with T = (X_1, ..., X_n, Z, ..., Z).

    Components: n idiosyncratic Brownians on the X_j, one unit-drift
    degenerate component carrying mu_rho, and n standard Brownians mixed by
    a square root of Sigma_rho, all of the latter on the common clock Z.
    """
    n = model.n
    w, v = np.linalg.eigh(model.sigma_rho)
    root = v * np.sqrt(np.clip(w, 0.0, None))
    A = np.zeros((n, 2 * n + 1))
    A[:, :n] = np.eye(n)
    A[:, n] = model.mu_rho
    A[:, n + 1 :] = root
    bases = [UnivariateCumulants.gaussian(model.mu[j], model.sigma[j] ** 2) for j in range(n)]
    bases.append(UnivariateCumulants.gaussian(1.0, 0.0))
    bases.extend(UnivariateCumulants.gaussian(0.0, 1.0) for _ in range(n))
    blocks = [((j,), model.idiosyncratic_clocks[j]) for j in range(n)]
    blocks.append((tuple(range(n, 2 * n + 1)), model.common_clock))
    return SubordinatedModel(A, bases, JointCumulantProvider.from_blocks(2 * n + 1, blocks))


@dataclass
class CumulantTable:
    """Raw and normalized cumulants keyed by (multi-index, time)."""

    entries: dict[tuple[MultiIndex, float], tuple[float, float | None]] = field(default_factory=dict)

    def raw(self, i: Sequence[int], t: float) -> float:
        return self.entries[(tuple(i), t)][0]

    def normalized(self, i: Sequence[int], t: float) -> float | None:
        return self.entries[(tuple(i), t)][1]

    def rows(self):
        for (i, t), (raw, norm) in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            yield i, t, raw, norm


def cross_indices(n: int, orders: int) -> list[MultiIndex]:
    """Mixed multi-indices with 2 <= |i| <= orders, ordered lexicographically."""
    return sorted(j for j in all_indices(n, orders, min_order=2) if is_mixed(j))


def cumulant_table(
    model: RhoAlphaNigModel, orders: int, times: Iterable[float], indices=None
) -> CumulantTable:
    table = CumulantTable()
    idx = cross_indices(model.n, orders) if indices is None else [tuple(i) for i in indices]
    for t in times:
        for i in idx:
            raw = rho_alpha_cumulant(model, i, t)
            norm = normalized_cumulant(model, i, t) if sum(i) >= 2 else None
            table.entries[(i, t)] = (raw, norm)
    return table


SCAN_PARAMS = ("rho", "a", "t")


def scan_models(model: RhoAlphaNigModel, param: str, grid: Sequence[float]) -> list[RhoAlphaNigModel]:
    """Models along the grid; raises ModelError naming the first bad grid point."""
    if param not in SCAN_PARAMS:
        raise ModelError(f"scan parameter must be one of {SCAN_PARAMS}, got {param!r}")
    out = []
    for k, value in enumerate(grid):
        try:
            if param == "rho":
                if model.n < 2:
                    raise ModelError("rho scan needs at least two assets")
                out.append(model.with_rho12(value))
            elif param == "a":
                out.append(model.with_a(value))
            else:
                if not value > 0:
                    raise ModelError(f"time must be positive, got {value}")
                out.append(model)
        except ModelError as exc:
            raise ModelError(f"grid point {k} ({param} = {value!r}): {exc}") from None
    return out


def _table_job(args) -> CumulantTable:
    model, orders, times = args
    return cumulant_table(model, orders, times)


def scan(
    model: RhoAlphaNigModel,
    param: str,
    grid: Sequence[float],
    orders: int = 4,
    times: Sequence[float] = DEFAULT_TIMES,
    workers: int = 1,
) -> list[CumulantTable]:
    """One CumulantTable per grid point, in grid order.

    For a scan over ``t`` the grid values are the times and ``times`` is
    ignored.
    """
    models = scan_models(model, param, grid)
    jobs = [
        (m, orders, (float(v),) if param == "t" else tuple(times)) for m, v in zip(models, grid)
    ]
    if workers <= 1 or len(jobs) <= 1:
        return [_table_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_table_job, jobs))
