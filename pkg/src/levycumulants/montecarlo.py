"""Monte Carlo oracle: simulate subordinated Brownian models and estimate
joint cumulants from the sampled increments.

Paths are generated in fixed-size chunks; chunk ``c`` draws from its own
Philox stream keyed by ``(seed, c)``, so the output does not depend on how
chunks are spread over workers.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .bell import SubordinatedModel
from .multiindex import MultiIndex, all_indices, enumerate_partitions
from .rho_alpha import PSD_TOLERANCE, ModelError, RhoAlphaNigModel

CHUNK_SIZE = 1 << 16
MIN_SAMPLES = 10_000
DEFAULT_BATCHES = 100


def chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def sample_ig(a: float, b: float, count: int, rng: Union[np.random.Generator, int, None] = None) -> np.ndarray:
    """Draws from IG(a, b) (mean a/b, variance a/b^3).

    Michael-Schucany-Haas transformation with mean m = a/b and shape a^2.
    """
    if a <= 0 or b <= 0:
        raise ValueError(f"IG parameters must be positive, got a={a}, b={b}")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    m = a / b
    lam = a * a
    y = rng.standard_normal(count) ** 2
    my = m * y
    x = m + m * my / (2 * lam) - (m / (2 * lam)) * np.sqrt(4 * lam * my + my * my)
    u = rng.random(count)
    # x underflows to 0 for very large y; the other root is then taken
    with np.errstate(divide="ignore"):
        return np.where((u <= m / (m + x)) & (x > 0), x, m * m / x)


def _clock_draw(clock, t: float, count: int, rng: np.random.Generator) -> np.ndarray:
    if clock.kind == "zero":
        return np.zeros(count)
    if clock.kind != "inverse_gaussian":
        raise ValueError(f"cannot simulate a {clock.kind!r} clock")
    a, b = clock.params
    return sample_ig(t * a, b, count, rng)


def _psd_root(cov: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(cov)
    scale = max(1.0, float(np.abs(w).max()))
    if w.min() < -PSD_TOLERANCE * scale:
        raise ModelError(f"covariance is not positive semidefinite (min eigenvalue {w.min():.3g})")
    return v * np.sqrt(np.clip(w, 0.0, None))


def _rho_alpha_chunk(model: RhoAlphaNigModel, t: float, count: int, rng: np.random.Generator) -> np.ndarray:
    n = model.n
    mu = np.array(model.mu)
    sigma = np.array(model.sigma)
    X = np.column_stack([_clock_draw(c, t, count, rng) for c in model.idiosyncratic_clocks])
    Z = _clock_draw(model.common_clock, t, count, rng)
    root = _psd_root(model.sigma_rho)
    idio = mu * X + sigma * np.sqrt(X) * rng.standard_normal((count, n))
    common = np.outer(Z, model.mu_rho) + np.sqrt(Z)[:, None] * (rng.standard_normal((count, n)) @ root.T)
    return idio + common


def _subordinated_chunk(model: SubordinatedModel, t: float, count: int, rng: np.random.Generator) -> np.ndarray:
    if not model.is_brownian:
        raise ValueError("simulation needs Gaussian base processes")
    T = model.subordinator
    if T.tag == "tabulated":
        raise ValueError("cannot simulate a tabulated subordinator")
    clocks = np.zeros((count, model.d))
    for comps, base in T.blocks:
        draw = _clock_draw(base, t, count, rng)
        for k in comps:
            clocks[:, k] = draw
    mu = np.array([b.params[0] if b.kind == "gaussian" else 0.0 for b in model.bases])
    s2 = np.array([b.params[1] if b.kind == "gaussian" else 0.0 for b in model.bases])
    Zt = mu * clocks + np.sqrt(s2 * clocks) * rng.standard_normal((count, model.d))
    return Zt @ np.array(model.A).T


@dataclass(frozen=True)
class SimulationPlan:
    model: Union[RhoAlphaNigModel, SubordinatedModel]
    t: float
    num_paths: int
    seed: int
    num_workers: int = 1

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError(f"time must be positive, got {self.t}")
        if self.num_paths < 1:
            raise ValueError(f"num_paths must be >= 1, got {self.num_paths}")
        if self.num_workers < 1:
            raise ValueError(f"num_workers must be >= 1, got {self.num_workers}")


def simulate_increments(plan: SimulationPlan) -> np.ndarray:
    """Array of shape (num_paths, n) with the increments Y(t) - Y(0)."""
    chunk_fn = _rho_alpha_chunk if isinstance(plan.model, RhoAlphaNigModel) else _subordinated_chunk
    sizes = [
        min(CHUNK_SIZE, plan.num_paths - start) for start in range(0, plan.num_paths, CHUNK_SIZE)
    ]

    def run(c: int) -> np.ndarray:
        return chunk_fn(plan.model, plan.t, sizes[c], chunk_generator(plan.seed, c))

    if plan.num_workers == 1:
        parts = [run(c) for c in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=plan.num_workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    return np.concatenate(parts, axis=0)


def moments_to_cumulant(moments, i: Sequence[int]) -> float:
    """Joint cumulant from joint moments: i! sum_Λ (-1)^{l-1}(l-1)! prod m_λ^r / (r! (λ!)^r).

    ``moments`` maps multi-indices to (raw or central) moments.
    """
    i = tuple(i)
    fi = math.prod(math.factorial(v) for v in i)
    terms = []
    for lam in enumerate_partitions(i):
        count = fi // (lam.column_factorial * lam.multiplicity_factorial)
        l = lam.length
        terms.append((-1) ** (l - 1) * math.factorial(l - 1) * count * lam.associated(moments.__getitem__))
    return math.fsum(terms)


def cumulants_to_moment(cumulants, i: Sequence[int]) -> float:
    """Joint raw moment from joint cumulants: i! sum_Λ prod κ_λ^r / (r! (λ!)^r)."""
    i = tuple(i)
    fi = math.prod(math.factorial(v) for v in i)
    terms = []
    for lam in enumerate_partitions(i):
        count = fi // (lam.column_factorial * lam.multiplicity_factorial)
        terms.append(count * lam.associated(cumulants.__getitem__))
    return math.fsum(terms)


def _point_estimates(x: np.ndarray, max_order: int) -> dict[MultiIndex, float]:
    n = x.shape[1]
    mean = x.mean(axis=0)
    xc = x - mean
    powers = [[np.ones(len(x))] for _ in range(n)]
    for m in range(n):
        for p in range(1, max_order + 1):
            powers[m].append(powers[m][-1] * xc[:, m])
    central = {}
    for j in all_indices(n, max_order):
        prod = powers[0][j[0]]
        for m in range(1, n):
            if j[m]:
                prod = prod * powers[m][j[m]]
        central[j] = 0.0 if sum(j) == 1 else float(prod.mean())
    out = {}
    for j in all_indices(n, max_order):
        if sum(j) == 1:
            out[j] = float(mean[j.index(1)])
        else:
            out[j] = moments_to_cumulant(central, j)
    return out


@dataclass
class EmpiricalCumulants:
    estimates: dict[MultiIndex, float]
    standard_errors: dict[MultiIndex, float]
    num_samples: int


def estimate_cumulants(
    samples: np.ndarray, max_order: int = 4, batches: int = DEFAULT_BATCHES
) -> EmpiricalCumulants:
    """Joint cumulant estimates for 1 <= |i| <= max_order with batch standard errors."""
    x = np.asarray(samples, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if len(x) < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {len(x)}")
    est = _point_estimates(x, max_order)
    per_batch = [_point_estimates(chunk, max_order) for chunk in np.array_split(x, batches)]
    se = {}
    for j in est:
        vals = np.array([b[j] for b in per_batch])
        se[j] = float(vals.std(ddof=1) / math.sqrt(batches))
    return EmpiricalCumulants(est, se, len(x))
