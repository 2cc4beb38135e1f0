"""Checks that compare the closed forms against the series and Monte Carlo
oracles and test the structural properties of the rho-alpha cumulants."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bell import cumulant_brownian, cumulant_univariate
from .montecarlo import MIN_SAMPLES, SimulationPlan, estimate_cumulants, simulate_increments
from .multiindex import all_indices, is_mixed
from .rho_alpha import (
    RhoAlphaNigModel,
    as_subordinated_model,
    cgf_series,
    cross_indices,
    marginal_variance,
    nig_marginal_clock,
    normalized_cumulant,
    rho_alpha_cumulant,
)

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"

ORACLE_RTOL = 1e-10
SCALING_RTOL = 1e-12
FIT_RTOL = 1e-10
MARGINAL_RTOL = 1e-10
LINEARITY_RTOL = 1e-12
MC_SIGMAS = 4.0
RHO_GRID_POINTS = 41


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def line(self) -> str:
        return f"{self.status} {self.name}" + (f": {self.detail}" if self.detail else "")


def _scale(model: RhoAlphaNigModel, i) -> float:
    # natural size of c_i: prod_m sd_m^{i_m}
    return math.prod(marginal_variance(model, m) ** (v / 2) for m, v in enumerate(i) if v)


def _compare(name: str, model, pairs, rtol: float) -> CheckResult:
    """pairs: iterable of (index, expected, got)."""
    worst, worst_at = 0.0, None
    for i, expected, got in pairs:
        err = abs(got - expected) / max(abs(expected), abs(got), 1e-2 * _scale(model, i))
        if err > worst:
            worst, worst_at = err, (i, expected, got)
    if worst <= rtol:
        return CheckResult(name, PASS, f"max rel err {worst:.2e}")
    i, expected, got = worst_at
    return CheckResult(name, FAIL, f"index {i}: expected {expected!r}, got {got!r} (rel err {worst:.2e})")


def check_series_oracle(model: RhoAlphaNigModel, orders: int) -> CheckResult:
    series = cgf_series(model, orders)
    pairs = [(i, series.coefficient(i), rho_alpha_cumulant(model, i)) for i in all_indices(model.n, orders)]
    return _compare("closed form vs series composition", model, pairs, ORACLE_RTOL)


def check_embedding(model: RhoAlphaNigModel, orders: int) -> CheckResult:
    embedded = as_subordinated_model(model)
    pairs = [
        (i, cumulant_brownian(embedded, i), rho_alpha_cumulant(model, i)) for i in all_indices(model.n, orders)
    ]
    return _compare("closed form vs multivariate Bell engine", model, pairs, ORACLE_RTOL)


def check_monte_carlo(
    model: RhoAlphaNigModel, orders: int, num_paths: int, seed: int, t: float = 1.0, workers: int = 1
) -> CheckResult:
    name = f"Monte Carlo agreement ({num_paths} paths, t={t:g})"
    if num_paths < MIN_SAMPLES:
        return CheckResult(name, INCONCLUSIVE, f"fewer than {MIN_SAMPLES} paths, standard errors too wide")
    top = min(orders, 4)
    x = simulate_increments(SimulationPlan(model, t, num_paths, seed, workers))
    emp = estimate_cumulants(x, top)
    worst, worst_at = 0.0, None
    for i in all_indices(model.n, top):
        z = abs(emp.estimates[i] - rho_alpha_cumulant(model, i, t)) / emp.standard_errors[i]
        if z > worst:
            worst, worst_at = z, i
    if worst <= MC_SIGMAS:
        return CheckResult(name, PASS, f"max |z| = {worst:.2f}")
    i = worst_at
    return CheckResult(
        name,
        FAIL,
        f"index {i}: analytic {rho_alpha_cumulant(model, i, t)!r}, empirical {emp.estimates[i]!r} "
        f"+- {emp.standard_errors[i]:.3g} (|z| = {worst:.2f})",
    )


def check_time_scaling(model: RhoAlphaNigModel, orders: int, times) -> CheckResult:
    worst, worst_at = 0.0, None
    for i in cross_indices(model.n, orders):
        rate = (sum(i) - 2) / 2
        vals = [normalized_cumulant(model, i, t) * t**rate for t in times]
        ref = vals[-1]
        for t, v in zip(times, vals):
            err = abs(v - ref) / max(abs(ref), 1e-300)
            if err > worst:
                worst, worst_at = err, (i, t, ref, v)
    if worst <= SCALING_RTOL:
        return CheckResult("time scaling of normalized cumulants", PASS, f"max rel dev {worst:.2e}")
    i, t, ref, v = worst_at
    return CheckResult("time scaling of normalized cumulants", FAIL, f"index {i} at t={t!r}: {ref!r} vs {v!r}")


def rho_fit_residual(model: RhoAlphaNigModel, i, degree: int, points: int = RHO_GRID_POINTS) -> float:
    """Max |residual| / max |value| of a degree-``degree`` fit of c̄_i(1) over rho12 in [-1, 1]."""
    grid = np.linspace(-1.0, 1.0, points)
    vals = np.array([normalized_cumulant(model.with_rho12(r), i) for r in grid])
    coef = np.polynomial.polynomial.polyfit(grid, vals, degree)
    resid = vals - np.polynomial.polynomial.polyval(grid, coef)
    return float(np.abs(resid).max() / np.abs(vals).max())


def check_rho_polynomial(model: RhoAlphaNigModel, orders: int) -> CheckResult:
    name = "polynomial structure in rho12"
    if model.n != 2:
        return CheckResult(name, INCONCLUSIVE, "defined for bivariate models only")
    worst, worst_at = 0.0, None
    for i in cross_indices(2, orders):
        r = rho_fit_residual(model, i, min(i))
        if r > worst:
            worst, worst_at = r, i
    if worst <= FIT_RTOL:
        return CheckResult(name, PASS, f"max rel residual {worst:.2e}")
    return CheckResult(name, FAIL, f"index {worst_at}: fit of degree {min(worst_at)} leaves rel residual {worst:.2e}")


def marginal_variants(model: RhoAlphaNigModel) -> list[RhoAlphaNigModel]:
    a_values = sorted({a for a in (0.1, 1.05, 2.1, model.a) if a <= model.a_max})
    out = []
    for a in a_values:
        for r in (-0.9, 0.0, 0.9) if model.n >= 2 else (None,):
            m = model.with_a(a)
            out.append(m if r is None else m.with_rho12(r))
    return out


def check_marginal_invariance(model: RhoAlphaNigModel, max_order: int = 8) -> CheckResult:
    worst, worst_at = 0.0, None
    for m in range(model.n):
        for k in range(1, max_order + 1):
            e = tuple(k if s == m else 0 for s in range(model.n))
            target = cumulant_univariate(model.mu[m], model.sigma[m] ** 2, nig_marginal_clock(model, m), k)
            for variant in marginal_variants(model):
                got = rho_alpha_cumulant(variant, e)
                err = abs(got - target) / abs(target)
                if err > worst:
                    worst, worst_at = err, (e, variant.a, target, got)
    if worst <= MARGINAL_RTOL:
        return CheckResult("marginals independent of a and rho", PASS, f"max rel dev {worst:.2e}")
    e, a, target, got = worst_at
    return CheckResult("marginals independent of a and rho", FAIL, f"index {e} at a={a!r}: {target!r} vs {got!r}")


def check_a_linearity(model: RhoAlphaNigModel, orders: int) -> CheckResult:
    other = model.with_a(model.a / 2)
    worst, worst_at = 0.0, None
    for i in all_indices(model.n, orders):
        if not is_mixed(i):
            continue
        c, c2 = rho_alpha_cumulant(model, i), rho_alpha_cumulant(other, i)
        if c == 0.0 and c2 == 0.0:
            continue
        err = abs(c / c2 - 2.0) / 2.0
        if err > worst:
            worst, worst_at = err, (i, c, c2)
    if worst <= LINEARITY_RTOL:
        return CheckResult("mixed cumulants linear in a", PASS, f"max rel dev {worst:.2e}")
    i, c, c2 = worst_at
    return CheckResult("mixed cumulants linear in a", FAIL, f"index {i}: c(a)={c!r}, c(a/2)={c2!r}")


def run_all(
    model: RhoAlphaNigModel,
    orders: int,
    times,
    num_paths: int,
    seed: int,
    workers: int = 1,
    report: Callable[[CheckResult], None] | None = None,
) -> list[CheckResult]:
    checks = [
        lambda: check_series_oracle(model, orders),
        lambda: check_embedding(model, orders),
        lambda: check_monte_carlo(model, orders, num_paths, seed, workers=workers),
        lambda: check_time_scaling(model, orders, times),
        lambda: check_rho_polynomial(model, orders),
        lambda: check_marginal_invariance(model),
        lambda: check_a_linearity(model, orders),
    ]
    results = []
    for run in checks:
        res = run()
        if report is not None:
            report(res)
        results.append(res)
    return results
