"""Exit criteria, one test per criterion, each at its stated tolerance."""
import io
import time

import numpy as np
import sympy as sp

from levycumulants import multiindex
from levycumulants.bell import cumulant, cumulant_univariate
from levycumulants.cli import main
from levycumulants.montecarlo import SimulationPlan, estimate_cumulants, simulate_increments
from levycumulants.multiindex import all_indices, enumerate_partitions, is_mixed
from levycumulants.providers import ig_cumulant
from levycumulants.rho_alpha import normalized_cumulant, rho_alpha_cumulant
from levycumulants.series import composed_cgf
from levycumulants.verification import rho_fit_residual

from conftest import footnote_model, record_acceptance
from models import random_clock, random_model
from oracles import all_multi_indices, brute_force_partitions

TIMES = (1 / 252, 21 / 252, 1.0)


def rel_err(a, b):
    den = max(abs(a), abs(b))
    return 0.0 if den == 0 else abs(a - b) / den


def test_criterion_1_partition_counts():
    indices = [i for n in (1, 2, 3) for i in all_multi_indices(n, 6)]
    multiindex._partitions.cache_clear()
    start = time.perf_counter()
    counts = {i: len(enumerate_partitions(i)) for i in indices}
    elapsed = time.perf_counter() - start
    mismatches = [i for i in indices if counts[i] != len(brute_force_partitions(i))]
    univariate = [counts[(k,)] for k in range(7)]
    ok = not mismatches and univariate == [1, 1, 2, 3, 5, 7, 11] and elapsed < 1.0
    record_acceptance(1, "partition counts", ok, f"{len(indices)} indices, {len(mismatches)} mismatches, {elapsed:.3f}s")
    assert not mismatches
    assert univariate == [1, 1, 2, 3, 5, 7, 11]
    assert elapsed < 1.0


def test_criterion_2_engine_oracle_equivalence():
    rng = np.random.default_rng(20240601)
    worst, engine_time, total = 0.0, 0.0, 0
    for _ in range(200):
        m = random_model(rng)
        S = composed_cgf(m, 6)
        for i in all_indices(m.n, 6):
            t0 = time.perf_counter()
            c = cumulant(m, i)
            engine_time += time.perf_counter() - t0
            worst = max(worst, rel_err(c, S.coefficient(i)))
            total += 1
    ok = worst <= 1e-10 and engine_time < 60
    record_acceptance(2, "Bell engine vs series composition", ok, f"{total} cumulants, max rel err {worst:.2e}, engine {engine_time:.1f}s")
    assert worst <= 1e-10
    assert engine_time < 60


def _symbolic(order):
    z, mu, s2 = sp.symbols("z mu s2")
    c = sp.symbols(f"c1:{order + 1}")
    inner = mu * z + s2 * z**2 / 2
    K = sum(c[k - 1] * inner**k / sp.factorial(k) for k in range(1, order + 1))
    return sp.lambdify((mu, s2, c), sp.expand(K).coeff(z, order) * sp.factorial(order))


def test_criterion_3_univariate_closed_forms():
    closed = {
        2: lambda mu, s2, c: s2 * c[0] + mu**2 * c[1],
        3: lambda mu, s2, c: mu**3 * c[2] + 3 * mu * s2 * c[1],
        4: lambda mu, s2, c: mu**4 * c[3] + 6 * mu**2 * s2 * c[2] + 3 * s2**2 * c[1],
    }
    symbolic = {k: _symbolic(k) for k in closed}
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(50):
        mu, s = rng.uniform(-1, 1), rng.uniform(0.05, 1)
        clock = random_clock(rng)
        c = clock.cumulants(4)
        for k, f in closed.items():
            got = cumulant_univariate(mu, s * s, clock, k)
            assert rel_err(f(mu, s * s, c), symbolic[k](mu, s * s, c[:k])) <= 1e-13
            worst = max(worst, rel_err(got, f(mu, s * s, c)))
    ok = worst <= 1e-12
    record_acceptance(3, "univariate closed forms", ok, f"max rel err {worst:.2e}")
    assert ok


def test_criterion_4_ig_convolution_identity():
    worst = 0.0
    for a in (0.1, 1.05, 2.1):
        m = footnote_model(a=a)
        for j in range(2):
            al = m.alpha[j]
            for k in range(1, 9):
                lhs = m.idiosyncratic_clocks[j].cumulant(k) + al**k * m.common_clock.cumulant(k)
                worst = max(worst, rel_err(lhs, ig_cumulant(1.0, al**-0.5, k)))
    ok = worst <= 1e-12
    record_acceptance(4, "IG convolution identity", ok, f"max rel err {worst:.2e}")
    assert ok


def test_criterion_5_structure():
    m = footnote_model()
    rates = {(1, 1): 0.0, (1, 2): 0.5, (2, 1): 0.5, (1, 3): 1.0, (2, 2): 1.0, (3, 1): 1.0}
    t_dev = 0.0
    for i, r in rates.items():
        vals = [normalized_cumulant(m, i, t) * t**r for t in TIMES]
        t_dev = max(t_dev, max(rel_err(v, vals[-1]) for v in vals))
    fits = {i: rho_fit_residual(m, i, deg, 41) for i, deg in [((1, 1), 1), ((1, 2), 1), ((1, 3), 1), ((2, 2), 2)]}
    other = m.with_a(0.42)
    lin = max(
        rel_err(rho_alpha_cumulant(m, i) / rho_alpha_cumulant(other, i), 1.05 / 0.42)
        for i in all_indices(2, 6)
        if is_mixed(i)
    )
    ok = t_dev <= 1e-12 and max(fits.values()) <= 1e-10 and lin <= 1e-12
    record_acceptance(
        5, "time rates, rho polynomials, a-linearity", ok,
        f"time dev {t_dev:.1e}, fit residual {max(fits.values()):.1e}, a-ratio dev {lin:.1e}",
    )
    assert t_dev <= 1e-12
    assert max(fits.values()) <= 1e-10
    assert lin <= 1e-12


def test_criterion_6_maximal_correlation():
    rho_grid = np.linspace(-1, 1, 41)
    best_105 = max(normalized_cumulant(footnote_model(r, 1.05), (1, 1)) for r in rho_grid)
    best_21 = max(normalized_cumulant(footnote_model(r, 2.1), (1, 1)) for r in rho_grid)
    a_max = footnote_model().a_max
    # supremum over the whole admissible family
    theoretic = max(
        normalized_cumulant(footnote_model(r, a), (1, 1))
        for a in np.linspace(a_max / 200, a_max, 200)
        for r in rho_grid
    )
    ok = abs(best_105 - 0.5) <= 0.05 and abs(best_21 - theoretic) <= 0.05
    record_acceptance(
        6, "maximal attainable correlation", ok,
        f"a=1.05: {best_105:.4f}; a=2.1: {best_21:.4f} vs family max {theoretic:.4f}",
    )
    assert abs(best_105 - 0.5) <= 0.05
    assert abs(best_21 - theoretic) <= 0.05


def test_criterion_7_monte_carlo():
    m = footnote_model(0.5, 1.05)
    start = time.perf_counter()
    emp = estimate_cumulants(simulate_increments(SimulationPlan(m, 1.0, 10**6, 20190601)), 4)
    elapsed = time.perf_counter() - start
    z = {i: abs(emp.estimates[i] - rho_alpha_cumulant(m, i)) / emp.standard_errors[i] for i in all_indices(2, 4)}
    worst = max(z, key=z.get)
    ok = z[worst] <= 4.0 and elapsed < 300
    record_acceptance(7, "Monte Carlo agreement", ok, f"max |z| = {z[worst]:.2f} at {worst}, {elapsed:.1f}s")
    assert z[worst] <= 4.0
    assert elapsed < 300


def test_criterion_8_scan_determinism(tmp_path):
    outputs = []
    for run, workers in enumerate((1, 1, 4)):
        path = tmp_path / f"scan{run}.csv"
        code = main(["scan", "--steps", "41", "--out", str(path), "--workers", str(workers)], out=io.StringIO())
        assert code == 0
        outputs.append(path.read_bytes())
    ok = outputs[0] == outputs[1] == outputs[2]
    record_acceptance(8, "scan determinism", ok, f"{len(outputs[0])} bytes, workers 1/1/4")
    assert ok
