import math

import numpy as np
import pytest

from levycumulants.providers import (
    JointCumulantProvider,
    UnivariateCumulants,
    brownian_inner_coefficient,
    double_factorial,
    generic_inner_coefficient,
    ig_cumulant,
    ig_scale,
)


def test_ig_cumulant_values():
    assert ig_cumulant(1, 1, 1) == 1
    assert ig_cumulant(1, 1, 3) == 3
    assert ig_cumulant(2, 0.5, 2) == 16


def test_double_factorial():
    assert [double_factorial(n) for n in (-1, 0, 1, 3, 5, 7, 13)] == [1, 1, 1, 3, 15, 105, 135135]


@pytest.mark.parametrize("a, b", [(0, 1), (1, 0), (-1, 1)])
def test_ig_cumulant_rejects_nonpositive(a, b):
    with pytest.raises(ValueError):
        ig_cumulant(a, b, 2)


def test_ig_additivity():
    for k in range(1, 9):
        lhs = ig_cumulant(0.3, 1.7, k) + ig_cumulant(0.9, 1.7, k)
        assert math.isclose(lhs, ig_cumulant(1.2, 1.7, k), rel_tol=1e-12)


def test_ig_scale():
    assert ig_scale(1, 1, 1) == (1, 1)
    assert ig_scale(1, 1, 4) == (2, 0.5)
    alpha = 1 / 2.1**2
    assert math.isclose(ig_scale(2.1, 1, alpha)[0], 1.0, rel_tol=1e-15)
    for a, b, al in [(1.0, 1.0, 4.0), (0.7, 2.3, 0.2), (2.1, 1.0, 0.31)]:
        a2, b2 = ig_scale(a, b, al)
        for k in range(1, 9):
            assert math.isclose(ig_cumulant(a2, b2, k), al**k * ig_cumulant(a, b, k), rel_tol=1e-12)
    with pytest.raises(ValueError):
        ig_scale(1, 1, 0)


def test_univariate_kinds():
    g = UnivariateCumulants.gaussian(0.2, 0.5)
    assert g.cumulants(5) == [0.2, 0.5, 0.0, 0.0, 0.0]
    assert UnivariateCumulants.inverse_gaussian(0, 2.0) == UnivariateCumulants.zero()
    assert UnivariateCumulants.zero().cumulants(3) == [0.0, 0.0, 0.0]
    tab = UnivariateCumulants.table([1.0, 2.0])
    assert tab.cumulant(2) == 2.0
    with pytest.raises(ValueError):
        tab.cumulant(3)
    ig = UnivariateCumulants.inverse_gaussian(0.4, 1.3)
    for k in range(1, 9):
        assert math.isclose(ig.at_time(2.5).cumulant(k), 2.5 * ig.cumulant(k), rel_tol=1e-14)


def test_joint_providers():
    bases = [UnivariateCumulants.inverse_gaussian(1, 2), UnivariateCumulants.inverse_gaussian(2, 1)]
    ind = JointCumulantProvider.independent(bases)
    assert ind.cumulant((3, 0)) == bases[0].cumulant(3)
    assert ind.cumulant((0, 2)) == bases[1].cumulant(2)
    for j in [(1, 1), (2, 1), (1, 3)]:
        assert ind.cumulant(j) == 0.0
    com = JointCumulantProvider.comonotone(bases[0], 3)
    for j in [(1, 0, 0), (1, 1, 0), (2, 1, 1), (0, 3, 1)]:
        assert com.cumulant(j) == bases[0].cumulant(sum(j))
    tab = JointCumulantProvider.tabulated(2, {(1, 0): 0.5, (1, 1): -0.25})
    assert tab.cumulant((1, 1)) == -0.25
    with pytest.raises(ValueError):
        tab.cumulant((2, 0))
    with pytest.raises(ValueError):
        ind.cumulant((0, 0))


def test_brownian_inner_coefficient():
    A = [[1.0], [1.0]]
    assert brownian_inner_coefficient((1, 0), 0, A, 0.3, 1.0) == 0.3
    assert brownian_inner_coefficient((1, 1), 0, A, 0.3, 2.0) == 2.0
    assert brownian_inner_coefficient((3, 0), 0, A, 0.3, 2.0) == 0.0
    B = [[2.0, 0.0], [-3.0, 1.0]]
    assert brownian_inner_coefficient((2, 0), 0, B, 0.1, 0.5) == 4.0 * 0.5
    assert math.isclose(brownian_inner_coefficient((0, 1), 0, B, 0.1, 0.5), -0.3, rel_tol=1e-15)
    with pytest.raises(ValueError):
        brownian_inner_coefficient((0, 0), 0, A, 0.3, 1.0)


def test_generic_inner_coefficient():
    base = UnivariateCumulants.table([0.0, 0.0, 5.0])
    assert generic_inner_coefficient((2, 1), 0, [[1.0], [2.0]], base) == 10.0
    eye = np.eye(2)
    assert generic_inner_coefficient((0, 2), 0, eye, UnivariateCumulants.gaussian(1, 1)) == 0.0
    rng = np.random.default_rng(3)
    A = rng.normal(size=(3, 2))
    g = UnivariateCumulants.gaussian(0.4, 0.9)
    cols = [(1, 0, 0), (0, 1, 0), (2, 0, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1), (0, 3, 0)]
    for col in cols:
        for k in range(2):
            assert math.isclose(
                generic_inner_coefficient(col, k, A, g),
                brownian_inner_coefficient(col, k, A, 0.4, 0.9),
                rel_tol=1e-15,
                abs_tol=0.0,
            )
