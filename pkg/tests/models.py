"""Random subordinated models with bounded parameters."""

from levycumulants.bell import SubordinatedModel
from levycumulants.multiindex import all_indices
from levycumulants.providers import JointCumulantProvider, UnivariateCumulants


def random_base(rng, kinds=("gaussian", "inverse_gaussian", "table")):
    kind = kinds[rng.integers(len(kinds))]
    if kind == "gaussian":
        return UnivariateCumulants.gaussian(rng.uniform(-1, 1), rng.uniform(0.1, 1))
    if kind == "inverse_gaussian":
        return UnivariateCumulants.inverse_gaussian(rng.uniform(0.2, 2), rng.uniform(0.5, 2))
    return UnivariateCumulants.table(rng.uniform(-1, 1, 8))


def random_clock(rng):
    return UnivariateCumulants.inverse_gaussian(rng.uniform(0.2, 2), rng.uniform(0.5, 2))


def random_subordinator(rng, d, max_order=6):
    kind = rng.integers(4)
    if kind == 0:
        return JointCumulantProvider.independent([random_clock(rng) for _ in range(d)])
    if kind == 1:
        return JointCumulantProvider.comonotone(random_clock(rng), d)
    if kind == 2:
        labels = rng.integers(0, d, size=d)
        groups = {}
        for k, g in enumerate(labels):
            groups.setdefault(int(g), []).append(k)
        return JointCumulantProvider.from_blocks(d, [(comps, random_clock(rng)) for comps in groups.values()])
    return JointCumulantProvider.tabulated(d, {j: rng.uniform(-1, 1) for j in all_indices(d, max_order)})


def random_model(rng, max_n=3, max_d=3, base_kinds=("gaussian", "inverse_gaussian", "table")):
    n = int(rng.integers(1, max_n + 1))
    d = int(rng.integers(1, max_d + 1))
    A = rng.uniform(-1, 1, size=(n, d))
    bases = [random_base(rng, base_kinds) for _ in range(d)]
    return SubordinatedModel(A, bases, random_subordinator(rng, d))
