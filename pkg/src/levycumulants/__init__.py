"""Exact joint cumulants of multivariate subordinated Lévy processes."""
from .bell import SubordinatedModel, cumulant, cumulant_brownian, cumulant_univariate
from .multiindex import (
    CapacityError,
    MultiIndexPartition,
    enumerate_decompositions,
    enumerate_p2_partitions,
    enumerate_partitions,
)
from .providers import (
    JointCumulantProvider,
    UnivariateCumulants,
    brownian_inner_coefficient,
    generic_inner_coefficient,
    ig_cumulant,
    ig_scale,
)
from .rho_alpha import (
    CumulantTable,
    ModelError,
    RhoAlphaNigModel,
    normalized_cumulant,
    rho_alpha_cumulant,
    scan,
)
from .series import TruncatedSeries, cumulants_by_composition, series_compose_outer

__version__ = "0.1.0"
