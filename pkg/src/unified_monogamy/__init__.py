"""Unified-(q,s) entanglement measures and Hamming-weight monogamy/polygamy bounds
for multiqubit states."""

from .bounds import (
    BoundReport,
    TighteningParams,
    evaluate_bounds,
    hamming_weight,
    tightening_coefficient,
    weighted_power_sum,
)
from .entropy import EntropyParams, classify_domain, unified_entropy
from .measures import (
    RoofOptions,
    concurrence,
    convex_roof,
    pure_state_ue,
    tsallis2_two_qubit,
    ue_two_qubit,
)
from .states import (
    DensityMatrix,
    PartitionSpec,
    PureState,
    SchmidtParams,
    build_generalized_schmidt,
    ginibre_mixed,
    haar_random_pure,
    reduce,
)

__version__ = "0.1.0"
