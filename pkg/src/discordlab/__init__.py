"""Geometric discord bounds with saturation certificates, and entanglement phases
of bipartite states, with a one-parameter 3x3 family as the worked example."""

from .discord import (
    CertificationReport,
    OptimizerConfig,
    Status,
    certify,
    lf_bound,
    measurement_value,
    optimize_discord,
    sharp_bound,
)
from .entanglement import classify, negativity, ccnr, is_ppt
from .states import (
    BlochForm,
    DensityMatrix,
    MeasurementBasis,
    bloch_decompose,
    horodecki_state,
    max_entangled,
    random_density,
)

__version__ = "0.1.0"
