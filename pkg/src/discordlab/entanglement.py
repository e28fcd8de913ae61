"""PPT / negativity and realignment (CCNR) indicators, and the phase classifier."""

from __future__ import annotations

import enum
from typing import NamedTuple

import numpy as np

from . import matcore
from .states import DensityMatrix

DETECTION_TOL = 1e-10
PPT_EIG_TOL = 1e-10


class Phase(str, enum.Enum):
    NPT_FREE = "NptFree"
    PPT_CCNR_DETECTED = "PptCcnrDetected"
    PPT_UNDETECTED = "PptUndetected"

    def __str__(self) -> str:
        return self.value


class PhaseLabel(NamedTuple):
    """Phase plus the two indicators it was decided from.

    ``PptUndetected`` means neither test fired; it is not a separability claim.
    """

    phase: Phase
    negativity: float
    ccnr: float


def negativity(rho: DensityMatrix) -> float:
    """``(||rho^T_B||_1 - 1) / 2``."""
    pt = matcore.partial_transpose(rho.mat, rho.m, rho.n)
    # rho^T_B is Hermitian, so its trace norm is the absolute eigenvalue sum
    value = (float(np.sum(np.abs(np.linalg.eigvalsh(pt)))) - 1.0) / 2.0
    if value < 0.0:
        if value < -1e-12:
            raise ArithmeticError(f"negativity {value!r} is below round-off")
        return 0.0
    return value


def min_pt_eigenvalue(rho: DensityMatrix) -> float:
    pt = matcore.partial_transpose(rho.mat, rho.m, rho.n)
    return float(np.linalg.eigvalsh(pt)[0])


def is_ppt(rho: DensityMatrix) -> bool:
    return min_pt_eigenvalue(rho) >= -PPT_EIG_TOL


def ccnr(rho: DensityMatrix) -> float:
    """Trace norm of the realigned matrix; above 1 certifies entanglement."""
    return matcore.trace_norm(matcore.realign(rho.mat, rho.m, rho.n))


def classify(rho: DensityMatrix) -> PhaseLabel:
    neg = negativity(rho)
    cc = ccnr(rho)
    if neg > DETECTION_TOL:
        phase = Phase.NPT_FREE
    elif cc > 1.0 + DETECTION_TOL:
        phase = Phase.PPT_CCNR_DETECTED
    else:
        phase = Phase.PPT_UNDETECTED
    return PhaseLabel(phase, neg, cc)
