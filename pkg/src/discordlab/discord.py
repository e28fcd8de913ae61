"""Geometric discord: eigenvalue lower bounds, measured upper bounds, certification.

Geometric discord here is the unnormalized quantity

    D(rho) = min_Pi || rho - Pi(rho) ||_HS^2,

minimized over rank-one von Neumann measurements ``Pi`` on subsystem A.
Both lower bounds are read off the spectrum of ``M = C C^t`` where ``C`` is
the full correlation matrix from :func:`discordlab.states.bloch_decompose`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.linalg import schur
from scipy.optimize import minimize

from . import matcore
from .errors import DimensionMismatch, DiscordLabError, InvalidConfig, LengthMismatch, WrongDimension
from .states import (
    BlochForm,
    DensityMatrix,
    MeasurementBasis,
    bloch_decompose,
    orthonormal_basis,
)

__all__ = [
    "BoundReport",
    "BoundViolation",
    "CertificationReport",
    "DiscordEstimate",
    "MeasurementBasis",
    "OptimizerConfig",
    "Status",
    "basis_from_params",
    "bound_report",
    "certify",
    "exhaustive_qubit_scan",
    "fibonacci_sphere",
    "lf_bound",
    "measurement_value",
    "optimize_discord",
    "params_from_unitary",
    "project_measure",
    "sharp_bound",
]

FD_STEP = 1e-6
GAP_SLACK = 1e-9


class BoundViolation(DiscordLabError):
    """A measured value fell below a proven lower bound by more than round-off."""


class Status(str, enum.Enum):
    CERTIFIED_EXACT = "CertifiedExact"
    GAP_OPEN = "GapOpen"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 64
    seed: int = 0
    step_tol: float = 1e-12
    max_iters: int = 10000
    exactness_tol: float = 1e-8

    def __post_init__(self):
        if self.restarts < 1:
            raise InvalidConfig(f"restarts must be >= 1, got {self.restarts}")
        if self.max_iters < 1:
            raise InvalidConfig(f"max_iters must be >= 1, got {self.max_iters}")
        if not (self.step_tol > 0 and self.exactness_tol > 0):
            raise InvalidConfig("tolerances must be positive")


class BoundReport(NamedTuple):
    lf: float
    sharp: float
    eigenvalues_M: np.ndarray
    eigenvalues_Mtilde: np.ndarray


class DiscordEstimate(NamedTuple):
    """Best measurement found by :func:`optimize_discord`.

    ``restart`` is the index of the winning local search, or -1 when the
    computational basis (``theta = 0``) was never beaten.
    """

    value: float
    basis: MeasurementBasis
    theta: np.ndarray
    restart: int
    converged: bool
    iterations: int


@dataclass(frozen=True)
class CertificationReport:
    lower: float
    upper: float
    gap: float
    status: Status
    best_basis: MeasurementBasis
    candidate_values: dict = field(default_factory=dict)
    converged: bool = True

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "gap": self.gap,
            "status": self.status.value,
            "candidate_values": dict(self.candidate_values),
            "optimizer_converged": self.converged,
            "best_basis": [
                {"re": proj.real.tolist(), "im": proj.imag.tolist()}
                for proj in self.best_basis.projectors
            ],
        }


# -- measurements --------------------------------------------------------------


def _check_basis(rho: DensityMatrix, basis: MeasurementBasis) -> None:
    if basis.m != rho.m:
        raise DimensionMismatch(f"basis acts on dimension {basis.m}, state has m={rho.m}")


def _measured(mat: np.ndarray, m: int, n: int, projectors: np.ndarray) -> np.ndarray:
    r4 = mat.reshape(m, n, m, n)
    out = np.einsum("kab,bjcl,kcd->ajdl", projectors, r4, projectors)
    return out.reshape(m * n, m * n)


def project_measure(rho: DensityMatrix, basis: MeasurementBasis) -> DensityMatrix:
    """``Pi(rho) = sum_k (P_k (x) I) rho (P_k (x) I)``."""
    _check_basis(rho, basis)
    return DensityMatrix(rho.m, rho.n, _measured(rho.mat, rho.m, rho.n, basis.projectors))


def measurement_value(rho: DensityMatrix, basis: MeasurementBasis) -> float:
    """``|| rho - Pi(rho) ||^2``; an upper bound on geometric discord."""
    _check_basis(rho, basis)
    return matcore.hs_norm_sq(rho.mat - _measured(rho.mat, rho.m, rho.n, basis.projectors))


# -- lower bounds --------------------------------------------------------------


def _spectra(b: BlochForm) -> tuple[np.ndarray, np.ndarray]:
    gram = b.gram()
    ev = np.linalg.eigvalsh(gram)[::-1]
    ev_tilde = np.linalg.eigvalsh(gram[1:, 1:])[::-1]
    return ev, ev_tilde


def _trailing(values: np.ndarray, skip: int) -> float:
    return max(0.0, float(np.sum(values[skip:])))


def lf_bound(b: BlochForm) -> float:
    """Sum of all but the ``m`` largest eigenvalues of ``C C^t``."""
    ev, _ = _spectra(b)
    return _trailing(ev, b.m)


def sharp_bound(b: BlochForm) -> float:
    """Sum of all but the ``m - 1`` largest eigenvalues of the traceless-A block.

    Every measurement vector ``a_k`` (``a_k[i] = tr(P_k F_i)``) has the same
    identity component ``1/sqrt(m)``, and their traceless parts span an
    ``(m-1)``-dimensional subspace; maximizing ``sum_k a_k^t M a_k`` under
    that constraint gives this bound, which dominates :func:`lf_bound`.
    """
    _, ev_tilde = _spectra(b)
    return _trailing(ev_tilde, b.m - 1)


def bound_report(b: BlochForm) -> BoundReport:
    ev, ev_tilde = _spectra(b)
    return BoundReport(_trailing(ev, b.m), _trailing(ev_tilde, b.m - 1), ev, ev_tilde)


# -- measurement chart and objective --------------------------------------------


def _unitaries(thetas: np.ndarray, m: int) -> np.ndarray:
    """Batched ``exp(i sum_j theta_j F_j)`` for rows of ``thetas``."""
    gens = orthonormal_basis(m)[1:]
    h = np.einsum("bj,jac->bac", thetas, gens)
    w, v = np.linalg.eigh(h)
    return np.einsum("bak,bk,bck->bac", v, np.exp(1j * w), v.conj())


def basis_from_params(theta, m: int) -> MeasurementBasis:
    """Measurement ``P_k = U|k><k|U^H`` with ``U = exp(i sum_j theta_j F_j)``.

    ``F_j`` are the traceless elements of :func:`orthonormal_basis` (indices
    1 .. m^2-1), used unscaled.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (m * m - 1,):
        raise LengthMismatch(f"expected {m * m - 1} parameters for m={m}, got shape {theta.shape}")
    return MeasurementBasis.from_unitary(_unitaries(theta[None, :], m)[0])


class _Objective:
    """Vectorized measured distance for unitaries ``U_0 exp(i sum_j d_j F_j)``.

    With ``a_k[i] = <u_k|F_i|u_k>`` for the columns ``u_k`` of the unitary,
    the value is ``tr M - sum_k a_k^t M a_k``.  Derivatives are taken in the
    local coordinates ``d`` around a base point ``U_0``.
    """

    def __init__(self, rho: DensityMatrix):
        self.m = rho.m
        self.dim = rho.m * rho.m - 1
        self.gram = bloch_decompose(rho).gram()
        self.trace = float(np.trace(self.gram))
        self.basis = orthonormal_basis(rho.m)

    def at_unitaries(self, u: np.ndarray) -> np.ndarray:
        a = np.einsum("bak,iac,bck->bki", u.conj(), self.basis, u).real
        return self.trace - np.einsum("bki,ij,bkj->b", a, self.gram, a)

    def local(self, base: np.ndarray, deltas: np.ndarray) -> np.ndarray:
        return self.at_unitaries(base @ _unitaries(deltas, self.m))

    def value(self, theta: np.ndarray) -> float:
        return float(self.at_unitaries(_unitaries(theta[None, :], self.m))[0])

    def gradient(self, base: np.ndarray, h: float = FD_STEP) -> np.ndarray:
        """Central-difference gradient at ``d = 0``."""
        shifts = h * np.eye(self.dim)
        vals = self.local(base, np.concatenate([shifts, -shifts]))
        return (vals[: self.dim] - vals[self.dim :]) / (2 * h)

    def forward_gradient(self, base: np.ndarray, h: float = FD_STEP) -> np.ndarray:
        shifts = h * np.eye(self.dim)
        vals = self.local(base, np.concatenate([np.zeros((1, self.dim)), shifts]))
        return (vals[1:] - vals[0]) / h


def params_from_unitary(u: np.ndarray) -> np.ndarray:
    """Chart coordinates ``theta`` with ``exp(i sum_j theta_j F_j) = u``.

    ``u`` must have unit determinant; the principal logarithm is used and
    shifted by a multiple of ``2 pi`` on one eigenphase to make it traceless.
    """
    m = u.shape[0]
    # Schur form keeps eigenvectors orthonormal even for degenerate phases
    t, z = schur(u, output="complex")
    phases = np.angle(np.diag(t))
    turns = int(round(phases.sum() / (2 * math.pi)))
    phases[np.argmax(phases) if turns > 0 else np.argmin(phases)] -= 2 * math.pi * turns
    h = (z * phases) @ z.conj().T
    return np.einsum("jab,ba->j", orthonormal_basis(m)[1:], h).real


def _descend(obj: _Objective, theta: np.ndarray, cfg: OptimizerConfig) -> tuple[np.ndarray, float, bool, int]:
    """Gradient descent with Armijo backtracking, re-centering the chart each step.

    Trial steps start from the Barzilai-Borwein length.  Returns the final
    unitary, its value, a convergence flag and the iteration count.
    """
    base = _unitaries(theta[None, :], obj.m)[0]
    f = float(obj.at_unitaries(base[None])[0])
    g = obj.gradient(base)
    t = 1.0
    for it in range(1, cfg.max_iters + 1):
        gg = float(g @ g)
        if gg == 0.0:
            return base, f, True, it
        step_ok = False
        for _ in range(60):
            trial = base @ _unitaries(-t * g[None, :], obj.m)[0]
            f_trial = float(obj.at_unitaries(trial[None])[0])
            if f_trial <= f - 1e-4 * t * gg:
                step_ok = True
                break
            t *= 0.5
        if not step_ok:
            # no descent left at finite-difference resolution
            return base, f, True, it
        g_new = obj.gradient(trial)
        s, y = -t * g, g_new - g
        small = t * math.sqrt(gg) < cfg.step_tol or f - f_trial < cfg.step_tol * 1e-3
        base, f, g = trial, f_trial, g_new
        if small:
            return base, f, True, it
        sy = float(s @ y)
        t = min(max(float(s @ s) / sy, 1e-6), 1e3) if sy > 0 else 1.0
    return base, f, False, cfg.max_iters


def optimize_discord(rho: DensityMatrix, cfg: OptimizerConfig | None = None) -> DiscordEstimate:
    """Multistart local minimization of the measured distance.

    Starting points are uniform in ``[-pi, pi]^(m^2-1)`` drawn from per-restart
    child seeds of ``cfg.seed``.  The computational basis is scored as a
    baseline so the result never exceeds its value.  Ties go to the lowest
    restart index.
    """
    cfg = cfg or OptimizerConfig()
    obj = _Objective(rho)
    comp = MeasurementBasis.computational(rho.m)
    best_theta = np.zeros(obj.dim)
    best_val = measurement_value(rho, comp)
    best_basis, best_restart, best_converged, best_iters = comp, -1, True, 0
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    for idx, child in enumerate(children):
        start = np.random.default_rng(child).uniform(-math.pi, math.pi, obj.dim)
        unitary, _, converged, iters = _descend(obj, start, cfg)
        theta = params_from_unitary(unitary)
        basis = basis_from_params(theta, rho.m)
        value = measurement_value(rho, basis)
        if value < best_val:
            best_theta, best_val, best_basis = theta, value, basis
            best_restart, best_converged, best_iters = idx, converged, iters
    return DiscordEstimate(best_val, best_basis, best_theta, best_restart, best_converged, best_iters)


# -- qubit oracle ---------------------------------------------------------------

_PAULI = np.array(
    [[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=np.complex128
)


def fibonacci_sphere(count: int) -> np.ndarray:
    """``count`` near-uniform unit vectors, shape ``(count, 3)``."""
    k = np.arange(count) + 0.5
    z = 1 - 2 * k / count
    r = np.sqrt(1 - z * z)
    phi = math.pi * (3 - math.sqrt(5)) * k
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def _qubit_values(rho: DensityMatrix, dirs: np.ndarray) -> np.ndarray:
    n = rho.n
    r4 = rho.mat.reshape(2, n, 2, n)
    ns = np.einsum("pi,iab->pab", dirs, _PAULI)
    total = matcore.hs_norm_sq(rho.mat)
    kept = np.zeros(len(dirs))
    for sign in (1.0, -1.0):
        p = 0.5 * (np.eye(2) + sign * ns)
        block = np.einsum("pab,bjcl,pcd->pajdl", p, r4, p)
        kept += np.sum(np.abs(block) ** 2, axis=(1, 2, 3, 4))
    return total - kept


def exhaustive_qubit_scan(rho: DensityMatrix, grid_steps: int = 2000) -> float:
    """Grid search over qubit measurements ``P = (I + n.sigma)/2`` plus one polish.

    Values are computed directly from ``Pi(rho)``, independently of the
    Bloch-form machinery.
    """
    if rho.m != 2:
        raise WrongDimension(f"qubit scan needs m=2, got m={rho.m}")
    dirs = fibonacci_sphere(grid_steps)
    values = _qubit_values(rho, dirs)
    best = int(np.argmin(values))
    x, y, z = dirs[best]

    def polar(angles):
        th, ph = angles
        d = np.array([[math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)]])
        return float(_qubit_values(rho, d)[0])

    start = np.array([math.acos(max(-1.0, min(1.0, z))), math.atan2(y, x)])
    res = minimize(polar, start, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000})
    return float(min(values[best], res.fun))


# -- certification ------------------------------------------------------------------


def certify(rho: DensityMatrix, cfg: OptimizerConfig | None = None) -> CertificationReport:
    """Bracket the discord between the sharp bound and the best measurement found."""
    cfg = cfg or OptimizerConfig()
    lower = sharp_bound(bloch_decompose(rho))
    comp = MeasurementBasis.computational(rho.m)
    comp_value = measurement_value(rho, comp)
    est = optimize_discord(rho, cfg)
    candidates = {"computational": comp_value, "optimizer": est.value}
    upper, basis = (comp_value, comp) if comp_value <= est.value else (est.value, est.basis)
    gap = upper - lower
    if gap < -GAP_SLACK:
        raise BoundViolation(f"measured value {upper!r} is below the lower bound {lower!r}")
    status = Status.CERTIFIED_EXACT if gap <= cfg.exactness_tol else Status.GAP_OPEN
    return CertificationReport(lower, upper, gap, status, basis, candidates, est.converged)
