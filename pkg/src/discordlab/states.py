"""Bipartite states, local measurements, operator bases and Bloch forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.stats import unitary_group

from . import matcore
from .errors import (
    AlphaOutOfRange,
    DimensionMismatch,
    InvalidDimension,
    InvalidMeasurement,
    InvalidRank,
    InvalidState,
    NotHermitian,
    ReconstructionNotPSD,
)

STATE_TOL = 1e-10
MEASUREMENT_TOL = 1e-10
RECONSTRUCT_PSD_TOL = 1e-8
ALPHA_MIN, ALPHA_MAX = 2.0, 5.0


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DensityMatrix:
    """A validated state on ``C^m (x) C^n``.

    ``mat`` is Hermitian to 1e-10, has unit trace to 1e-10 and no eigenvalue
    below -1e-10.  The stored matrix is the symmetrized input.
    """

    m: int
    n: int
    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise InvalidDimension(f"subsystem dimensions must be positive, got {self.m}, {self.n}")
        mat = matcore.as_matrix(self.mat)
        d = self.m * self.n
        if mat.shape != (d, d):
            raise DimensionMismatch(f"expected {d}x{d} for a {self.m}x{self.n} system, got {mat.shape}")
        try:
            mat = matcore.hermitize(mat, STATE_TOL)
        except NotHermitian as exc:
            raise InvalidState(str(exc)) from None
        tr = np.trace(mat).real
        if abs(tr - 1.0) > STATE_TOL:
            raise InvalidState(f"trace {tr!r} differs from 1")
        lo = np.linalg.eigvalsh(mat)[0]
        if lo < -STATE_TOL:
            raise InvalidState(f"minimum eigenvalue {lo:.3e} is negative")
        object.__setattr__(self, "mat", _frozen(mat))

    @property
    def dim(self) -> int:
        return self.m * self.n

    def purity(self) -> float:
        return matcore.hs_norm_sq(self.mat)

    def marginal(self, keep: str = "A") -> np.ndarray:
        return matcore.partial_trace(self.mat, self.m, self.n, keep)

    def conjugate(self, u_a, u_b) -> "DensityMatrix":
        """Return ``(U_A (x) U_B) rho (U_A (x) U_B)^H``."""
        u = np.kron(u_a, u_b)
        return DensityMatrix(self.m, self.n, u @ self.mat @ u.conj().T)


@dataclass(frozen=True)
class MeasurementBasis:
    """Rank-one von Neumann measurement on subsystem A.

    ``projectors`` has shape ``(m, m, m)``; ``projectors[k]`` is ``P_k``.
    """

    m: int
    projectors: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.asarray(self.projectors, dtype=np.complex128)
        m = self.m
        if p.shape != (m, m, m):
            raise DimensionMismatch(f"expected {m} projectors of size {m}x{m}, got shape {p.shape}")
        eye = np.eye(m)
        products = np.einsum("kab,lbc->klac", p, p)
        for k in range(m):
            if np.max(np.abs(p[k] - p[k].conj().T)) > MEASUREMENT_TOL:
                raise InvalidMeasurement(f"projector {k} is not Hermitian")
            if abs(np.trace(p[k]) - 1) > MEASUREMENT_TOL:
                raise InvalidMeasurement(f"projector {k} does not have unit trace")
            for l in range(m):
                target = p[k] if k == l else 0.0
                if np.max(np.abs(products[k, l] - target)) > MEASUREMENT_TOL:
                    raise InvalidMeasurement(f"P_{k} P_{l} violates orthogonal idempotence")
        if np.max(np.abs(p.sum(axis=0) - eye)) > MEASUREMENT_TOL:
            raise InvalidMeasurement("projectors do not resolve the identity")
        object.__setattr__(self, "projectors", _frozen(p))

    @classmethod
    def from_unitary(cls, u) -> "MeasurementBasis":
        """Projectors onto the columns of ``u``."""
        u = np.asarray(u, dtype=np.complex128)
        return cls(u.shape[0], np.einsum("ak,bk->kab", u, u.conj()))

    @classmethod
    def computational(cls, m: int) -> "MeasurementBasis":
        return cls.from_unitary(np.eye(m))


@lru_cache(maxsize=None)
def _basis_array(d: int) -> np.ndarray:
    mats = [np.eye(d, dtype=np.complex128) / np.sqrt(d)]
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    for j, k in pairs:
        e = np.zeros((d, d), dtype=np.complex128)
        e[j, k] = e[k, j] = 1 / np.sqrt(2)
        mats.append(e)
    for j, k in pairs:
        e = np.zeros((d, d), dtype=np.complex128)
        e[j, k] = -1j / np.sqrt(2)
        e[k, j] = 1j / np.sqrt(2)
        mats.append(e)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.diag(diag / np.sqrt(l * (l + 1))).astype(np.complex128))
    out = np.array(mats)
    out.setflags(write=False)
    return out


def orthonormal_basis(d: int) -> np.ndarray:
    """Hilbert-Schmidt orthonormal Hermitian basis of ``d x d`` matrices.

    Returns an array of shape ``(d*d, d, d)``.  Element 0 is ``I/sqrt(d)``;
    the rest are generalized Gell-Mann matrices scaled to unit norm, ordered
    symmetric off-diagonal, antisymmetric off-diagonal, then diagonal.  For
    ``d = 2`` this is ``(I, X, Y, Z)/sqrt(2)``.
    """
    if d < 2:
        raise InvalidDimension(f"basis dimension must be >= 2, got {d}")
    return _basis_array(d)


@dataclass(frozen=True)
class BlochForm:
    """Coefficients ``C[i, j] = tr(rho (F_i (x) G_j))`` in the product basis."""

    m: int
    n: int
    C: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.C, dtype=float)
        if c.shape != (self.m**2, self.n**2):
            raise DimensionMismatch(f"expected C of shape {(self.m**2, self.n**2)}, got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("correlation matrix has non-finite entries")
        c.setflags(write=False)
        object.__setattr__(self, "C", c)

    @property
    def local_a(self) -> np.ndarray:
        return self.C[1:, 0]

    @property
    def local_b(self) -> np.ndarray:
        return self.C[0, 1:]

    @property
    def correlations(self) -> np.ndarray:
        return self.C[1:, 1:]

    def gram(self) -> np.ndarray:
        """``C C^t``, the matrix whose spectrum feeds the discord bounds."""
        return self.C @ self.C.T


def bloch_decompose(rho: DensityMatrix) -> BlochForm:
    m, n = rho.m, rho.n
    f, g = orthonormal_basis(m), orthonormal_basis(n)
    r4 = rho.mat.reshape(m, n, m, n)
    c = np.einsum("abcd,ica,jdb->ij", r4, f, g)
    residue = np.max(np.abs(c.imag))
    if residue > 1e-12:
        raise InvalidState(f"correlation matrix has imaginary residue {residue:.3e}")
    return BlochForm(m, n, c.real)


def bloch_reconstruct(b: BlochForm) -> DensityMatrix:
    m, n = b.m, b.n
    f, g = orthonormal_basis(m), orthonormal_basis(n)
    mat = np.einsum("ij,iac,jbd->abcd", b.C, f, g).reshape(m * n, m * n)
    lo = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))[0]
    if lo < -RECONSTRUCT_PSD_TOL:
        raise ReconstructionNotPSD(f"reconstructed operator has eigenvalue {lo:.3e}")
    return DensityMatrix(m, n, mat)


@dataclass(frozen=True)
class HorodeckiFamilyPoint:
    alpha: float
    state: DensityMatrix


def horodecki_matrix(alpha: float) -> np.ndarray:
    """Unvalidated ``9 x 9`` matrix of the one-parameter 3x3 family.

    ``(2/7) P_+ + (alpha/7) s_+ + ((5 - alpha)/7) s_-`` where ``P_+`` projects
    on ``sum_i |ii>/sqrt(3)``, ``s_+`` is uniform on ``|01>, |12>, |20>`` and
    ``s_-`` uniform on ``|10>, |21>, |02>``.
    """
    rho = np.zeros((9, 9), dtype=np.complex128)
    diag_idx = [0, 4, 8]
    rho[np.ix_(diag_idx, diag_idx)] = 2.0 / 21.0
    for a, b in ((0, 1), (1, 2), (2, 0)):
        rho[3 * a + b, 3 * a + b] = alpha / 21.0
        rho[3 * b + a, 3 * b + a] = (5.0 - alpha) / 21.0
    return rho


def horodecki_state(alpha: float) -> HorodeckiFamilyPoint:
    alpha = float(alpha)
    if not ALPHA_MIN <= alpha <= ALPHA_MAX:
        raise AlphaOutOfRange(f"alpha={alpha} outside [{ALPHA_MIN}, {ALPHA_MAX}]")
    return HorodeckiFamilyPoint(alpha, DensityMatrix(3, 3, horodecki_matrix(alpha)))


def max_entangled(d: int) -> DensityMatrix:
    if d < 2:
        raise InvalidDimension(f"dimension must be >= 2, got {d}")
    psi = np.eye(d).reshape(d * d) / np.sqrt(d)
    return DensityMatrix(d, d, np.outer(psi, psi))


def random_density(m: int, n: int, rank: int, seed: int) -> DensityMatrix:
    """Induced-measure random state ``G G^H / tr(G G^H)``, ``G`` complex Gaussian."""
    d = m * n
    if not 1 <= rank <= d:
        raise InvalidRank(f"rank must lie in [1, {d}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return DensityMatrix(m, n, rho / np.trace(rho).real)


def random_cq(m: int, n: int, seed: int) -> tuple[DensityMatrix, MeasurementBasis]:
    """Random classical-quantum state and the A-basis it is diagonal in."""
    rng = np.random.default_rng(seed)
    u = unitary_group.rvs(m, random_state=rng) if m > 1 else np.eye(1)
    probs = rng.dirichlet(np.ones(m))
    basis = MeasurementBasis.from_unitary(u)
    rho = np.zeros((m * n, m * n), dtype=np.complex128)
    for k in range(m):
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        sigma = g @ g.conj().T
        rho += probs[k] * np.kron(basis.projectors[k], sigma / np.trace(sigma).real)
    return DensityMatrix(m, n, rho), basis


def random_local_unitaries(m: int, n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    return unitary_group.rvs(m, random_state=rng), unitary_group.rvs(n, random_state=rng)
