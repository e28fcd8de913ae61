"""Dense complex-matrix kernels shared by every other module.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Composite
indices are A-major: row ``(i_A, i_B)`` of an ``m*n`` bipartite operator is
``i_A * n + i_B``, so ``rho.reshape(m, n, m, n)[i, k, j, l]`` is the entry
``((i, k), (j, l))``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotSquare

HERMITIAN_TOL = 1e-10


class EigenResult(NamedTuple):
    """Spectral decomposition with eigenvalues sorted descending.

    Column ``k`` of ``vectors`` belongs to ``values[k]``.
    """

    values: np.ndarray
    vectors: np.ndarray


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a finite 2-D complex array."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def _require_square(a: np.ndarray) -> None:
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"matrix is {a.shape[0]}x{a.shape[1]}")


def _require_bipartite(rho: np.ndarray, m: int, n: int) -> None:
    if rho.shape != (m * n, m * n):
        raise DimensionMismatch(
            f"expected a {m * n}x{m * n} matrix for a {m}x{n} system, got {rho.shape}"
        )


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def hermitize(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Check Hermiticity to ``tol`` (max-abs entry) and return ``(a + a^H) / 2``."""
    a = as_matrix(a)
    _require_square(a)
    err = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if err > tol:
        raise NotHermitian(f"max |a - a^H| = {err:.3e} exceeds {tol:.0e}")
    return 0.5 * (a + a.conj().T)


def hermitian_eig(a) -> EigenResult:
    """Full eigendecomposition of a Hermitian matrix, values descending."""
    h = hermitize(a)
    values, vectors = np.linalg.eigh(h)
    return EigenResult(values[::-1].copy(), vectors[:, ::-1].copy())


def hermitian_eigvals(a) -> np.ndarray:
    """Descending eigenvalues only; same validation as :func:`hermitian_eig`."""
    return np.linalg.eigvalsh(hermitize(a))[::-1].copy()


def singular_values(a) -> np.ndarray:
    # numpy already returns them non-negative and descending
    return np.linalg.svd(as_matrix(a), compute_uv=False)


def trace_norm(a) -> float:
    return float(np.sum(singular_values(a)))


def hs_norm_sq(a) -> float:
    """Squared Hilbert-Schmidt (Frobenius) norm."""
    a = np.asarray(a)
    return float(np.sum(a.real**2 + a.imag**2))


def partial_trace(rho, m: int, n: int, keep: str = "A") -> np.ndarray:
    """Reduced operator of subsystem ``keep`` ("A" or "B")."""
    rho = as_matrix(rho)
    _require_bipartite(rho, m, n)
    r = rho.reshape(m, n, m, n)
    if keep == "A":
        return np.einsum("ikjk->ij", r)
    if keep == "B":
        return np.einsum("kikj->ij", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_transpose(rho, m: int, n: int) -> np.ndarray:
    """Transpose on B: entry ``((i,k),(j,l))`` takes the value at ``((i,l),(j,k))``."""
    rho = as_matrix(rho)
    _require_bipartite(rho, m, n)
    return rho.reshape(m, n, m, n).transpose(0, 3, 2, 1).reshape(m * n, m * n)


def realign(rho, m: int, n: int) -> np.ndarray:
    """Realigned ``m^2 x n^2`` matrix, entry ``((i,j),(k,l)) = rho((i,k),(j,l))``."""
    rho = as_matrix(rho)
    _require_bipartite(rho, m, n)
    return rho.reshape(m, n, m, n).transpose(0, 2, 1, 3).reshape(m * m, n * n)


def unrealign(r, m: int, n: int) -> np.ndarray:
    """Inverse of :func:`realign`."""
    r = as_matrix(r)
    if r.shape != (m * m, n * n):
        raise DimensionMismatch(f"expected a {m * m}x{n * n} matrix, got {r.shape}")
    return r.reshape(m, m, n, n).transpose(0, 2, 1, 3).reshape(m * n, m * n)
