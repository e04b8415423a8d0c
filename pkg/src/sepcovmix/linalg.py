"""Dense complex matrix services: Hermitian eigendecompositions with a fixed
descending eigenvalue ordering, resolvent-style shifted solves, norms.

All functions accept array-likes and work on complex128 copies. Eigenvalues
are always returned in non-increasing order and every Hermitian input is
replaced by (H + H*)/2 before decomposition to suppress roundoff asymmetry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, NumericError

__all__ = [
    "HermitianEigen",
    "hermitian_eig",
    "solve_shifted",
    "resolvent_apply",
    "spectral_norm",
    "min_eigenvalue_hermitian",
    "symmetrize",
]


@dataclass(frozen=True)
class HermitianEigen:
    """Eigendecomposition H = U diag(w) U* with w sorted descending."""

    eigenvalues: np.ndarray  # real, shape (N,), w[0] >= ... >= w[N-1]
    eigenvectors: np.ndarray  # unitary, column j pairs with eigenvalues[j]

    @property
    def size(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def _as_square(h) -> np.ndarray:
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {h.shape}")
    return h


def symmetrize(h) -> np.ndarray:
    """Return the Hermitian part (H + H*)/2 of a square matrix."""
    h = _as_square(h)
    return 0.5 * (h + h.conj().T)


def hermitian_eig(h) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""
    h = symmetrize(h)
    try:
        w, u = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"eigensolver failed to converge on a {h.shape[0]}x{h.shape[0]} matrix"
        ) from exc
    return HermitianEigen(eigenvalues=w[::-1].copy(), eigenvectors=u[:, ::-1].copy())


def resolvent_apply(eig: HermitianEigen, z: complex, v) -> np.ndarray:
    """Compute (H - z Id)^{-1} V from a precomputed eigendecomposition."""
    if np.imag(z) <= 0:
        raise DomainError(f"resolvent requires Im(z) > 0, got z = {z}")
    v = np.asarray(v, dtype=np.complex128)
    if v.shape[0] != eig.size:
        raise DimensionError(
            f"right-hand side has {v.shape[0]} rows, expected {eig.size}"
        )
    u = eig.eigenvectors
    coeff = u.conj().T @ v
    coeff /= (eig.eigenvalues - z)[:, None] if v.ndim == 2 else (eig.eigenvalues - z)
    return u @ coeff


def solve_shifted(h, z: complex, v) -> np.ndarray:
    """Solve (H - z Id) W = V for Hermitian H and z in the upper half-plane.

    One eigendecomposition per call; use :func:`resolvent_apply` directly when
    evaluating many z-points against the same matrix.
    """
    if np.imag(z) <= 0:
        raise DomainError(f"resolvent requires Im(z) > 0, got z = {z}")
    return resolvent_apply(hermitian_eig(h), z, v)


def spectral_norm(m) -> float:
    """Largest singular value."""
    m = np.asarray(m, dtype=np.complex128)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def min_eigenvalue_hermitian(h) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    h = symmetrize(h)
    try:
        w = np.linalg.eigvalsh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"eigensolver failed to converge on a {h.shape[0]}x{h.shape[0]} matrix"
        ) from exc
    return float(w[0])
