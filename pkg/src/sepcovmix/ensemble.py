"""Random ensemble: entry distributions for X, construction of Y, S and
S-tilde, and the empirical spectral quantities (resolvent traces, empirical
matrix-valued Stieltjes transforms, per-eigenvalue atom matrices).

Randomness uses counter-based Philox streams keyed by a 64-bit seed, so a
given (distribution, seed, d, n) reproduces X bit-for-bit regardless of how
realizations are scheduled.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionError, DomainError
from .linalg import HermitianEigen
from .model import MixtureModel

__all__ = [
    "EntryDistribution",
    "ComplexGaussian",
    "RealGaussian",
    "Rademacher",
    "ScaledStudentT",
    "SimilarGaussian",
    "distribution_from_name",
    "similar_gaussian_coeffs",
    "sample_X",
    "rng_from_seed",
    "build_Y",
    "sample_covariances",
    "EmpiricalSpectrum",
    "empirical_spectrum",
    "empirical_delta",
    "empirical_trace",
]

_SEED_MASK = (1 << 64) - 1


def rng_from_seed(seed) -> np.random.Generator:
    """Counter-based generator keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=int(seed) & _SEED_MASK))


class EntryDistribution:
    """Law of the iid entries of X: mean 0, E|X|^2 = 1.

    ``second_moment`` is E[X^2] (1 for real laws, 0 for proper complex ones).
    """

    name: str
    second_moment: complex

    def sample(self, rng: np.random.Generator, shape) -> np.ndarray:
        raise NotImplementedError

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return type(self) is type(other) and repr(self) == repr(other)

    def __hash__(self):
        return hash(repr(self))


class ComplexGaussian(EntryDistribution):
    """Standard complex normal CN(0,1): (G1 + i G2)/sqrt(2)."""

    name = "complex-gaussian"
    second_moment = 0.0 + 0.0j

    def sample(self, rng, shape):
        g = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        return g / math.sqrt(2.0)


class RealGaussian(EntryDistribution):
    name = "real-gaussian"
    second_moment = 1.0 + 0.0j

    def sample(self, rng, shape):
        return rng.standard_normal(shape).astype(np.complex128)


class Rademacher(EntryDistribution):
    """Entries +1/-1 with probability 1/2 each; all absolute moments are 1."""

    name = "rademacher"
    second_moment = 1.0 + 0.0j

    def sample(self, rng, shape):
        return (2.0 * rng.integers(0, 2, size=shape) - 1.0).astype(np.complex128)


class ScaledStudentT(EntryDistribution):
    """Student-t entries divided by sqrt(dof/(dof-2)) so the variance is 1.

    dof >= 7 is required so that sixth moments exist.
    """

    second_moment = 1.0 + 0.0j

    def __init__(self, dof: int = 7):
        if dof < 7:
            raise DomainError(
                f"ScaledStudentT requires dof >= 7 (finite sixth moment), got {dof}"
            )
        self.dof = int(dof)
        self.name = f"student-t{self.dof}"

    def sample(self, rng, shape):
        scale = math.sqrt(self.dof / (self.dof - 2.0))
        return (rng.standard_t(self.dof, size=shape) / scale).astype(np.complex128)


def similar_gaussian_coeffs(e_x2):
    """Coefficients (a, b) of the moment-matched Gaussian: a^2 = E[X^2],
    |a|^2 + |b|^2 = 1, with a the principal square root and b real >= 0."""
    e_x2 = complex(e_x2)
    if abs(e_x2) > 1.0 + 1e-12:
        raise DomainError(f"|E[X^2]| must be <= 1, got {abs(e_x2)}")
    a = cmath.sqrt(e_x2)
    b = math.sqrt(max(0.0, 1.0 - abs(e_x2)))
    return a, b


class SimilarGaussian(EntryDistribution):
    """Gaussian law matching the first and second entry moments of a base law:
    Z = a U + b V with U ~ N(0,1), V ~ CN(0,1) independent."""

    def __init__(self, base: EntryDistribution):
        self.base = base
        self.a, self.b = similar_gaussian_coeffs(base.second_moment)
        self.second_moment = base.second_moment
        self.name = f"similar({base.name})"

    def sample(self, rng, shape):
        u = rng.standard_normal(shape)
        v = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)
        return self.a * u + self.b * v


def distribution_from_name(name: str) -> EntryDistribution:
    name = name.strip().lower()
    if name.startswith("similar(") and name.endswith(")"):
        return SimilarGaussian(distribution_from_name(name[8:-1]))
    if name in ("complex-gaussian", "cgauss"):
        return ComplexGaussian()
    if name in ("real-gaussian", "rgauss"):
        return RealGaussian()
    if name == "rademacher":
        return Rademacher()
    if name.startswith("student-t"):
        return ScaledStudentT(int(name[len("student-t"):]))
    raise ValueError(f"unknown entry distribution {name!r}")


def sample_X(d: int, n: int, dist: EntryDistribution, seed) -> np.ndarray:
    """Draw the (d x n) matrix X with iid entries from dist, keyed by seed."""
    if d < 1 or n < 1:
        raise DimensionError(f"need d, n >= 1, got d={d}, n={n}")
    return np.ascontiguousarray(
        dist.sample(rng_from_seed(seed), (d, n)).astype(np.complex128)
    )


def build_Y(m: MixtureModel, X) -> np.ndarray:
    """Y = sum_r A_r X B_r."""
    X = np.asarray(X, dtype=np.complex128)
    if X.shape != (m.d, m.n):
        raise DimensionError(f"X must be {m.d}x{m.n}, got {X.shape}")
    y = np.zeros((m.d, m.n), dtype=np.complex128)
    for a, b in zip(m.A, m.B):
        y += a @ X @ b
    return y


def sample_covariances(Y):
    """S = (1/n) Y Y* and S~ = (1/n) Y* Y, both Hermitian-symmetrized."""
    Y = np.asarray(Y, dtype=np.complex128)
    n = Y.shape[1]
    s = linalg.symmetrize(Y @ Y.conj().T / n)
    s_tilde = linalg.symmetrize(Y.conj().T @ Y / n)
    return s, s_tilde


@dataclass(frozen=True)
class EmpiricalSpectrum:
    """Eigenvalues of S (side A) or S~ (side B) with their (R x R) atom
    matrices; the atoms sum to the Gram matrix of that side."""

    side: str
    eigenvalues: np.ndarray  # descending, length d (A) or n (B)
    atom_matrices: np.ndarray  # shape (len(eigenvalues), R, R), Hermitian PSD

    def delta_at(self, z) -> np.ndarray:
        """Reconstruct the empirical matrix Stieltjes transform sum_j atom_j/(lambda_j - z)."""
        if np.imag(z) <= 0:
            raise DomainError(f"requires Im(z) > 0, got z = {z}")
        weights = 1.0 / (self.eigenvalues - z)
        return np.einsum("jrs,j->rs", self.atom_matrices, weights)


def empirical_spectrum(m: MixtureModel, eig: HermitianEigen, side) -> EmpiricalSpectrum:
    """Atoms of the empirical matrix-valued measure from an eigendecomposition
    of S (side A) or S~ (side B).

    Atoms are W* W contractions of transformed eigenvectors, so they are
    positive semi-definite by construction.
    """
    u = eig.eigenvectors
    if side == "A":
        if eig.size != m.d:
            raise DimensionError(f"side A expects a {m.d}-dim decomposition, got {eig.size}")
        c = np.stack([a.conj().T @ u for a in m.A])  # c[r,:,j] = A_r* u_j
        atoms = np.einsum("rkj,skj->jrs", c.conj(), c) / m.n
    elif side == "B":
        if eig.size != m.n:
            raise DimensionError(f"side B expects a {m.n}-dim decomposition, got {eig.size}")
        c = np.stack([b @ u for b in m.B])  # c[r,:,j] = B_r u~_j
        atoms = np.einsum("skj,rkj->jrs", c.conj(), c) / m.n
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return EmpiricalSpectrum(side=side, eigenvalues=eig.eigenvalues.copy(), atom_matrices=atoms)


def _resolvent_matrix(eig: HermitianEigen, z) -> np.ndarray:
    if np.imag(z) <= 0:
        raise DomainError(f"resolvent requires Im(z) > 0, got z = {z}")
    u = eig.eigenvectors
    return (u / (eig.eigenvalues - z)) @ u.conj().T


def empirical_delta(m: MixtureModel, eig: HermitianEigen, z, side) -> np.ndarray:
    """Empirical matrix Stieltjes transform (1/n) tr(A_r A_s* R(z)) resp.
    (1/n) tr(B_s* B_r R~(z)), computed through the eigendecomposition."""
    rz = _resolvent_matrix(eig, z)
    if side == "A":
        if eig.size != m.d:
            raise DimensionError(f"side A expects a {m.d}-dim decomposition, got {eig.size}")
        pair = m.pair_products_A()
    elif side == "B":
        if eig.size != m.n:
            raise DimensionError(f"side B expects a {m.n}-dim decomposition, got {eig.size}")
        pair = m.pair_products_B()
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return np.einsum("rsik,ki->rs", pair, rz) / m.n


def empirical_trace(m: MixtureModel, eig: HermitianEigen, z, M, side) -> complex:
    """(1/n) tr(M R(z)) on side A or (1/n) tr(M~ R~(z)) on side B."""
    M = np.asarray(M, dtype=np.complex128)
    expected = m.d if side == "A" else m.n
    if side not in ("A", "B"):
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    if M.shape != (expected, expected):
        raise DimensionError(f"side {side} test matrix must be {expected}x{expected}, got {M.shape}")
    if eig.size != expected:
        raise DimensionError(f"side {side} expects a {expected}-dim decomposition, got {eig.size}")
    rz = _resolvent_matrix(eig, z)
    return complex(np.einsum("ik,ki->", M, rz) / m.n)
