"""The three benchmark models used throughout the simulation study, plus the
randomized ingredients they need (Haar unitaries, uniform permutations).

Example 1 ("covariance-mixture"): d = 5n, R = 2, complementary diagonal
projectors on the B side and two non-commuting covariance factors on the A
side, complex Gaussian entries.

Example 2 ("moving-average"): d = n, shift matrices B_r with ones on the
(r-1)-th superdiagonal, Haar-rotated damping profiles A_r, Rademacher
entries. The columns of Y form a moving average process.

Example 3 ("permutation-mixture"): d = 2n, uniformly random permutation
matrices on both sides, scaled Student-t(7) entries.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .ensemble import (
    ComplexGaussian,
    EntryDistribution,
    Rademacher,
    ScaledStudentT,
    rng_from_seed,
)
from .errors import DomainError
from .model import MixtureModel

__all__ = [
    "ExampleSpec",
    "build_example",
    "haar_unitary",
    "random_permutation_matrix",
    "dft_matrix",
    "model_from_generator",
    "matrix_from_generator",
    "EXAMPLE_KINDS",
]

EXAMPLE_KINDS = ("covariance-mixture", "moving-average", "permutation-mixture")

_NAME_ALIASES = {
    "example1": "covariance-mixture",
    "example2": "moving-average",
    "example3": "permutation-mixture",
}


@dataclass(frozen=True)
class ExampleSpec:
    """Which benchmark model to build, at what sample dimension, which seed
    for the randomized ingredients."""

    kind: str
    n: int
    R: int | None = None
    seed: int = 0

    def __post_init__(self):
        kind = _NAME_ALIASES.get(self.kind, self.kind)
        object.__setattr__(self, "kind", kind)
        if kind not in EXAMPLE_KINDS:
            raise ValueError(f"unknown example kind {self.kind!r}")
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")

    def resolved_R(self) -> int:
        if self.kind == "covariance-mixture":
            if self.R not in (None, 2):
                raise DomainError("covariance-mixture forces R = 2")
            return 2
        r = 4 if self.R is None else self.R
        if r < 1:
            raise DomainError(f"R must be >= 1, got {r}")
        if self.kind == "moving-average" and r > self.n:
            raise DomainError(f"moving-average requires R <= n, got R={r}, n={self.n}")
        return r

    def with_n(self, n: int) -> "ExampleSpec":
        return replace(self, n=n)


def _rng(seed_or_rng):
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return rng_from_seed(seed_or_rng)


def haar_unitary(dim: int, seed) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix with the
    R-diagonal phase correction (each Q column divided by the phase of the
    matching R diagonal entry)."""
    rng = _rng(seed)
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r).copy()
    diag[diag == 0] = 1.0
    return q / (diag / np.abs(diag))


def random_permutation_matrix(dim: int, seed) -> np.ndarray:
    """Uniformly random 0/1 permutation matrix (Fisher-Yates shuffle)."""
    rng = _rng(seed)
    perm = rng.permutation(dim)
    mat = np.zeros((dim, dim), dtype=np.complex128)
    mat[np.arange(dim), perm] = 1.0
    return mat


def dft_matrix(dim: int) -> np.ndarray:
    """V[k,l] = exp(-2 pi i k l / dim) / sqrt(dim), zero-based indices."""
    k = np.arange(dim)
    return np.exp(-2j * np.pi * np.outer(k, k) / dim) / np.sqrt(dim)


def _covariance_mixture(n: int):
    d = 5 * n
    half_n = -(-n // 2)  # ceil
    half_d = -(-d // 2)
    b1 = np.diag(np.r_[np.ones(half_n), np.zeros(n - half_n)]).astype(np.complex128)
    b2 = np.diag(np.r_[np.zeros(half_n), np.ones(n - half_n)]).astype(np.complex128)
    a1 = np.diag(np.r_[np.full(half_d, 1.0 / 3.0), np.zeros(d - half_d)]).astype(np.complex128)
    a2 = dft_matrix(d) @ np.diag(np.r_[np.full(half_d, 0.5), np.ones(d - half_d)])
    model = MixtureModel([a1, a2], [b1, b2])
    m_test = np.eye(d, dtype=np.complex128)
    mt_test = np.ones((n, n), dtype=np.complex128) / np.sqrt(n)
    return model, m_test, mt_test, ComplexGaussian()


def _moving_average(n: int, R: int, rng):
    d = n
    profile = np.diag(np.arange(1, d + 1) / d).astype(np.complex128)
    A = [np.eye(d, dtype=np.complex128)]
    A += [haar_unitary(d, rng) @ profile for _ in range(R - 1)]
    B = [np.eye(n, k=r, dtype=np.complex128) for r in range(R)]
    model = MixtureModel(A, B)
    m_test = profile.copy()
    half = n // 2
    mt_test = np.diag(np.r_[np.ones(half), np.zeros(n - half)]).astype(np.complex128)
    return model, m_test, mt_test, Rademacher()


def _permutation_mixture(n: int, R: int, rng):
    d = 2 * n
    A = [random_permutation_matrix(d, rng) for _ in range(R)]
    B = [random_permutation_matrix(n, rng) for _ in range(R)]
    model = MixtureModel(A, B)
    m_test = np.zeros((d, d), dtype=np.complex128)
    m_test[0, 0] = 1.0
    mt_test = B[0].copy()
    return model, m_test, mt_test, ScaledStudentT(7)


def build_example(spec: ExampleSpec):
    """Build (model, M, M_tilde, entry distribution) for a benchmark spec."""
    R = spec.resolved_R()
    rng = rng_from_seed(spec.seed)
    if spec.kind == "covariance-mixture":
        return _covariance_mixture(spec.n)
    if spec.kind == "moving-average":
        return _moving_average(spec.n, R, rng)
    return _permutation_mixture(spec.n, R, rng)


# --- JSON generator hooks ----------------------------------------------------


def model_from_generator(payload) -> MixtureModel:
    name = payload.get("name", "")
    params = payload.get("params", {})
    seed = int(payload.get("seed", 0))
    if _NAME_ALIASES.get(name, name) in EXAMPLE_KINDS:
        spec = ExampleSpec(
            kind=name, n=int(params["n"]), R=params.get("R"), seed=seed
        )
        return build_example(spec)[0]
    raise ValueError(f"unknown model generator {name!r}")


def matrix_from_generator(payload, dim=None) -> np.ndarray:
    name = payload.get("name", "")
    params = payload.get("params", {})
    seed = int(payload.get("seed", 0))
    size = int(params.get("dim", dim or 0))
    if size < 1:
        raise ValueError("matrix generator needs a positive 'dim' parameter")
    if name == "haar":
        return haar_unitary(size, seed)
    if name == "permutation":
        return random_permutation_matrix(size, seed)
    if name == "dft":
        return dft_matrix(size)
    raise ValueError(f"unknown matrix generator {name!r}")
