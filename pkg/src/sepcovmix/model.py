"""The deterministic mixture model: two families (A_r) of (d x d) and (B_r)
of (n x n) matrices entering Y = sum_r A_r X B_r, together with the
admissibility report (norm constants, Gram matrices, minimal eigenvalues).

A model is admissible when all four non-degeneracy / identifiability minima
are strictly positive. The report never throws on a failing check; it only
records the numbers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimensionError

__all__ = [
    "MixtureModel",
    "AssumptionReport",
    "gram_matrices",
    "check_assumptions",
    "load_model_spec",
    "model_to_spec",
    "matrix_to_json",
]


class MixtureModel:
    """Immutable container for the families (A_r)_{r<=R} and (B_r)_{r<=R}."""

    def __init__(self, A, B):
        A = [np.array(a, dtype=np.complex128) for a in A]
        B = [np.array(b, dtype=np.complex128) for b in B]
        if len(A) == 0 or len(A) != len(B):
            raise DimensionError(
                f"need equally many A and B matrices, got {len(A)} and {len(B)}"
            )
        d = A[0].shape[0]
        n = B[0].shape[0]
        for a in A:
            if a.shape != (d, d):
                raise DimensionError(f"every A_r must be {d}x{d}, got {a.shape}")
        for b in B:
            if b.shape != (n, n):
                raise DimensionError(f"every B_r must be {n}x{n}, got {b.shape}")
        for mats, name in ((A, "A"), (B, "B")):
            for r, m in enumerate(mats):
                if not np.all(np.isfinite(m.view(np.float64))):
                    raise DimensionError(f"{name}_{r + 1} contains non-finite entries")
        self.A = tuple(a for a in A)
        self.B = tuple(b for b in B)
        for m in self.A + self.B:
            m.setflags(write=False)
        self.d = d
        self.n = n
        self.R = len(A)
        self._pair_A = None
        self._pair_B = None

    def pair_products_A(self) -> np.ndarray:
        """Array of shape (R, R, d, d) with entry [r, s] = A_r A_s*."""
        if self._pair_A is None:
            stacked = np.stack(self.A)
            self._pair_A = np.einsum("rij,skj->rsik", stacked, stacked.conj())
        return self._pair_A

    def pair_products_B(self) -> np.ndarray:
        """Array of shape (R, R, n, n) with entry [r, s] = B_s* B_r."""
        if self._pair_B is None:
            stacked = np.stack(self.B)
            self._pair_B = np.einsum("ski,rkj->rsij", stacked.conj(), stacked)
        return self._pair_B

    def __repr__(self):
        return f"MixtureModel(d={self.d}, n={self.n}, R={self.R})"


@dataclass(frozen=True)
class AssumptionReport:
    """Constants and minimal eigenvalues entering the model assumptions.

    ``tau_raw`` is the unclamped minimum of the four lambda_min values; any
    tau <= min(tau_raw, 1 - eps) is a valid non-degeneracy constant. The
    model is admissible iff tau_raw > 0.
    """

    c_star: float
    sigma_sq: float
    lam_min_AA: float
    lam_min_BB: float
    lam_min_gram_A: float
    lam_min_gram_B: float
    tau_raw: float
    gram_A: np.ndarray = field(repr=False)
    gram_B: np.ndarray = field(repr=False)

    @property
    def admissible(self) -> bool:
        return self.tau_raw > 0.0

    def to_dict(self) -> dict:
        return {
            "c_star": self.c_star,
            "sigma_sq": self.sigma_sq,
            "lam_min_AA": self.lam_min_AA,
            "lam_min_BB": self.lam_min_BB,
            "lam_min_gram_A": self.lam_min_gram_A,
            "lam_min_gram_B": self.lam_min_gram_B,
            "tau_raw": self.tau_raw,
            "admissible": self.admissible,
            "gram_A": matrix_to_json(self.gram_A)["dense"],
            "gram_B": matrix_to_json(self.gram_B)["dense"],
        }


def gram_matrices(m: MixtureModel):
    """The (R x R) Gram matrices G^A_{rs} = tr(A_r A_s*)/n, G^B_{rs} = tr(B_s* B_r)/n."""
    ga = np.empty((m.R, m.R), dtype=np.complex128)
    gb = np.empty((m.R, m.R), dtype=np.complex128)
    for r in range(m.R):
        for s in range(m.R):
            ga[r, s] = np.vdot(m.A[s], m.A[r]) / m.n  # tr(A_r A_s*)
            gb[r, s] = np.vdot(m.B[s], m.B[r]) / m.n  # tr(B_s* B_r)
    return ga, gb


def check_assumptions(m: MixtureModel) -> AssumptionReport:
    """Evaluate all admissibility constants of the model by direct eigensolves."""
    c_star = max(m.d / m.n, 1.0)
    sum_a = sum(linalg.spectral_norm(a) ** 2 for a in m.A)
    sum_b = sum(linalg.spectral_norm(b) ** 2 for b in m.B)
    sigma_sq = max(sum_a, sum_b, 1.0)

    aa = sum(a @ a.conj().T for a in m.A)
    bb = sum(b.conj().T @ b for b in m.B)
    lam_aa = linalg.min_eigenvalue_hermitian(aa)
    lam_bb = linalg.min_eigenvalue_hermitian(bb)

    ga, gb = gram_matrices(m)
    lam_ga = linalg.min_eigenvalue_hermitian(ga)
    lam_gb = linalg.min_eigenvalue_hermitian(gb)

    return AssumptionReport(
        c_star=c_star,
        sigma_sq=sigma_sq,
        lam_min_AA=lam_aa,
        lam_min_BB=lam_bb,
        lam_min_gram_A=lam_ga,
        lam_min_gram_B=lam_gb,
        tau_raw=min(lam_aa, lam_bb, lam_ga, lam_gb),
        gram_A=ga,
        gram_B=gb,
    )


# --- JSON model-spec format -------------------------------------------------
#
# { "d": int, "n": int, "R": int, "A": [matrix, ...], "B": [matrix, ...] }
# where a matrix is one of
#   {"dense": [[[re, im], ...], ...]}        row-major
#   {"diag": [[re, im], ...]}
#   {"permutation": [j_0, j_1, ...]}         row i has its one at column j_i
#   {"generator": {"name": ..., "params": {...}, "seed": int}}
# A whole-model shortcut {"generator": {"name": "example1|example2|example3",
# "params": {"n": ..., "R": ...}, "seed": ...}} is also accepted at top level.
# Complex numbers are [re, im] pairs of IEEE doubles.


def _complex_from_pair(p):
    return complex(float(p[0]), float(p[1]))


def matrix_from_json(obj, dim=None) -> np.ndarray:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError(f"matrix entry must be a single-key object, got {obj!r}")
    (kind, payload), = obj.items()
    if kind == "dense":
        rows = [[_complex_from_pair(p) for p in row] for row in payload]
        return np.array(rows, dtype=np.complex128)
    if kind == "diag":
        return np.diag([_complex_from_pair(p) for p in payload]).astype(np.complex128)
    if kind == "permutation":
        perm = [int(j) for j in payload]
        if sorted(perm) != list(range(len(perm))):
            raise ValueError("'permutation' must be a permutation of 0..dim-1")
        mat = np.zeros((len(perm), len(perm)), dtype=np.complex128)
        mat[np.arange(len(perm)), perm] = 1.0
        return mat
    if kind == "generator":
        from . import benchmarks

        return benchmarks.matrix_from_generator(payload, dim=dim)
    raise ValueError(f"unknown matrix kind {kind!r}")


def matrix_to_json(mat) -> dict:
    mat = np.asarray(mat, dtype=np.complex128)
    return {
        "dense": [[[float(v.real), float(v.imag)] for v in row] for row in mat]
    }


def load_model_spec(obj) -> MixtureModel:
    """Build a MixtureModel from a parsed model-spec JSON object (or path)."""
    if isinstance(obj, (str, bytes)):
        with open(obj) as fh:
            obj = json.load(fh)
    if "generator" in obj and "A" not in obj:
        from . import benchmarks

        return benchmarks.model_from_generator(obj["generator"])
    for key in ("d", "n", "R", "A", "B"):
        if key not in obj:
            raise ValueError(f"model spec is missing field {key!r}")
    d, n, R = int(obj["d"]), int(obj["n"]), int(obj["R"])
    if len(obj["A"]) != R or len(obj["B"]) != R:
        raise ValueError(f"field 'A'/'B' must each list R={R} matrices")
    A = [matrix_from_json(a, dim=d) for a in obj["A"]]
    B = [matrix_from_json(b, dim=n) for b in obj["B"]]
    m = MixtureModel(A, B)
    if m.d != d or m.n != n:
        raise ValueError(
            f"declared dimensions d={d}, n={n} do not match matrices "
            f"({m.d}, {m.n})"
        )
    return m


def model_to_spec(m: MixtureModel) -> dict:
    return {
        "d": m.d,
        "n": m.n,
        "R": m.R,
        "A": [matrix_to_json(a) for a in m.A],
        "B": [matrix_to_json(b) for b in m.B],
    }
