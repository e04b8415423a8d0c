"""Experiment drivers: density overlays (deterministic curve vs. one
realization's eigenvalues), error-decay studies over n, and the
native-vs-similar-Gaussian universality comparison. All outputs are plain
tables; plotting is left to whatever consumes the CSV.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import detequiv
from .benchmarks import ExampleSpec, build_example
from .detequiv import DensityCurve, SolverOptions
from .ensemble import (
    SimilarGaussian,
    build_Y,
    empirical_trace,
    sample_covariances,
    sample_X,
)
from .errors import ConvergenceError, NumericError, SepCovMixError
from .linalg import hermitian_eig

__all__ = [
    "ErrorRecord",
    "ConvergenceTable",
    "UniversalitySummary",
    "run_density_overlay",
    "run_error_study",
    "run_universality",
    "eigenvalues_to_csv",
]

DEFAULT_GRID_POINTS = 600


def _realization_seeds(master_seed, tag, count):
    """Deterministic 64-bit seeds for `count` realizations of one sub-experiment."""
    ss = np.random.SeedSequence(entropy=[int(master_seed) & ((1 << 64) - 1), int(tag)])
    return [int(s) for s in ss.generate_state(count, dtype=np.uint64)]


def run_density_overlay(spec: ExampleSpec, eta: float, grid_points: int = DEFAULT_GRID_POINTS,
                        seed: int = 0, opts: SolverOptions | None = None):
    """One realization's S~ eigenvalues plus the deterministic density curve
    on an automatic grid covering the observed spectrum with a margin."""
    model, _, _, dist = build_example(spec)
    x = sample_X(model.d, model.n, dist, seed)
    _, s_tilde = sample_covariances(build_Y(model, x))
    eigenvalues = hermitian_eig(s_tilde).eigenvalues
    lo = min(0.0, float(eigenvalues.min()))
    hi = float(eigenvalues.max())
    margin = 0.05 * max(hi - lo, 1.0)
    xs = np.linspace(lo - margin, hi + margin, grid_points)
    curve = detequiv.density_curve(model, eta, xs, opts)
    return curve, eigenvalues


@dataclass(frozen=True)
class ErrorRecord:
    n: int
    realization: int
    z: complex
    a_error: float
    b_error: float
    dist_label: str


@dataclass(frozen=True)
class ConvergenceTable:
    """Aggregated error-decay table: one row per (n, z)."""

    rows: list = field(default_factory=list)  # dicts with n, z, mean/q10/q90, failures
    reps: int = 0
    records: list = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["n,z_re,z_im,mean_a,q10_a,q90_a,mean_b,q10_b,q90_b,failures"]
        for row in self.rows:
            lines.append(
                f"{row['n']},{row['z'].real!r},{row['z'].imag!r},"
                f"{row['mean_a']!r},{row['q10_a']!r},{row['q90_a']!r},"
                f"{row['mean_b']!r},{row['q10_b']!r},{row['q90_b']!r},"
                f"{row['failures']}"
            )
        return "\n".join(lines) + "\n"

    def row(self, n, z):
        for r in self.rows:
            if r["n"] == n and r["z"] == complex(z):
                return r
        raise KeyError(f"no row for n={n}, z={z}")


def run_error_study(spec: ExampleSpec, n_values, reps: int, z_points, master_seed: int = 0,
                    opts: SolverOptions | None = None) -> ConvergenceTable:
    """Fig.-2-style study: for each (n, z) draw `reps` realizations and record
    |empirical trace - deterministic trace| for the example's test matrices.

    The deterministic side is solved once per (n, z); all z-points of one
    realization share the same X. Failed realizations are excluded and
    counted in the 'failures' column.
    """
    z_points = [complex(z) for z in z_points]
    for z in z_points:
        if z.imag <= 0:
            raise SepCovMixError(f"all z-points need Im(z) > 0, got {z}")
    if reps < 1:
        raise SepCovMixError("reps must be >= 1")

    records = []
    rows = []
    for n in n_values:
        model, m_test, mt_test, dist = build_example(spec.with_n(int(n)))
        det_a, det_b = {}, {}
        for z in z_points:
            sol = detequiv.solve_dual_system(model, z, opts)
            det_a[z] = detequiv.det_resolvent_trace(model, sol, m_test, "A")
            det_b[z] = detequiv.det_resolvent_trace(model, sol, mt_test, "B")
        errors = {z: {"a": [], "b": []} for z in z_points}
        failures = {z: 0 for z in z_points}
        for j, seed in enumerate(_realization_seeds(master_seed, n, reps)):
            try:
                x = sample_X(model.d, model.n, dist, seed)
                s, s_tilde = sample_covariances(build_Y(model, x))
                eig_a = hermitian_eig(s)
                eig_b = hermitian_eig(s_tilde)
                for z in z_points:
                    a_err = abs(empirical_trace(model, eig_a, z, m_test, "A") - det_a[z])
                    b_err = abs(empirical_trace(model, eig_b, z, mt_test, "B") - det_b[z])
                    errors[z]["a"].append(a_err)
                    errors[z]["b"].append(b_err)
                    records.append(ErrorRecord(
                        n=int(n), realization=j, z=z,
                        a_error=a_err, b_error=b_err, dist_label=dist.name,
                    ))
            except (ConvergenceError, NumericError):
                for z in z_points:
                    failures[z] += 1
        for z in z_points:
            a = np.asarray(errors[z]["a"])
            b = np.asarray(errors[z]["b"])
            rows.append({
                "n": int(n), "z": z,
                "mean_a": float(a.mean()), "q10_a": float(np.quantile(a, 0.1)),
                "q90_a": float(np.quantile(a, 0.9)),
                "mean_b": float(b.mean()), "q10_b": float(np.quantile(b, 0.1)),
                "q90_b": float(np.quantile(b, 0.9)),
                "failures": failures[z],
            })
    return ConvergenceTable(rows=rows, reps=int(reps), records=records)


@dataclass(frozen=True)
class UniversalitySummary:
    n: int
    z: complex
    reps: int
    dist_label: str
    mean_a: float
    q10_a: float
    q90_a: float
    mean_b: float
    q10_b: float
    q90_b: float

    def to_json_dict(self):
        return {
            "n": self.n, "z": [self.z.real, self.z.imag], "reps": self.reps,
            "dist": self.dist_label,
            "mean_a": self.mean_a, "q10_a": self.q10_a, "q90_a": self.q90_a,
            "mean_b": self.mean_b, "q10_b": self.q10_b, "q90_b": self.q90_b,
        }


def run_universality(spec: ExampleSpec, n: int, reps: int, z, master_seed: int = 0,
                     ) -> UniversalitySummary:
    """Compare empirical traces under the example's native entry law against
    an independent moment-matched Gaussian draw, realization by realization.
    Purely empirical: no dual-system solve is involved."""
    z = complex(z)
    if z.imag <= 0:
        raise SepCovMixError(f"need Im(z) > 0, got {z}")
    model, m_test, mt_test, dist = build_example(spec.with_n(int(n)))
    gauss = SimilarGaussian(dist)
    a_diffs, b_diffs = [], []
    seeds = _realization_seeds(master_seed, n, 2 * reps)
    for j in range(reps):
        x_native = sample_X(model.d, model.n, dist, seeds[2 * j])
        x_gauss = sample_X(model.d, model.n, gauss, seeds[2 * j + 1])
        traces = []
        for x in (x_native, x_gauss):
            s, s_tilde = sample_covariances(build_Y(model, x))
            tr_a = empirical_trace(model, hermitian_eig(s), z, m_test, "A")
            tr_b = empirical_trace(model, hermitian_eig(s_tilde), z, mt_test, "B")
            traces.append((tr_a, tr_b))
        a_diffs.append(abs(traces[0][0] - traces[1][0]))
        b_diffs.append(abs(traces[0][1] - traces[1][1]))
    a = np.asarray(a_diffs)
    b = np.asarray(b_diffs)
    return UniversalitySummary(
        n=int(n), z=z, reps=int(reps), dist_label=dist.name,
        mean_a=float(a.mean()), q10_a=float(np.quantile(a, 0.1)),
        q90_a=float(np.quantile(a, 0.9)),
        mean_b=float(b.mean()), q10_b=float(np.quantile(b, 0.1)),
        q90_b=float(np.quantile(b, 0.9)),
    )


def eigenvalues_to_csv(eigenvalues) -> str:
    lines = ["index,eigenvalue"]
    lines += [f"{i},{float(v)!r}" for i, v in enumerate(np.asarray(eigenvalues))]
    return "\n".join(lines) + "\n"
