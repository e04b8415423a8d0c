"""Deterministic equivalents: solves the coupled (R x R) fixed-point system

    delta_A[r,s] = -(1/(z n)) tr( A_r A_s* (Id_d + sum_{r',s'} delta_B[r',s'] A_r' A_s'*)^{-1} )
    delta_B[r,s] = -(1/(z n)) tr( B_s* B_r (Id_n + sum_{r',s'} delta_A[r',s'] B_s'* B_r')^{-1} )

for z in the upper half-plane, and evaluates deterministic resolvent traces,
the companion Stieltjes transform and the limiting spectral density curve.

The iteration is a damped fixed point delta <- (1-theta) delta + theta F(delta)
with adaptive damping, accelerated by a safeguarded Anderson mixing step
(rejected whenever it does not decrease the residual). When the direct solve
at the target z fails, a continuation ladder retries from large Im(z)
downward, warm-starting each rung.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import ConvergenceError, DimensionError, DomainError, NumericError
from .model import MixtureModel, gram_matrices

__all__ = [
    "SolverOptions",
    "DualSolution",
    "DensityCurve",
    "dual_residual",
    "solve_dual_system",
    "det_resolvent_trace",
    "companion_stieltjes",
    "density_curve",
    "support_bound",
]

_DAMPING_FLOOR = 1.0 / 64.0
_ANDERSON_MEMORY = 6
_FALLBACK_CONTINUATION_STEPS = 8
_POSITIVITY_SLACK = -1e-8


@dataclass(frozen=True)
class SolverOptions:
    tolerance: float = 1e-12  # absolute sup-entry residual
    max_iterations: int = 20000
    initial_damping: float = 1.0
    continuation_steps: int = 0  # 0 = direct solve, ladder only on failure

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not 0 < self.initial_damping <= 1:
            raise ValueError("initial_damping must lie in (0, 1]")
        if self.continuation_steps < 0:
            raise ValueError("continuation_steps must be >= 0")


@dataclass(frozen=True)
class DualSolution:
    """Solution of the dual system at one z, with solver diagnostics."""

    z: complex
    delta_A: np.ndarray
    delta_B: np.ndarray
    residual: float
    iterations: int
    damping_final: float

    def to_json_dict(self) -> dict:
        def cmat(m):
            return [[[float(v.real), float(v.imag)] for v in row] for row in m]

        return {
            "z": [float(self.z.real), float(self.z.imag)],
            "delta_A": cmat(self.delta_A),
            "delta_B": cmat(self.delta_B),
            "residual": self.residual,
            "iterations": self.iterations,
            "damping_final": self.damping_final,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


@dataclass(frozen=True)
class DensityCurve:
    """Grid of x-values with (1/pi) Im s(x + i eta)."""

    eta: float
    xs: np.ndarray
    ys: np.ndarray

    def to_csv(self) -> str:
        lines = ["x,density"]
        lines += [f"{float(x)!r},{float(y)!r}" for x, y in zip(self.xs, self.ys)]
        return "\n".join(lines) + "\n"


def _inner_inverse_A(m: MixtureModel, delta_B) -> np.ndarray:
    f = np.tensordot(delta_B, m.pair_products_A(), axes=([0, 1], [0, 1]))
    f[np.diag_indices(m.d)] += 1.0
    try:
        return np.linalg.inv(f)
    except np.linalg.LinAlgError as exc:
        raise NumericError("singular inner matrix on the A side") from exc


def _inner_inverse_B(m: MixtureModel, delta_A) -> np.ndarray:
    f = np.tensordot(delta_A, m.pair_products_B(), axes=([0, 1], [0, 1]))
    f[np.diag_indices(m.n)] += 1.0
    try:
        return np.linalg.inv(f)
    except np.linalg.LinAlgError as exc:
        raise NumericError("singular inner matrix on the B side") from exc


def _rhs(m: MixtureModel, z, delta_A, delta_B):
    """Right-hand side F of the dual system evaluated at (delta_A, delta_B)."""
    ga = _inner_inverse_A(m, delta_B)
    gb = _inner_inverse_B(m, delta_A)
    new_a = -np.einsum("rsik,ki->rs", m.pair_products_A(), ga) / (z * m.n)
    new_b = -np.einsum("rsik,ki->rs", m.pair_products_B(), gb) / (z * m.n)
    return new_a, new_b


def dual_residual(m: MixtureModel, z, delta_A, delta_B):
    """Residual matrices (q_A, q_B) = delta - F(delta); zero at an exact solution."""
    if np.imag(z) <= 0:
        raise DomainError(f"dual system requires Im(z) > 0, got z = {z}")
    delta_A = np.asarray(delta_A, dtype=np.complex128)
    delta_B = np.asarray(delta_B, dtype=np.complex128)
    new_a, new_b = _rhs(m, z, delta_A, delta_B)
    return delta_A - new_a, delta_B - new_b


def _sup_residual(x, g):
    return float(np.max(np.abs(g - x)))


def _anderson_mix(xs, gs, beta):
    """Type-II Anderson candidate from iterate/image histories."""
    rs = [g - x for x, g in zip(xs, gs)]
    dr = np.stack([rs[j + 1] - rs[j] for j in range(len(rs) - 1)], axis=1)
    dx = np.stack([xs[j + 1] - xs[j] for j in range(len(xs) - 1)], axis=1)
    dg = np.stack([gs[j + 1] - gs[j] for j in range(len(gs) - 1)], axis=1)
    gamma, *_ = np.linalg.lstsq(dr, rs[-1], rcond=None)
    x_bar = xs[-1] - dx @ gamma
    g_bar = gs[-1] - dg @ gamma
    return (1.0 - beta) * x_bar + beta * g_bar


def _solve_at(m: MixtureModel, z, opts: SolverOptions, x0):
    """Damped/Anderson iteration at a single z from the initial pair x0."""
    r2 = m.R * m.R

    def unpack(x):
        return x[:r2].reshape(m.R, m.R), x[r2:].reshape(m.R, m.R)

    def apply_f(x):
        na, nb = _rhs(m, z, *unpack(x))
        return np.concatenate([na.ravel(), nb.ravel()])

    x = x0
    g = apply_f(x)
    res = _sup_residual(x, g)
    best_x, best_res = x, res
    hist_x, hist_g = [x], [g]
    theta = opts.initial_damping
    decreases = 0
    since_improvement = 0
    iterations = 0

    while res > opts.tolerance and iterations < opts.max_iterations:
        iterations += 1
        if len(hist_x) >= 2:
            x_cand = _anderson_mix(hist_x, hist_g, theta)
        else:
            x_cand = x + theta * (g - x)
        try:
            g_cand = apply_f(x_cand)
            res_cand = _sup_residual(x_cand, g_cand)
            diverged = not np.isfinite(res_cand) or res_cand > 100.0 * max(best_res, 1e-300)
        except NumericError:
            diverged = True
        if diverged:
            # damp harder and restart the mixing memory from the current point
            theta = max(theta / 2.0, _DAMPING_FLOOR)
            decreases = 0
            hist_x, hist_g = [x], [g]
            x_cand = x + theta * (g - x)
            try:
                g_cand = apply_f(x_cand)
            except NumericError:
                continue
            res_cand = _sup_residual(x_cand, g_cand)
            if not np.isfinite(res_cand):
                continue
        # acceleration steps are accepted non-monotonically; only sustained
        # stagnation or divergence triggers damping
        if res_cand <= res:
            decreases += 1
            if decreases >= 10:
                theta = min(theta * 2.0, opts.initial_damping)
                decreases = 0
        else:
            decreases = 0
        x, g, res = x_cand, g_cand, res_cand
        hist_x.append(x)
        hist_g.append(g)
        if len(hist_x) > _ANDERSON_MEMORY:
            hist_x.pop(0)
            hist_g.pop(0)
        if res < best_res:
            best_x, best_res = x, res
            since_improvement = 0
        else:
            since_improvement += 1
            if since_improvement >= 100:
                theta = max(theta / 2.0, _DAMPING_FLOOR)
                x = best_x
                g = apply_f(x)
                res = _sup_residual(x, g)
                hist_x, hist_g = [x], [g]
                since_improvement = 0

    if best_res > opts.tolerance:
        raise ConvergenceError(
            f"dual system did not converge at z = {z}: residual "
            f"{best_res:.3e} > {opts.tolerance:.3e} after {iterations} iterations",
            best_residual=best_res,
            iterations=iterations,
        )

    delta_a, delta_b = unpack(best_x)
    for name, delta in (("delta_A", delta_a), ("delta_B", delta_b)):
        im_min = linalg.min_eigenvalue_hermitian((delta - delta.conj().T) / 2j)
        if im_min < _POSITIVITY_SLACK:
            raise ConvergenceError(
                f"converged iterate at z = {z} violates positivity: "
                f"lambda_min(Im {name}) = {im_min:.3e}",
                best_residual=best_res,
                iterations=iterations,
            )
    return DualSolution(
        z=complex(z),
        delta_A=delta_a,
        delta_B=delta_b,
        residual=best_res,
        iterations=iterations,
        damping_final=theta,
    )


def _initial_pair(m: MixtureModel, z):
    ga, gb = gram_matrices(m)
    return np.concatenate([(-ga / z).ravel(), (-gb / z).ravel()])


def solve_dual_system(m: MixtureModel, z, opts: SolverOptions | None = None,
                      initial=None) -> DualSolution:
    """Solve the dual system at z in the upper half-plane.

    ``initial`` may be a previous DualSolution or a (delta_A, delta_B) pair
    used as warm start; the default start is the large-|z| asymptotic
    -Gram/z, which has positive-definite imaginary part for Im(z) > 0.
    """
    if np.imag(z) <= 0:
        raise DomainError(f"solve_dual_system requires Im(z) > 0, got z = {z}")
    opts = opts or SolverOptions()
    if isinstance(initial, DualSolution):
        initial = (initial.delta_A, initial.delta_B)
    if initial is not None:
        da, db = initial
        x0 = np.concatenate([
            np.asarray(da, dtype=np.complex128).ravel(),
            np.asarray(db, dtype=np.complex128).ravel(),
        ])
    else:
        x0 = _initial_pair(m, z)
    try:
        return _solve_at(m, z, opts, x0)
    except (ConvergenceError, NumericError):
        steps = opts.continuation_steps or _FALLBACK_CONTINUATION_STEPS
        if steps == 0:
            raise
    # homotopy in Im(z): contraction is strongest high in the half-plane
    sol = None
    for j in range(steps + 1):
        zj = np.real(z) + 1j * np.imag(z) * 2.0 ** (steps - j)
        x0j = x0 if sol is None else np.concatenate(
            [sol.delta_A.ravel(), sol.delta_B.ravel()]
        )
        if sol is None:
            x0j = _initial_pair(m, zj)
        sol = _solve_at(m, zj, opts, x0j)
    return sol


def det_resolvent_trace(m: MixtureModel, sol: DualSolution, M, side) -> complex:
    """Deterministic-equivalent trace -(1/(z n)) tr(M (Id + ...)^{-1}).

    Side "A" uses the (d x d) inner matrix built from delta_B, side "B" the
    (n x n) inner matrix built from delta_A.
    """
    M = np.asarray(M, dtype=np.complex128)
    if side == "A":
        if M.shape != (m.d, m.d):
            raise DimensionError(f"side A test matrix must be {m.d}x{m.d}, got {M.shape}")
        g = _inner_inverse_A(m, sol.delta_B)
    elif side == "B":
        if M.shape != (m.n, m.n):
            raise DimensionError(f"side B test matrix must be {m.n}x{m.n}, got {M.shape}")
        g = _inner_inverse_B(m, sol.delta_A)
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return complex(-np.einsum("ik,ki->", M, g) / (sol.z * m.n))


def companion_stieltjes(m: MixtureModel, sol: DualSolution) -> complex:
    """s(z) = -1/z - sum_{r,s} delta_A[r,s] delta_B[r,s]."""
    return complex(-1.0 / sol.z - np.sum(sol.delta_A * sol.delta_B))


def support_bound(m: MixtureModel, report=None) -> float:
    """8 sigma^4 (1 + sqrt(c_*))^2, an interval bound for all limiting supports."""
    from .model import check_assumptions

    report = report or check_assumptions(m)
    return float(8.0 * report.sigma_sq ** 2 * (1.0 + np.sqrt(report.c_star)) ** 2)


def density_curve(m: MixtureModel, eta: float, xs, opts: SolverOptions | None = None,
                  ) -> DensityCurve:
    """Evaluate x -> (1/pi) Im s(x + i eta) along an increasing grid.

    Each solve is warm-started from its left neighbor.
    """
    if eta <= 0:
        raise DomainError(f"eta must be positive, got {eta}")
    xs = np.asarray(xs, dtype=np.float64)
    if xs.ndim != 1 or xs.size == 0 or np.any(np.diff(xs) <= 0):
        raise ValueError("xs must be a non-empty strictly increasing 1-d grid")
    opts = opts or SolverOptions()
    ys = np.empty_like(xs)
    history = []  # (x, delta_A, delta_B) of recent solves, for extrapolation
    for k, x in enumerate(xs):
        z = complex(x, eta)
        prev = _extrapolate_initial(history, x)
        try:
            sol = solve_dual_system(m, z, opts, initial=prev)
        except (ConvergenceError, NumericError) as exc:
            raise ConvergenceError(
                f"density solve failed at x = {x}: {exc}",
                best_residual=getattr(exc, "best_residual", None),
                iterations=getattr(exc, "iterations", None),
            ) from exc
        ys[k] = np.imag(companion_stieltjes(m, sol)) / np.pi
        history.append((float(x), sol.delta_A, sol.delta_B))
        if len(history) > 3:
            history.pop(0)
    return DensityCurve(eta=float(eta), xs=xs, ys=ys)


def _extrapolate_initial(history, x):
    """Lagrange extrapolation of recent (delta_A, delta_B) solutions to the
    next grid abscissa; falls back to the last solution or the default."""
    if not history:
        return None
    if len(history) == 1:
        return history[0][1], history[0][2]
    pts = history[-3:]
    xs = np.array([p[0] for p in pts])
    weights = np.array([
        np.prod([(x - xs[j]) / (xs[i] - xs[j]) for j in range(len(pts)) if j != i])
        for i in range(len(pts))
    ])
    da = sum(w * p[1] for w, p in zip(weights, pts))
    db = sum(w * p[2] for w, p in zip(weights, pts))
    return da, db
